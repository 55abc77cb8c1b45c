#pragma once

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace worc {

using ServerId = int;
using ClientId = int;
using RegisterSetIndex = int;

/// Opaque client payload. The algorithms never inspect the content; equality
/// and a total order (for deterministic tie-breaking in tests and reports)
/// are all that is required.
class Value {
public:
    Value() = default;
    explicit Value(std::string token) : token_(std::move(token)) {}

    const std::string& token() const { return token_; }

    auto operator<=>(const Value&) const = default;

private:
    std::string token_;
};

inline std::string to_string(const Value& v) { return v.token(); }

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A register cell already holds a different terminal state. Signals a
/// protocol bug; never raised on a legal trace.
class WriteOnceViolation : public Error {
public:
    using Error::Error;
};

class ConflictingDecisions : public Error {
public:
    using Error::Error;
};

class UnknownPreset : public Error {
public:
    using Error::Error;
};

class NoEligibleRegisterSet : public Error {
public:
    using Error::Error;
};

class RegisterSetCapExceeded : public Error {
public:
    using Error::Error;
};

class ConfigParseError : public Error {
public:
    using Error::Error;
};

class ReplayDivergence : public Error {
public:
    using Error::Error;
};

/// One write-once register: unwritten, nil, or a value. Nil and values are
/// terminal; nil is not representable as a Value.
class RegisterState {
public:
    enum class Kind { Unwritten, Nil, Written };

    RegisterState() : kind_(Kind::Unwritten) {}

    static RegisterState unwritten() { return RegisterState(); }
    static RegisterState nil() {
        RegisterState s;
        s.kind_ = Kind::Nil;
        return s;
    }
    static RegisterState written(Value v) {
        RegisterState s;
        s.kind_ = Kind::Written;
        s.value_ = std::move(v);
        return s;
    }

    Kind kind() const { return kind_; }
    bool is_unwritten() const { return kind_ == Kind::Unwritten; }
    bool is_nil() const { return kind_ == Kind::Nil; }
    bool is_written() const { return kind_ == Kind::Written; }

    /// Only valid when is_written().
    const Value& value() const { return value_; }

    auto operator<=>(const RegisterState&) const = default;

private:
    Kind kind_;
    Value value_;
};

std::string to_string(const RegisterState& s);

/// Sparse map (register set, server) -> register content. Cells absent from
/// the map are Unwritten. Recording honours write-once: re-recording an equal
/// terminal state is a no-op, a different one throws.
class StateTable {
public:
    using Cell = std::pair<RegisterSetIndex, ServerId>;

    RegisterState get(RegisterSetIndex r, ServerId s) const;

    /// Pre: v is Nil or Written. Throws WriteOnceViolation on conflict.
    void record(RegisterSetIndex r, ServerId s, const RegisterState& v);

    bool empty() const { return cells_.empty(); }
    std::size_t size() const { return cells_.size(); }

    /// Highest register set index with a recorded cell, or -1 when empty.
    RegisterSetIndex max_register_set() const;

    const std::map<Cell, RegisterState>& cells() const { return cells_; }

    /// True when every cell of this table appears identically in `other`.
    bool subset_of(const StateTable& other) const;

    bool operator==(const StateTable&) const = default;

private:
    std::map<Cell, RegisterState> cells_;
};

}  // namespace worc
