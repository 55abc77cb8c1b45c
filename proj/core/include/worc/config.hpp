#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "worc/core_model.hpp"

namespace worc {

/// Non-empty set of servers, kept sorted and unique.
class Quorum {
public:
    Quorum() = default;
    explicit Quorum(std::vector<ServerId> members);

    const std::vector<ServerId>& members() const { return members_; }
    bool contains(ServerId s) const;
    bool empty() const { return members_.empty(); }
    std::size_t size() const { return members_.size(); }

    auto operator<=>(const Quorum&) const = default;

private:
    std::vector<ServerId> members_;
};

std::string to_string(const Quorum& q);

using QuorumSet = std::vector<Quorum>;

/// The intersection predicate: true iff every choice of one quorum per set
/// has a common server.
bool intersects(std::span<const QuorumSet> quorum_sets);
bool intersects(const QuorumSet& a, const QuorumSet& b);
bool intersects(const QuorumSet& a, const QuorumSet& b, const QuorumSet& c);

enum class RegisterSetMode {
    ClientRestricted,   // "classic": one allocated writer, disjoint quorums allowed
    QuorumIntersecting  // "fast": any writer, safety rests on quorum overlap
};

std::string to_string(RegisterSetMode m);

/// Per-register-set quorums, split by phase. Not validated on construction so
/// that deliberately broken configurations stay representable; the check_*
/// functions report violations.
struct RegisterSetConfig {
    QuorumSet phase1;
    QuorumSet phase2;
    RegisterSetMode mode = RegisterSetMode::ClientRestricted;

    bool operator==(const RegisterSetConfig&) const = default;
};

/// One contiguous run of register sets sharing a RegisterSetConfig. `to`
/// == nullopt marks the open-ended tail rule.
struct RangeRule {
    RegisterSetIndex from = 0;
    std::optional<RegisterSetIndex> to;
    RegisterSetConfig set_config;

    bool covers(RegisterSetIndex r) const {
        return r >= from && (!to || r <= *to);
    }
};

/// Round-robin allocation of client-restricted register sets, with explicit
/// per-set overrides.
struct Allocation {
    bool round_robin = true;
    std::map<RegisterSetIndex, ClientId> overrides;

    bool operator==(const Allocation&) const = default;
};

/// Full system configuration: server/client counts, range rules partitioning
/// [0, inf), and the client allocation.
class Configuration {
public:
    Configuration() = default;
    /// Throws ConfigParseError unless the rules partition [0, inf) with no
    /// gaps or overlaps and exactly the last rule is open-ended.
    Configuration(int servers, int clients, std::vector<RangeRule> rules,
                  Allocation allocation = Allocation{});

    int servers() const { return servers_; }
    int clients() const { return clients_; }
    const std::vector<RangeRule>& rules() const { return rules_; }
    const Allocation& allocation() const { return allocation_; }

    const RegisterSetConfig& register_set(RegisterSetIndex r) const;
    RegisterSetMode mode(RegisterSetIndex r) const { return register_set(r).mode; }
    const QuorumSet& phase1_quorums(RegisterSetIndex r) const { return register_set(r).phase1; }
    const QuorumSet& phase2_quorums(RegisterSetIndex r) const { return register_set(r).phase2; }

    /// The unique allocated client for a client-restricted set; nullopt for
    /// quorum-intersecting sets.
    std::optional<ClientId> allocated_client(RegisterSetIndex r) const;

private:
    int servers_ = 0;
    int clients_ = 0;
    std::vector<RangeRule> rules_;
    Allocation allocation_;
};

/// Which clause of a quorum requirement failed.
enum class CheckClause {
    ClassicIntersection,   // I(Q, Q) over the union of all quorums
    WeakenedIntersection,  // I(Q1_r, Q2_r') for r' < r
    FastSelfIntersection,  // I(Q2_r, Q2_r) for fast r
    FastTripleIntersection // I(Q1_r, Q2_r', Q2_r') for fast r' < r
};

std::string to_string(CheckClause c);

struct Counterexample {
    CheckClause clause;
    std::optional<RegisterSetIndex> r;
    std::optional<RegisterSetIndex> r_prime;
    std::vector<Quorum> quorums;

    std::string describe() const;
};

struct CheckReport {
    bool passed = true;
    std::vector<Counterexample> counterexamples;

    std::string describe() const;
};

/// Classic requirement: all quorums of all register sets and phases pairwise
/// intersect. Counterexample carries the lexicographically smallest failing
/// pair.
CheckReport check_classic_paxos(const Configuration& cfg);

/// Weakened requirement: for all r <= max_r and r' < r, the phase-1 quorums
/// of r intersect the phase-2 quorums of r'. Range rules make one check per
/// ordered rule pair sufficient.
CheckReport check_weakened(const Configuration& cfg, RegisterSetIndex max_r);

/// Fast requirement: the weakened requirement, plus self-intersection of each
/// fast set's phase-2 quorums, plus triple intersection of phase-1 quorums
/// with pairs of earlier fast phase-2 quorums.
CheckReport check_fast(const Configuration& cfg, RegisterSetIndex max_r);

/// Exhaustive reference for check_weakened: literal enumeration of all
/// (r, r') pairs up to max_r. Used to validate the rule-pair strategy.
CheckReport check_weakened_enumerated(const Configuration& cfg, RegisterSetIndex max_r);

/// Named sample configurations. Parameterized names take the form
/// "colocated(3)" / "reconfigurable(11)"; the bare names default k = 1.
/// Throws UnknownPreset.
Configuration preset(const std::string& name, int servers, int clients);

QuorumSet majority_quorums(int servers);
QuorumSet all_servers_quorum(int servers);
QuorumSet size_k_quorums(int servers, int k);

}  // namespace worc
