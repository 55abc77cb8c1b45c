#include "worc/core_model.hpp"

namespace worc {

std::string to_string(const RegisterState& s) {
    switch (s.kind()) {
        case RegisterState::Kind::Unwritten: return "-";
        case RegisterState::Kind::Nil: return "nil";
        case RegisterState::Kind::Written: return s.value().token();
    }
    return "?";
}

RegisterState StateTable::get(RegisterSetIndex r, ServerId s) const {
    auto it = cells_.find({r, s});
    if (it == cells_.end()) return RegisterState::unwritten();
    return it->second;
}

void StateTable::record(RegisterSetIndex r, ServerId s, const RegisterState& v) {
    if (v.is_unwritten()) {
        throw Error("StateTable::record: cannot record Unwritten");
    }
    auto [it, inserted] = cells_.try_emplace({r, s}, v);
    if (!inserted && it->second != v) {
        throw WriteOnceViolation("state table cell (" + std::to_string(r) + ", S" +
                                 std::to_string(s) + ") already holds " +
                                 to_string(it->second) + ", refusing " + to_string(v));
    }
}

RegisterSetIndex StateTable::max_register_set() const {
    if (cells_.empty()) return -1;
    return cells_.rbegin()->first.first;
}

bool StateTable::subset_of(const StateTable& other) const {
    for (const auto& [cell, state] : cells_) {
        if (other.get(cell.first, cell.second) != state) return false;
    }
    return true;
}

}  // namespace worc
