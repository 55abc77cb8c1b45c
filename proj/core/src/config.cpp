#include "worc/config.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

namespace worc {

Quorum::Quorum(std::vector<ServerId> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool Quorum::contains(ServerId s) const {
    return std::binary_search(members_.begin(), members_.end(), s);
}

std::string to_string(const Quorum& q) {
    std::ostringstream out;
    out << "{";
    for (std::size_t i = 0; i < q.members().size(); ++i) {
        if (i) out << ",";
        out << "S" << q.members()[i];
    }
    out << "}";
    return out.str();
}

namespace {

// Server sets are tiny; a 64-bit mask per quorum makes tuple intersection a
// chain of ANDs with early pruning.
std::uint64_t mask_of(const Quorum& q) {
    std::uint64_t m = 0;
    for (ServerId s : q.members()) m |= (std::uint64_t{1} << s);
    return m;
}

bool tuples_intersect(std::span<const std::vector<std::uint64_t>> sets, std::size_t i,
                      std::uint64_t acc) {
    if (acc == 0) return false;
    if (i == sets.size()) return true;
    for (std::uint64_t m : sets[i]) {
        if (!tuples_intersect(sets, i + 1, acc & m)) return false;
    }
    return true;
}

}  // namespace

bool intersects(std::span<const QuorumSet> quorum_sets) {
    std::vector<std::vector<std::uint64_t>> masks;
    masks.reserve(quorum_sets.size());
    for (const QuorumSet& qs : quorum_sets) {
        std::vector<std::uint64_t> ms;
        ms.reserve(qs.size());
        for (const Quorum& q : qs) ms.push_back(mask_of(q));
        masks.push_back(std::move(ms));
    }
    return tuples_intersect(masks, 0, ~std::uint64_t{0});
}

bool intersects(const QuorumSet& a, const QuorumSet& b) {
    const QuorumSet sets[] = {a, b};
    return intersects(std::span<const QuorumSet>(sets));
}

bool intersects(const QuorumSet& a, const QuorumSet& b, const QuorumSet& c) {
    const QuorumSet sets[] = {a, b, c};
    return intersects(std::span<const QuorumSet>(sets));
}

std::string to_string(RegisterSetMode m) {
    return m == RegisterSetMode::ClientRestricted ? "classic" : "fast";
}

Configuration::Configuration(int servers, int clients, std::vector<RangeRule> rules,
                             Allocation allocation)
    : servers_(servers), clients_(clients), rules_(std::move(rules)),
      allocation_(std::move(allocation)) {
    if (servers_ <= 0) throw ConfigParseError("configuration needs at least one server");
    if (clients_ <= 0) throw ConfigParseError("configuration needs at least one client");
    if (rules_.empty()) throw ConfigParseError("configuration needs at least one rule");
    RegisterSetIndex expected = 0;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        const RangeRule& rule = rules_[i];
        if (rule.from != expected) {
            throw ConfigParseError("rule ranges must partition [0,inf): rule " +
                                   std::to_string(i) + " starts at " +
                                   std::to_string(rule.from) + ", expected " +
                                   std::to_string(expected));
        }
        const bool last = (i + 1 == rules_.size());
        if (last) {
            if (rule.to) throw ConfigParseError("final rule must be the open-ended tail");
        } else {
            if (!rule.to) throw ConfigParseError("only the final rule may be open-ended");
            if (*rule.to < rule.from) throw ConfigParseError("rule range is empty");
            expected = *rule.to + 1;
        }
        if (rule.set_config.phase1.empty() || rule.set_config.phase2.empty()) {
            throw ConfigParseError("both quorum sets of a rule must be non-empty");
        }
        for (const QuorumSet* qs : {&rule.set_config.phase1, &rule.set_config.phase2}) {
            for (const Quorum& q : *qs) {
                if (q.empty()) throw ConfigParseError("quorums must be non-empty");
                for (ServerId s : q.members()) {
                    if (s < 0 || s >= servers_) {
                        throw ConfigParseError("quorum member S" + std::to_string(s) +
                                               " out of range");
                    }
                }
            }
        }
    }
}

const RegisterSetConfig& Configuration::register_set(RegisterSetIndex r) const {
    for (const RangeRule& rule : rules_) {
        if (rule.covers(r)) return rule.set_config;
    }
    throw Error("no rule covers register set " + std::to_string(r));
}

std::optional<ClientId> Configuration::allocated_client(RegisterSetIndex r) const {
    if (mode(r) == RegisterSetMode::QuorumIntersecting) return std::nullopt;
    auto it = allocation_.overrides.find(r);
    if (it != allocation_.overrides.end()) return it->second;
    if (!allocation_.round_robin) {
        throw ConfigParseError("client-restricted register set " + std::to_string(r) +
                               " has no allocated client");
    }
    return static_cast<ClientId>(r % clients_);
}

std::string to_string(CheckClause c) {
    switch (c) {
        case CheckClause::ClassicIntersection: return "classic-intersection";
        case CheckClause::WeakenedIntersection: return "weakened-intersection";
        case CheckClause::FastSelfIntersection: return "fast-self-intersection";
        case CheckClause::FastTripleIntersection: return "fast-triple-intersection";
    }
    return "?";
}

std::string Counterexample::describe() const {
    std::ostringstream out;
    out << to_string(clause);
    if (r) out << " r=" << *r;
    if (r_prime) out << " r'=" << *r_prime;
    for (const Quorum& q : quorums) out << " " << to_string(q);
    return out.str();
}

std::string CheckReport::describe() const {
    if (passed) return "pass";
    std::ostringstream out;
    out << "fail";
    for (const Counterexample& ce : counterexamples) out << "\n  " << ce.describe();
    return out.str();
}

namespace {

bool quorums_disjoint(const Quorum& a, const Quorum& b) {
    QuorumSet qa{a}, qb{b};
    return !intersects(qa, qb);
}

// Smallest failing pair among two quorum sets, in lexicographic quorum order.
std::optional<std::pair<Quorum, Quorum>> smallest_disjoint_pair(const QuorumSet& a,
                                                                const QuorumSet& b) {
    QuorumSet sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    for (const Quorum& qa : sa) {
        for (const Quorum& qb : sb) {
            if (quorums_disjoint(qa, qb)) return std::make_pair(qa, qb);
        }
    }
    return std::nullopt;
}

struct RulePairWitness {
    RegisterSetIndex r;
    RegisterSetIndex r_prime;
};

// Smallest (r, r') with r in rule a, r' in rule b, r' < r <= max_r, if any.
std::optional<RulePairWitness> smallest_witness(const RangeRule& a, const RangeRule& b,
                                                RegisterSetIndex max_r) {
    RegisterSetIndex r_lo = std::max(a.from, b.from + 1);
    RegisterSetIndex r_hi = max_r;
    if (a.to) r_hi = std::min(r_hi, *a.to);
    if (r_lo > r_hi) return std::nullopt;
    // r' = b.from is valid: b.from <= r_lo - 1 <= r - 1 and within b's range.
    return RulePairWitness{r_lo, b.from};
}

}  // namespace

CheckReport check_classic_paxos(const Configuration& cfg) {
    QuorumSet all;
    for (const RangeRule& rule : cfg.rules()) {
        all.insert(all.end(), rule.set_config.phase1.begin(), rule.set_config.phase1.end());
        all.insert(all.end(), rule.set_config.phase2.begin(), rule.set_config.phase2.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());

    CheckReport report;
    if (auto pair = smallest_disjoint_pair(all, all)) {
        report.passed = false;
        report.counterexamples.push_back(Counterexample{
            CheckClause::ClassicIntersection, std::nullopt, std::nullopt,
            {pair->first, pair->second}});
    }
    return report;
}

CheckReport check_weakened(const Configuration& cfg, RegisterSetIndex max_r) {
    CheckReport report;
    std::optional<Counterexample> best;
    for (const RangeRule& rule_r : cfg.rules()) {
        for (const RangeRule& rule_rp : cfg.rules()) {
            auto witness = smallest_witness(rule_r, rule_rp, max_r);
            if (!witness) continue;
            if (intersects(rule_r.set_config.phase1, rule_rp.set_config.phase2)) continue;
            auto pair = smallest_disjoint_pair(rule_r.set_config.phase1,
                                               rule_rp.set_config.phase2);
            Counterexample ce{CheckClause::WeakenedIntersection, witness->r,
                              witness->r_prime,
                              {pair->first, pair->second}};
            auto key = [](const Counterexample& c) {
                return std::make_tuple(*c.r, *c.r_prime, c.quorums[0], c.quorums[1]);
            };
            if (!best || key(ce) < key(*best)) best = ce;
        }
    }
    if (best) {
        report.passed = false;
        report.counterexamples.push_back(*best);
    }
    return report;
}

CheckReport check_weakened_enumerated(const Configuration& cfg, RegisterSetIndex max_r) {
    CheckReport report;
    for (RegisterSetIndex r = 0; r <= max_r; ++r) {
        for (RegisterSetIndex rp = 0; rp < r; ++rp) {
            if (intersects(cfg.phase1_quorums(r), cfg.phase2_quorums(rp))) continue;
            auto pair = smallest_disjoint_pair(cfg.phase1_quorums(r), cfg.phase2_quorums(rp));
            report.passed = false;
            report.counterexamples.push_back(Counterexample{
                CheckClause::WeakenedIntersection, r, rp, {pair->first, pair->second}});
            return report;
        }
    }
    return report;
}

CheckReport check_fast(const Configuration& cfg, RegisterSetIndex max_r) {
    CheckReport report = check_weakened(cfg, max_r);

    // Self-intersection of each fast set's phase-2 quorums.
    std::optional<Counterexample> best_self;
    for (const RangeRule& rule : cfg.rules()) {
        if (rule.set_config.mode != RegisterSetMode::QuorumIntersecting) continue;
        if (rule.from > max_r) continue;
        if (intersects(rule.set_config.phase2, rule.set_config.phase2)) continue;
        auto pair = smallest_disjoint_pair(rule.set_config.phase2, rule.set_config.phase2);
        Counterexample ce{CheckClause::FastSelfIntersection, rule.from, std::nullopt,
                          {pair->first, pair->second}};
        if (!best_self || *ce.r < *best_self->r) best_self = ce;
    }
    if (best_self) {
        report.passed = false;
        report.counterexamples.push_back(*best_self);
    }

    // Triple intersection: phase-1 quorums of r with pairs of phase-2 quorums
    // of earlier fast sets.
    std::optional<Counterexample> best_triple;
    for (const RangeRule& rule_r : cfg.rules()) {
        for (const RangeRule& rule_rp : cfg.rules()) {
            if (rule_rp.set_config.mode != RegisterSetMode::QuorumIntersecting) continue;
            auto witness = smallest_witness(rule_r, rule_rp, max_r);
            if (!witness) continue;
            const QuorumSet& p1 = rule_r.set_config.phase1;
            const QuorumSet& p2 = rule_rp.set_config.phase2;
            if (intersects(p1, p2, p2)) continue;
            // Smallest failing triple in lexicographic order.
            QuorumSet s1 = p1, s2 = p2;
            std::sort(s1.begin(), s1.end());
            std::sort(s2.begin(), s2.end());
            std::optional<Counterexample> found;
            for (const Quorum& q1 : s1) {
                for (const Quorum& qa : s2) {
                    for (const Quorum& qb : s2) {
                        QuorumSet a{q1}, b{qa}, c{qb};
                        if (!intersects(a, b, c)) {
                            found = Counterexample{CheckClause::FastTripleIntersection,
                                                   witness->r, witness->r_prime,
                                                   {q1, qa, qb}};
                            break;
                        }
                    }
                    if (found) break;
                }
                if (found) break;
            }
            auto key = [](const Counterexample& c) {
                return std::make_tuple(*c.r, *c.r_prime, c.quorums);
            };
            if (found && (!best_triple || key(*found) < key(*best_triple))) {
                best_triple = found;
            }
        }
    }
    if (best_triple) {
        report.passed = false;
        report.counterexamples.push_back(*best_triple);
    }
    return report;
}

QuorumSet size_k_quorums(int servers, int k) {
    QuorumSet out;
    std::vector<ServerId> pick;
    auto rec = [&](auto&& self, int next) -> void {
        if (static_cast<int>(pick.size()) == k) {
            out.emplace_back(pick);
            return;
        }
        for (int s = next; s < servers; ++s) {
            pick.push_back(s);
            self(self, s + 1);
            pick.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

QuorumSet majority_quorums(int servers) {
    return size_k_quorums(servers, servers / 2 + 1);
}

QuorumSet all_servers_quorum(int servers) {
    std::vector<ServerId> all;
    for (int s = 0; s < servers; ++s) all.push_back(s);
    return {Quorum(all)};
}

namespace {

// Accepts "name" or "name(k)".
std::pair<std::string, std::optional<int>> parse_preset_name(const std::string& name) {
    auto open = name.find('(');
    if (open == std::string::npos) return {name, std::nullopt};
    if (name.back() != ')') throw UnknownPreset("malformed preset name: " + name);
    std::string base = name.substr(0, open);
    std::string arg = name.substr(open + 1, name.size() - open - 2);
    try {
        return {base, std::stoi(arg)};
    } catch (const std::exception&) {
        throw UnknownPreset("malformed preset parameter: " + name);
    }
}

RangeRule tail_rule(RegisterSetIndex from, RegisterSetConfig cfg) {
    return RangeRule{from, std::nullopt, std::move(cfg)};
}

RangeRule range_rule(RegisterSetIndex from, RegisterSetIndex to, RegisterSetConfig cfg) {
    return RangeRule{from, to, std::move(cfg)};
}

}  // namespace

Configuration preset(const std::string& name, int servers, int clients) {
    auto [base, k] = parse_preset_name(name);
    const RegisterSetMode classic = RegisterSetMode::ClientRestricted;
    const RegisterSetMode fast = RegisterSetMode::QuorumIntersecting;

    if (base == "paxos-majority") {
        QuorumSet maj = majority_quorums(servers);
        return Configuration(servers, clients, {tail_rule(0, {maj, maj, classic})});
    }
    if (base == "disjoint-pairs") {
        // Alternating single disjoint quorums over the two server halves.
        if (servers < 2) throw UnknownPreset("disjoint-pairs needs at least 2 servers");
        std::vector<ServerId> lo, hi;
        for (int s = 0; s < servers / 2; ++s) lo.push_back(s);
        for (int s = servers / 2; s < servers; ++s) hi.push_back(s);
        QuorumSet even{Quorum(lo)}, odd{Quorum(hi)};
        // Contiguous range rules cannot express infinite alternation, so the
        // parity pattern is spelled out per index across the default run cap
        // (16 register sets) with the tail continuing from index 15.
        std::vector<RangeRule> rules;
        for (RegisterSetIndex r = 0; r < 15; ++r) {
            rules.push_back(range_rule(r, r, {r % 2 == 0 ? even : odd,
                                              r % 2 == 0 ? even : odd, classic}));
        }
        rules.push_back(tail_rule(15, {odd, odd, classic}));
        return Configuration(servers, clients, std::move(rules));
    }
    if (base == "single-quorum-pairs") {
        if (servers < 2) throw UnknownPreset("single-quorum-pairs needs at least 2 servers");
        std::vector<ServerId> lo, hi;
        for (int s = 0; s < servers / 2; ++s) lo.push_back(s);
        for (int s = servers / 2; s < servers; ++s) hi.push_back(s);
        QuorumSet both{Quorum(lo), Quorum(hi)};
        return Configuration(servers, clients, {tail_rule(0, {both, both, classic})});
    }
    if (base == "fast-3of4") {
        if (servers != 4) throw UnknownPreset("fast-3of4 is defined for 4 servers");
        QuorumSet q = size_k_quorums(4, 3);
        return Configuration(servers, clients, {tail_rule(0, {q, q, fast})});
    }
    if (base == "colocated") {
        int kk = k.value_or(1);
        if (kk < 1) throw UnknownPreset("colocated(k) needs k >= 1");
        QuorumSet all = all_servers_quorum(servers);
        QuorumSet maj = majority_quorums(servers);
        return Configuration(servers, clients,
                             {range_rule(0, kk - 1, {all, all, classic}),
                              tail_rule(kk, {maj, maj, classic})});
    }
    if (base == "fixed-majority") {
        if (servers < 2) throw UnknownPreset("fixed-majority needs at least 2 servers");
        std::vector<ServerId> designated;
        for (int s = 0; s < servers / 2 + 1; ++s) designated.push_back(s);
        QuorumSet fixed{Quorum(designated)};
        QuorumSet maj = majority_quorums(servers);
        return Configuration(servers, clients,
                             {range_rule(0, 0, {fixed, fixed, fast}),
                              tail_rule(1, {maj, maj, classic})});
    }
    if (base == "reconfigurable") {
        int kk = k.value_or(1);
        if (kk < 1) throw UnknownPreset("reconfigurable(k) needs k >= 1");
        if (servers < 2 || servers % 2 != 0) {
            throw UnknownPreset("reconfigurable needs an even server count");
        }
        std::vector<ServerId> primary, backup;
        for (int s = 0; s < servers / 2; ++s) primary.push_back(s);
        for (int s = servers / 2; s < servers; ++s) backup.push_back(s);
        auto majorities_of = [](const std::vector<ServerId>& group) {
            QuorumSet out;
            int need = static_cast<int>(group.size()) / 2 + 1;
            std::vector<ServerId> pick;
            auto rec = [&](auto&& self, std::size_t next) -> void {
                if (static_cast<int>(pick.size()) == need) {
                    out.emplace_back(pick);
                    return;
                }
                for (std::size_t i = next; i < group.size(); ++i) {
                    pick.push_back(group[i]);
                    self(self, i + 1);
                    pick.pop_back();
                }
            };
            rec(rec, 0);
            return out;
        };
        QuorumSet pq = majorities_of(primary);
        QuorumSet bq = majorities_of(backup);
        return Configuration(servers, clients,
                             {range_rule(0, kk - 1, {pq, pq, classic}),
                              tail_rule(kk, {bq, bq, classic})});
    }
    throw UnknownPreset("unknown preset: " + name);
}

}  // namespace worc
