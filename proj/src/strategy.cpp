#include "fbv/strategy.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

namespace fbv {

namespace {

using Path = std::vector<std::size_t>;

std::unordered_map<int, Path> atom_paths(const Structure& s) {
    std::unordered_map<int, Path> out;
    Path cur;
    auto walk = [&](auto&& self, const Structure& t) -> void {
        if (t.is_atom()) {
            out[t.atom().occ_id] = cur;
            return;
        }
        for (std::size_t i = 0; i < t.children().size(); ++i) {
            cur.push_back(i);
            self(self, t.children()[i]);
            cur.pop_back();
        }
    };
    walk(walk, s);
    return out;
}

const Structure& at(const Structure& s, const Path& p, std::size_t len) {
    const Structure* cur = &s;
    for (std::size_t i = 0; i < len; ++i) cur = &cur->children()[p[i]];
    return *cur;
}

std::size_t common_prefix(const Path& a, const Path& b) {
    std::size_t l = 0;
    while (l < a.size() && l < b.size() && a[l] == b[l]) ++l;
    return l;
}

enum class Weight { Occurrences, One };

IncValue recursive(const Structure& s, int a, int b, Weight w) {
    if (!is_flat(s)) throw FlatOnly();
    auto paths = atom_paths(s);
    auto ia = paths.find(a), ib = paths.find(b);
    if (ia == paths.end() || ib == paths.end() || a == b) throw std::invalid_argument("inc: unknown occurrence");
    const Path& pa = ia->second;
    const Path& pb = ib->second;
    std::size_t l = common_prefix(pa, pb);
    if (at(s, pa, l).kind() == NodeKind::Copar) return IncValue::inf();
    unsigned total = 0;
    for (const Path* p : {&pa, &pb}) {
        for (std::size_t d = l + 1; d < p->size(); ++d) {
            const Structure& node = at(s, *p, d);
            if (node.kind() != NodeKind::Copar) continue;
            if (w == Weight::One)
                total += 1;
            else
                total += static_cast<unsigned>(node.size() - node.children()[(*p)[d]].size());
        }
    }
    return IncValue::of(total);
}

}  // namespace

IncValue ainc(const Structure& s, int a, int b) {
    if (!is_flat(s)) throw FlatOnly();
    RelationWeb w = web_of(s);
    std::size_t ia = SIZE_MAX, ib = SIZE_MAX;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w.occs().entries[i].occ_id == a) ia = i;
        if (w.occs().entries[i].occ_id == b) ib = i;
    }
    if (ia == SIZE_MAX || ib == SIZE_MAX || ia == ib) throw std::invalid_argument("ainc: unknown occurrence");
    if (w.kind(ia, ib) == RelationKind::CoparRel) return IncValue::inf();
    unsigned n = 0;
    for (std::size_t x = 0; x < w.size(); ++x)
        if (x != ia && x != ib && w.kind(ia, x) != w.kind(ib, x)) ++n;
    return IncValue::of(n);
}

IncValue ainc_recursive(const Structure& s, int a, int b) { return recursive(s, a, b, Weight::Occurrences); }

IncValue inc(const Structure& s, int a, int b) { return recursive(s, a, b, Weight::One); }

IncTable inc_table(const Structure& s) {
    if (!is_flat(s)) throw FlatOnly();
    if (!distinct_pairs_check(s)) throw DuplicateAtoms();
    std::map<std::string, IncEntry> by_name;
    for (const auto& o : occurrences(s).entries) {
        auto& e = by_name[o.name];
        e.name = o.name;
        (o.polarity == Polarity::Positive ? e.positive : e.negative) = o.occ_id;
    }
    IncTable t;
    for (auto& [name, e] : by_name) {
        if (e.positive < 0 || e.negative < 0) continue;
        e.value = inc(s, e.positive, e.negative);
        if (t.entries.empty() || e.value < t.min) {
            t.min = e.value;
            t.argmin = t.entries.size();
        }
        t.entries.push_back(e);
    }
    return t;
}

namespace {

std::uint64_t one(std::size_t i) { return std::uint64_t{1} << i; }

std::set<std::pair<std::string, Polarity>> label_set(const Children& ch, bool dual) {
    std::set<std::pair<std::string, Polarity>> out;
    for (const auto& c : ch)
        for (const auto& o : occurrences(c).entries) out.insert({o.name, dual ? flip(o.polarity) : o.polarity});
    return out;
}

bool has_dual_in(const Structure& from, const Children& in) {
    auto duals = label_set({from}, true);
    auto there = label_set(in, false);
    for (const auto& x : duals)
        if (there.count(x)) return true;
    return false;
}

Children others(const Structure& copar, std::size_t skip) {
    Children out;
    for (std::size_t i = 0; i < copar.children().size(); ++i)
        if (i != skip) out.push_back(copar.children()[i]);
    return out;
}

}  // namespace

StepResult step(const Structure& s) {
    if (!is_flat(s) || !is_normal(s)) throw PreconditionViolated("step needs a normal, seq-free structure");
    IncTable table = inc_table(s);
    if (table.entries.empty()) throw PreconditionViolated("no dual pair left");
    const IncEntry& e = table.entries[table.argmin];
    if (table.min.infinite) throw PreconditionViolated("every dual pair is copar-related");

    auto paths = atom_paths(s);
    const Path& pa = paths.at(e.positive);
    const Path& pb = paths.at(e.negative);
    const std::size_t l = common_prefix(pa, pb);
    const Position lca{Path(pa.begin(), pa.begin() + static_cast<long>(l))};
    const Structure& p = at(s, pa, l);
    if (p.kind() != NodeKind::Par) throw PreconditionViolated("dual pair is not par-related");

    StepResult out;
    if (table.min.value == 0) {
        out.instances.push_back(materialize(s, AiSite{lca, std::min(pa[l], pb[l]), std::max(pa[l], pb[l])}));
        out.next = out.instances.back().premise;
        return out;
    }

    // Side view from the lowest common par: the child holding the atom,
    // and, when that child is a copar, the copar child holding the atom.
    struct Side {
        std::size_t child;    // index in p
        bool bare;            // the child is the atom itself
        std::size_t inner;    // index of R inside the copar
        bool trivial;         // R is the atom itself
    };
    auto side = [&](const Path& path) {
        Side sd{path[l], path.size() == l + 1, 0, false};
        if (!sd.bare) {
            sd.inner = path[l + 1];
            sd.trivial = path.size() == l + 2;
        }
        return sd;
    };
    Side sa = side(pa), sb = side(pb);

    // Move R out of the copar at `from` next to the par child `to`.
    auto emit = [&](const Side& from, const Side& to) {
        SwitchSite site{lca, static_cast<int>(from.child), one(from.inner), one(to.child)};
        out.instances.push_back(materialize(s, site));
        out.next = out.instances.back().premise;
        return out;
    };

    if (sa.bare && sb.bare) throw PreconditionViolated("inconsistent incoherence value");
    if (sa.bare) return emit(sb, sa);
    if (sb.bare) return emit(sa, sb);
    if (table.min.value == 1) throw PreconditionViolated("inconsistent incoherence value");

    const Structure& ca = p.children()[sa.child];
    const Structure& cb = p.children()[sb.child];
    const Structure& r = ca.children()[sa.inner];
    const Structure& t = cb.children()[sb.inner];
    Children x = others(ca, sa.inner), y = others(cb, sb.inner);

    if (sa.trivial && sb.trivial) return emit(sa, sb);
    if (sa.trivial) return emit(sb, sa);
    if (sb.trivial) return emit(sa, sb);
    if (!has_dual_in(r, y)) return emit(sb, sa);
    if (!has_dual_in(t, x)) return emit(sa, sb);
    throw DeadEnd("no applicable case for pair " + e.name);
}

const char* reason_name(NotProvableReason r) {
    switch (r) {
    case NotProvableReason::C1Violation: return "C1Violation";
    case NotProvableReason::C2Violation: return "C2Violation";
    case NotProvableReason::DeadEnd: return "DeadEnd";
    }
    return "?";
}

void append_counterexample(const std::string& path, const Structure& s, const std::string& note) {
    if (path.empty()) return;
    std::ofstream f(path, std::ios::app);
    f << "# " << note << "\n" << render(s) << "\n";
}

StrategyOutcome prove_strategy(const Structure& input, const StrategyConfig& cfg) {
    StrategyOutcome out;
    Structure s = normalize(ensure_occ_ids(input));
    out.derivation.conclusion = s;
    if (!is_flat(s)) {
        out.kind = StrategyOutcome::Kind::Inconclusive;
        out.precondition_violated = true;
        out.diagnostic = "PreconditionViolated: the strategy handles seq-free structures only";
        return out;
    }
    if (!distinct_pairs_check(s)) {
        out.kind = StrategyOutcome::Kind::Inconclusive;
        out.precondition_violated = true;
        out.diagnostic = "PreconditionViolated: an atom occurs more than once with the same polarity";
        return out;
    }

    auto verdict_c = [&](const Structure& cur) -> bool {
        if (auto w = c1_check(cur)) {
            out.kind = StrategyOutcome::Kind::NotProvable;
            out.reason = NotProvableReason::C1Violation;
            out.diagnostic = "C1: no par-related dual for " + w->label();
            return true;
        }
        if (auto w = c2_check(cur)) {
            out.kind = StrategyOutcome::Kind::NotProvable;
            out.reason = NotProvableReason::C2Violation;
            out.diagnostic = "C2: " + w->a.label() + " " + w->a_dual.label() + " " + w->q.label() + " " +
                             w->q_dual.label();
            return true;
        }
        return false;
    };

    const std::size_t n = s.size();
    const std::size_t bound = cfg.max_steps ? cfg.max_steps : 2 * n * n;
    Structure cur = s;
    std::size_t taken = 0;
    while (!cur.is_unit()) {
        if (verdict_c(cur)) return out;
        if (taken >= bound) {
            out.kind = StrategyOutcome::Kind::Inconclusive;
            out.diagnostic = "step bound " + std::to_string(bound) + " exceeded";
            append_counterexample(cfg.counterexample_log, s, "strategy step bound exceeded");
            return out;
        }
        StepResult r;
        try {
            r = step(cur);
        } catch (const DeadEnd& e) {
            out.kind = StrategyOutcome::Kind::NotProvable;
            out.reason = NotProvableReason::DeadEnd;
            out.diagnostic = e.what();
            append_counterexample(cfg.counterexample_log, s, std::string("strategy dead end at ") + render(cur));
            return out;
        }
        for (auto& inst : r.instances) out.derivation.steps.push_back(std::move(inst));
        cur = r.next;
        ++taken;
    }
    RuleInstance cap = o_down();
    out.derivation.steps.push_back(cap);
    out.derivation.is_proof = true;
    out.kind = StrategyOutcome::Kind::Provable;
    return out;
}

}  // namespace fbv
