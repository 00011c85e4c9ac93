#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fbv/errors.hpp"
#include "fbv/structure.hpp"

namespace fbv {

enum class System { FBV, BV };
enum class RuleName { ODown, AiDown, Switch, QDown };

const char* rule_token(RuleName r);  // "oi", "ai", "s", "q"

struct Position {
    std::vector<std::size_t> path;  // child indices from the root
    friend bool operator==(const Position&, const Position&) = default;
};

struct AiDetail {
    int occ_a = -1, occ_b = -1;
};

// S[(R,R'),T] -> S([R,T],R').  R is the block that moves next to T.
// A mix instance has an empty R: S[R',T] -> S(R',T).
struct SwitchDetail {
    Children r, r_kept, t;
    bool mix = false;
};

// S[<R;R'>,<T;T'>] -> S<[R,T];[R',T']>
struct QDetail {
    Structure r, r_after, t, t_after;
};

struct RuleInstance {
    RuleName rule = RuleName::ODown;
    Structure conclusion;
    Structure premise;
    Position position;
    std::variant<std::monostate, AiDetail, SwitchDetail, QDetail> detail;
};

struct Derivation {
    Structure conclusion;
    std::vector<RuleInstance> steps;  // bottom-up
    bool is_proof = false;
};

// Low-level selections; the oracle evaluates these before building premises.
struct AiSite {
    Position at;  // the par node
    std::size_t i = 0, j = 0;
};

struct SwitchSite {
    Position at;  // the par node
    int copar = -1;           // index of the copar child; -1 for a mix instance
    std::uint64_t r = 0;      // copar children moved (or, for mix, par children forming R')
    std::uint64_t t = 0;      // par children selected as T
};

struct QSite {
    Position at;  // the par node
    std::uint64_t u = 0, v = 0;  // par children forming <R;R'> and <T;T'>
    std::size_t cut_u = 0, cut_v = 0;  // split points, counted in seq children (or 0/1 for non-seq blocks)
};

std::vector<AiSite> ai_sites(const Structure& s);
std::vector<SwitchSite> switch_sites(const Structure& s);
std::vector<QSite> q_sites(const Structure& s);

const Structure& node_at(const Structure& s, const Position& p);
RuleInstance materialize(const Structure& s, const AiSite& site);
RuleInstance materialize(const Structure& s, const SwitchSite& site);
RuleInstance materialize(const Structure& s, const QSite& site);

std::vector<RuleInstance> enumerate_ai_down(const Structure& s);
std::vector<RuleInstance> enumerate_switch(const Structure& s);
std::vector<RuleInstance> enumerate_q_down(const Structure& s);
std::vector<RuleInstance> enumerate_rules(const Structure& s, System sys);

RuleInstance o_down();

// Returns inst.premise after checking that inst was built for s.
Structure apply(const RuleInstance& inst, const Structure& s);
Structure apply(const RuleInstance& inst);

// Side conditions on switch instances, reading R as the moved block,
// the kept copar part as T and the selected par siblings as W.
bool is_interaction(const RuleInstance& inst);
bool is_lazy_interaction(const RuleInstance& inst);
bool is_pruned(const RuleInstance& inst);

bool check_derivation(const Derivation& d, System sys);

// Rule counts keyed by token, e.g. {"ai":3,"oi":1,"s":2}.
std::string rule_multiset(const Derivation& d);

}  // namespace fbv
