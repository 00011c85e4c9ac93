#include "fbv/rules.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fbv {

const char* rule_token(RuleName r) {
    switch (r) {
    case RuleName::ODown: return "oi";
    case RuleName::AiDown: return "ai";
    case RuleName::Switch: return "s";
    case RuleName::QDown: return "q";
    }
    return "?";
}

namespace {

std::uint64_t low_bit(std::uint64_t m) { return m & (~m + 1); }

Structure replace_at(const Structure& s, const std::vector<std::size_t>& path, std::size_t depth,
                     const Structure& repl) {
    if (depth == path.size()) return repl;
    Children ch = s.children();
    ch[path[depth]] = replace_at(ch[path[depth]], path, depth + 1, repl);
    return Structure::make(s.kind(), std::move(ch));
}

Structure rebuild(const Structure& root, const Position& at, const Structure& node) {
    return normalize(replace_at(root, at.path, 0, node));
}

Children select(const Children& ch, std::uint64_t mask) {
    Children out;
    for (std::size_t i = 0; i < ch.size(); ++i)
        if (mask >> i & 1u) out.push_back(ch[i]);
    return out;
}

Structure par_of(Children ch) { return normalize(Structure::par(std::move(ch))); }

template <class F>
void walk_nodes(const Structure& s, std::vector<std::size_t>& path, F& f) {
    f(s, path);
    const auto& ch = s.children();
    for (std::size_t i = 0; i < ch.size(); ++i) {
        path.push_back(i);
        walk_nodes(ch[i], path, f);
        path.pop_back();
    }
}

template <class F>
void for_each_par(const Structure& s, F&& f) {
    std::vector<std::size_t> path;
    auto g = [&](const Structure& n, const std::vector<std::size_t>& p) {
        if (n.kind() == NodeKind::Par) f(n, p);
    };
    walk_nodes(s, path, g);
}

std::vector<std::string> child_keys(const Children& ch) {
    std::vector<std::string> keys;
    keys.reserve(ch.size());
    for (const auto& c : ch) keys.push_back(render(c));
    return keys;
}

bool has_duplicates(const std::vector<std::string>& keys) {
    std::set<std::string> s(keys.begin(), keys.end());
    return s.size() != keys.size();
}

std::string multiset_key(const std::vector<std::string>& keys, std::uint64_t mask) {
    std::vector<std::string> sel;
    for (std::size_t i = 0; i < keys.size(); ++i)
        if (mask >> i & 1u) sel.push_back(keys[i]);
    std::sort(sel.begin(), sel.end());
    std::string out;
    for (const auto& k : sel) out += k + "\x1f";
    return out;
}

struct Block {
    Children items;  // a seq read as its list of children
    std::size_t len() const { return items.size(); }
    Structure prefix(std::size_t cut) const {
        return normalize(Structure::seq(Children(items.begin(), items.begin() + static_cast<long>(cut))));
    }
    Structure suffix(std::size_t cut) const {
        return normalize(Structure::seq(Children(items.begin() + static_cast<long>(cut), items.end())));
    }
};

Block block_of(const Children& ch, std::uint64_t mask) {
    Children sel = select(ch, mask);
    if (sel.size() == 1 && sel[0].kind() == NodeKind::Seq) return Block{sel[0].children()};
    return Block{{par_of(std::move(sel))}};
}

}  // namespace

const Structure& node_at(const Structure& s, const Position& p) {
    const Structure* cur = &s;
    for (auto i : p.path) {
        if (i >= cur->children().size()) throw StaleInstance();
        cur = &cur->children()[i];
    }
    return *cur;
}

std::vector<AiSite> ai_sites(const Structure& s) {
    std::vector<AiSite> out;
    for_each_par(s, [&](const Structure& p, const std::vector<std::size_t>& path) {
        const auto& ch = p.children();
        for (std::size_t i = 0; i < ch.size(); ++i) {
            if (!ch[i].is_atom()) continue;
            for (std::size_t j = i + 1; j < ch.size(); ++j)
                if (ch[j].is_atom() && ch[i].atom().dual_of(ch[j].atom())) out.push_back({Position{path}, i, j});
        }
    });
    return out;
}

std::vector<SwitchSite> switch_sites(const Structure& s) {
    std::vector<SwitchSite> out;
    const bool plain = distinct_pairs_check(s);
    for_each_par(s, [&](const Structure& p, const std::vector<std::size_t>& path) {
        const auto& ch = p.children();
        const std::size_t k = ch.size();
        if (k > 62) throw std::length_error("switch enumeration: par node too wide");
        const std::uint64_t all = (std::uint64_t{1} << k) - 1;
        std::vector<std::string> pkeys;
        bool dedup = !plain && has_duplicates(pkeys = child_keys(ch));
        std::set<std::string> seen;

        for (std::size_t ci = 0; ci < k; ++ci) {
            if (ch[ci].kind() != NodeKind::Copar) continue;
            const auto& cc = ch[ci].children();
            const std::size_t m = cc.size();
            if (m > 62) throw std::length_error("switch enumeration: copar node too wide");
            const std::uint64_t call = (std::uint64_t{1} << m) - 1;
            std::vector<std::string> ckeys;
            bool cdedup = !plain && has_duplicates(ckeys = child_keys(cc));
            const std::uint64_t others = all & ~(std::uint64_t{1} << ci);
            for (std::uint64_t r = 1; r < call; ++r) {
                for (std::uint64_t t = others; t; t = (t - 1) & others) {
                    if (dedup || cdedup) {
                        if (pkeys.empty()) pkeys = child_keys(ch);
                        if (ckeys.empty()) ckeys = child_keys(cc);
                        std::string key = "a" + pkeys[ci] + "|" + multiset_key(ckeys, r) + "|" + multiset_key(pkeys, t);
                        if (!seen.insert(key).second) continue;
                    }
                    out.push_back({Position{path}, static_cast<int>(ci), r, t});
                }
            }
        }
        // mix instances: an unordered pair of disjoint blocks
        for (std::uint64_t a = all; a; a = (a - 1) & all) {
            const std::uint64_t rest = all & ~a;
            for (std::uint64_t b = rest; b; b = (b - 1) & rest) {
                if (low_bit(a) > low_bit(b)) continue;
                if (dedup) {
                    std::string ka = multiset_key(pkeys, a), kb = multiset_key(pkeys, b);
                    if (kb < ka) std::swap(ka, kb);
                    if (!seen.insert("b" + ka + "|" + kb).second) continue;
                }
                out.push_back({Position{path}, -1, a, b});
            }
        }
    });
    // Stable, readable order: by position, copar instances first, then masks ascending.
    return out;
}

std::vector<QSite> q_sites(const Structure& s) {
    std::vector<QSite> out;
    for_each_par(s, [&](const Structure& p, const std::vector<std::size_t>& path) {
        const auto& ch = p.children();
        const std::size_t k = ch.size();
        if (k > 62) throw std::length_error("q enumeration: par node too wide");
        const std::uint64_t all = (std::uint64_t{1} << k) - 1;
        auto len = [&](std::uint64_t m) {
            if ((m & (m - 1)) == 0) {
                std::size_t i = static_cast<std::size_t>(__builtin_ctzll(m));
                if (ch[i].kind() == NodeKind::Seq) return ch[i].children().size();
            }
            return std::size_t{1};
        };
        for (std::uint64_t u = 1; u <= all; ++u) {
            if ((u & all) != u) continue;
            const std::uint64_t rest = all & ~u;
            for (std::uint64_t v = rest; v; v = (v - 1) & rest) {
                if (low_bit(u) > low_bit(v)) continue;
                const std::size_t lu = len(u), lv = len(v);
                for (std::size_t cu = 0; cu <= lu; ++cu)
                    for (std::size_t cv = 0; cv <= lv; ++cv) {
                        bool r_empty = cu == 0, r_after_empty = cu == lu;
                        bool t_empty = cv == 0, t_after_empty = cv == lv;
                        if ((r_empty || t_after_empty) && (r_after_empty || t_empty)) continue;
                        out.push_back({Position{path}, u, v, cu, cv});
                    }
            }
        }
    });
    return out;
}

RuleInstance materialize(const Structure& s, const AiSite& site) {
    const Structure& p = node_at(s, site.at);
    const auto& ch = p.children();
    if (p.kind() != NodeKind::Par || site.j >= ch.size() || !ch[site.i].is_atom() || !ch[site.j].is_atom() ||
        !ch[site.i].atom().dual_of(ch[site.j].atom()))
        throw StaleInstance();
    Children rest;
    for (std::size_t x = 0; x < ch.size(); ++x)
        if (x != site.i && x != site.j) rest.push_back(ch[x]);
    RuleInstance inst;
    inst.rule = RuleName::AiDown;
    inst.conclusion = s;
    inst.position = site.at;
    inst.premise = rebuild(s, site.at, Structure::par(std::move(rest)));
    inst.detail = AiDetail{ch[site.i].atom().occ_id, ch[site.j].atom().occ_id};
    return inst;
}

RuleInstance materialize(const Structure& s, const SwitchSite& site) {
    const Structure& p = node_at(s, site.at);
    if (p.kind() != NodeKind::Par) throw StaleInstance();
    const auto& ch = p.children();
    SwitchDetail d;
    Children rest;
    Structure joined;
    if (site.copar >= 0) {
        const auto ci = static_cast<std::size_t>(site.copar);
        if (ci >= ch.size() || ch[ci].kind() != NodeKind::Copar) throw StaleInstance();
        const auto& cc = ch[ci].children();
        d.r = select(cc, site.r);
        d.r_kept = select(cc, ~site.r);
        d.t = select(ch, site.t);
        Children inner{Structure::copar(d.r)};
        inner.insert(inner.end(), d.t.begin(), d.t.end());
        Children outer{Structure::par(std::move(inner))};
        outer.insert(outer.end(), d.r_kept.begin(), d.r_kept.end());
        joined = Structure::copar(std::move(outer));
        for (std::size_t x = 0; x < ch.size(); ++x) {
            if (x == ci)
                rest.push_back(joined);
            else if (!(site.t >> x & 1u))
                rest.push_back(ch[x]);
        }
    } else {
        d.mix = true;
        d.r_kept = select(ch, site.r);
        d.t = select(ch, site.t);
        joined = Structure::copar({Structure::par(d.r_kept), Structure::par(d.t)});
        bool placed = false;
        for (std::size_t x = 0; x < ch.size(); ++x) {
            bool used = ((site.r | site.t) >> x) & 1u;
            if (!used)
                rest.push_back(ch[x]);
            else if (!placed) {
                rest.push_back(joined);
                placed = true;
            }
        }
    }
    RuleInstance inst;
    inst.rule = RuleName::Switch;
    inst.conclusion = s;
    inst.position = site.at;
    inst.premise = rebuild(s, site.at, Structure::par(std::move(rest)));
    inst.detail = std::move(d);
    return inst;
}

RuleInstance materialize(const Structure& s, const QSite& site) {
    const Structure& p = node_at(s, site.at);
    if (p.kind() != NodeKind::Par) throw StaleInstance();
    const auto& ch = p.children();
    Block bu = block_of(ch, site.u), bv = block_of(ch, site.v);
    if (site.cut_u > bu.len() || site.cut_v > bv.len()) throw StaleInstance();
    QDetail d{bu.prefix(site.cut_u), bu.suffix(site.cut_u), bv.prefix(site.cut_v), bv.suffix(site.cut_v)};
    Structure joined = Structure::seq({Structure::par({d.r, d.t}), Structure::par({d.r_after, d.t_after})});
    Children rest;
    bool placed = false;
    for (std::size_t x = 0; x < ch.size(); ++x) {
        bool used = ((site.u | site.v) >> x) & 1u;
        if (!used)
            rest.push_back(ch[x]);
        else if (!placed) {
            rest.push_back(joined);
            placed = true;
        }
    }
    RuleInstance inst;
    inst.rule = RuleName::QDown;
    inst.conclusion = s;
    inst.position = site.at;
    inst.premise = rebuild(s, site.at, Structure::par(std::move(rest)));
    inst.detail = std::move(d);
    return inst;
}

std::vector<RuleInstance> enumerate_ai_down(const Structure& s) {
    std::vector<RuleInstance> out;
    for (const auto& site : ai_sites(s)) out.push_back(materialize(s, site));
    return out;
}

std::vector<RuleInstance> enumerate_switch(const Structure& s) {
    std::vector<RuleInstance> out;
    for (const auto& site : switch_sites(s)) out.push_back(materialize(s, site));
    return out;
}

std::vector<RuleInstance> enumerate_q_down(const Structure& s) {
    std::vector<RuleInstance> out;
    std::map<std::string, std::vector<Position>> seen;
    for (const auto& site : q_sites(s)) {
        RuleInstance inst = materialize(s, site);
        auto& at = seen[render(inst.premise)];
        if (std::find(at.begin(), at.end(), inst.position) != at.end()) continue;
        at.push_back(inst.position);
        out.push_back(std::move(inst));
    }
    return out;
}

std::vector<RuleInstance> enumerate_rules(const Structure& s, System sys) {
    std::vector<RuleInstance> out = enumerate_ai_down(s);
    auto sw = enumerate_switch(s);
    out.insert(out.end(), std::make_move_iterator(sw.begin()), std::make_move_iterator(sw.end()));
    if (sys == System::BV) {
        auto q = enumerate_q_down(s);
        out.insert(out.end(), std::make_move_iterator(q.begin()), std::make_move_iterator(q.end()));
    }
    return out;
}

RuleInstance o_down() {
    RuleInstance inst;
    inst.rule = RuleName::ODown;
    return inst;
}

Structure apply(const RuleInstance& inst, const Structure& s) {
    if (!(inst.conclusion == s) && render(inst.conclusion) != render(s)) throw StaleInstance();
    return inst.premise;
}

Structure apply(const RuleInstance& inst) { return inst.premise; }

namespace {

using LabelSet = std::set<std::pair<std::string, Polarity>>;

void collect(const Structure& s, LabelSet& out, bool dual) {
    for (const auto& o : occurrences(s).entries) out.insert({o.name, dual ? flip(o.polarity) : o.polarity});
}

LabelSet labels(const Children& ch, bool dual = false) {
    LabelSet out;
    for (const auto& c : ch) collect(c, out, dual);
    return out;
}

bool meets(const LabelSet& a, const LabelSet& b) {
    for (const auto& x : a)
        if (b.count(x)) return true;
    return false;
}

const SwitchDetail* switch_detail(const RuleInstance& inst) {
    if (inst.rule != RuleName::Switch) return nullptr;
    return std::get_if<SwitchDetail>(&inst.detail);
}

}  // namespace

bool is_interaction(const RuleInstance& inst) {
    const SwitchDetail* d = switch_detail(inst);
    if (!d || d->mix) return false;
    return meets(labels(d->t, true), labels(d->r));
}

bool is_lazy_interaction(const RuleInstance& inst) {
    const SwitchDetail* d = switch_detail(inst);
    return d && is_interaction(inst) && d->t.size() == 1;
}

bool is_pruned(const RuleInstance& inst) {
    const SwitchDetail* d = switch_detail(inst);
    if (!d) return false;
    return !meets(labels(d->r_kept, true), labels(d->t));
}

bool check_derivation(const Derivation& d, System sys) {
    std::string expect = render(d.conclusion);
    bool capped = false;
    for (std::size_t i = 0; i < d.steps.size(); ++i) {
        const RuleInstance& st = d.steps[i];
        if (capped) return false;
        if (sys == System::FBV && (st.rule == RuleName::QDown || !is_flat(st.conclusion) || !is_flat(st.premise)))
            return false;
        if (render(st.conclusion) != expect) return false;
        if (st.rule == RuleName::ODown) {
            if (!normalize(st.conclusion).is_unit()) return false;
            capped = true;
            continue;
        }
        Structure c = normalize(st.conclusion);
        std::vector<RuleInstance> candidates;
        switch (st.rule) {
        case RuleName::AiDown: candidates = enumerate_ai_down(c); break;
        case RuleName::Switch: candidates = enumerate_switch(c); break;
        case RuleName::QDown: candidates = enumerate_q_down(c); break;
        default: return false;
        }
        std::string premise = render(st.premise);
        bool found = std::any_of(candidates.begin(), candidates.end(),
                                 [&](const RuleInstance& r) { return render(r.premise) == premise; });
        if (!found) return false;
        expect = premise;
    }
    bool proof = capped && expect == "*";
    return proof == d.is_proof;
}

std::string rule_multiset(const Derivation& d) {
    std::map<std::string, int> count;
    for (const auto& st : d.steps) ++count[rule_token(st.rule)];
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : count) {
        if (!first) out += ",";
        first = false;
        out += "\"" + k + "\":" + std::to_string(v);
    }
    return out + "}";
}

}  // namespace fbv
