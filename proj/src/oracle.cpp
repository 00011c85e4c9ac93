#include "fbv/oracle.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "fbv/relweb.hpp"

namespace fbv {

const char* pruning_name(Pruning p) {
    switch (p) {
    case Pruning::None: return "none";
    case Pruning::Interaction: return "is";
    case Pruning::LazyInteraction: return "lis";
    case Pruning::Pruned: return "ps";
    }
    return "?";
}

namespace {

using Mask = std::uint64_t;

int popcount(Mask m) { return __builtin_popcountll(m); }

struct Abort {};

// Per-par-node label masks, in the preorder used by the site enumerators.
struct ParInfo {
    std::vector<std::size_t> path;
    std::vector<Mask> child;
    std::vector<std::vector<Mask>> grand;  // filled for copar children
};

enum class Res { Yes, No, Cut };

}  // namespace

struct Oracle::Impl {
    SearchConfig cfg;

    // label interning for the bitmask representation
    std::unordered_map<std::string, int> ids;
    std::vector<int> dual_id;

    struct Entry {
        std::uint8_t verdict = 0;  // 0 unknown, 1 in progress, 2 provable, 3 unprovable
        std::uint32_t stamp = 0;
        std::shared_ptr<const RuleInstance> step;
    };
    std::unordered_map<std::string, Entry> memo;
    std::uint32_t stamp = 0;
    SearchStats stats;
    std::vector<std::string> active;

    explicit Impl(SearchConfig c) : cfg(c) {}

    // ---- keys ----------------------------------------------------------

    int intern(const std::string& name, Polarity pol) {
        std::string l = (pol == Polarity::Negative ? "-" : "+") + name;
        auto it = ids.find(l);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(ids.size());
        ids.emplace(l, id);
        dual_id.push_back(-1);
        std::string d = (pol == Polarity::Negative ? "+" : "-") + name;
        auto jt = ids.find(d);
        if (jt != ids.end()) {
            dual_id[static_cast<std::size_t>(id)] = jt->second;
            dual_id[static_cast<std::size_t>(jt->second)] = id;
        }
        return id;
    }

    Mask dual_mask(Mask m) const {
        Mask out = 0;
        for (; m; m &= m - 1) {
            int d = dual_id[static_cast<std::size_t>(__builtin_ctzll(m))];
            if (d >= 0) out |= Mask{1} << d;
        }
        return out;
    }

    // Fast representation: a flat structure whose labels are pairwise distinct.
    bool fast_eligible(const Structure& s) {
        if (cfg.system != System::FBV || !is_flat(s)) return false;
        if (!distinct_pairs_check(s)) return false;
        for (const auto& o : occurrences(s).entries) {
            std::string l = (o.polarity == Polarity::Negative ? "-" : "+") + o.name;
            if (!ids.count(l) && ids.size() >= 64) return false;
            intern(o.name, o.polarity);
        }
        return true;
    }

    Mask label_mask(const Structure& s) {
        if (s.is_atom()) return Mask{1} << intern(s.atom().name, s.atom().polarity);
        Mask m = 0;
        for (const auto& c : s.children()) m |= label_mask(c);
        return m;
    }

    struct Fast {
        Mask v = 0;
        std::array<Mask, 64> adj{};
    };

    Mask fill(const Structure& s, Fast& f, std::vector<ParInfo>* info, std::vector<std::size_t>& path) {
        if (s.is_unit()) return 0;
        if (s.is_atom()) {
            Mask m = Mask{1} << intern(s.atom().name, s.atom().polarity);
            f.v |= m;
            return m;
        }
        std::size_t slot = 0;
        if (info && s.kind() == NodeKind::Par) {
            slot = info->size();
            info->push_back({path, {}, {}});
        }
        std::vector<Mask> kids;
        Mask all = 0;
        for (std::size_t i = 0; i < s.children().size(); ++i) {
            path.push_back(i);
            Mask m = fill(s.children()[i], f, info, path);
            path.pop_back();
            kids.push_back(m);
            all |= m;
        }
        if (s.kind() == NodeKind::Par) {
            for (Mask m : kids)
                for (Mask x = m; x; x &= x - 1) f.adj[static_cast<std::size_t>(__builtin_ctzll(x))] |= all & ~m;
            if (info) {
                ParInfo& pi = (*info)[slot];
                pi.child = kids;
                pi.grand.resize(kids.size());
                for (std::size_t i = 0; i < kids.size(); ++i) {
                    const Structure& c = s.children()[i];
                    if (c.kind() == NodeKind::Copar)
                        for (const auto& g : c.children()) pi.grand[i].push_back(label_mask(g));
                }
            }
        }
        return all;
    }

    // Rows with the edges between a and b removed.
    static Mask row(const Fast& f, int v, Mask a, Mask b) {
        Mask r = f.adj[static_cast<std::size_t>(v)];
        Mask bitv = Mask{1} << v;
        if (a & bitv) r &= ~b;
        if (b & bitv) r &= ~a;
        return r;
    }

    static std::string encode(const Fast& f, Mask v, Mask a, Mask b) {
        std::string out(8, '\0');
        for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
        unsigned acc = 0, nbits = 0;
        for (Mask x = v; x; x &= x - 1) {
            int i = __builtin_ctzll(x);
            Mask higher = v & ~((Mask{2} << i) - 1);
            Mask r = row(f, i, a, b);
            for (Mask y = higher; y; y &= y - 1) {
                acc |= static_cast<unsigned>((r >> __builtin_ctzll(y)) & 1u) << nbits;
                if (++nbits == 8) {
                    out.push_back(static_cast<char>(acc));
                    acc = nbits = 0;
                }
            }
        }
        if (nbits) out.push_back(static_cast<char>(acc));
        return out;
    }

    bool fast_necessary(const Fast& f, Mask v, Mask a, Mask b) const {
        if (!cfg.necessary_conditions) return true;
        std::vector<std::pair<int, int>> pairs;
        for (Mask x = v; x; x &= x - 1) {
            int i = __builtin_ctzll(x);
            int d = dual_id[static_cast<std::size_t>(i)];
            if (d < 0 || !(v >> d & 1u)) return false;
            if (!(row(f, i, a, b) >> d & 1u)) return false;
            if (i < d) pairs.emplace_back(i, d);
        }
        for (std::size_t x = 0; x < pairs.size(); ++x)
            for (std::size_t y = x + 1; y < pairs.size(); ++y) {
                auto [p, np] = pairs[x];
                for (int flipq = 0; flipq < 2; ++flipq) {
                    int q = flipq ? pairs[y].second : pairs[y].first;
                    int nq = flipq ? pairs[y].first : pairs[y].second;
                    Mask rp = row(f, p, a, b), rnp = row(f, np, a, b);
                    if (!(rp >> q & 1u) && !(rnp >> nq & 1u) && (rp >> nq & 1u) && (rnp >> q & 1u)) return false;
                }
            }
        return true;
    }

    bool balanced(const Structure& s) const {
        std::map<std::string, int> bal;
        for (const auto& o : occurrences(s).entries) bal[o.name] += o.polarity == Polarity::Positive ? 1 : -1;
        return std::all_of(bal.begin(), bal.end(), [](const auto& kv) { return kv.second == 0; });
    }

    bool general_necessary(const Structure& s) const {
        if (!balanced(s)) return false;
        if (!cfg.necessary_conditions) return true;
        RelationWeb w = web_of(s);
        for (std::size_t i = 0; i < w.size(); ++i) {
            bool ok = false;
            for (std::size_t j = 0; j < w.size() && !ok; ++j)
                ok = j != i && w.occs().entries[j].name == w.occs().entries[i].name &&
                     w.occs().entries[j].polarity != w.occs().entries[i].polarity &&
                     w.kind(i, j) == RelationKind::ParRel;
            if (!ok) return false;
        }
        if (is_flat(s) && distinct_pairs_check(s) && c2_check(s)) return false;
        return true;
    }

    std::string key_of(const Structure& s) {
        if (fast_eligible(s)) {
            Fast f;
            std::vector<std::size_t> path;
            fill(s, f, nullptr, path);
            return encode(f, f.v, 0, 0);
        }
        return "g" + render(s);
    }

    // ---- search --------------------------------------------------------

    Entry& touch(const std::string& key) {
        Entry& e = memo[key];
        if (e.stamp != stamp) {
            e.stamp = stamp;
            if (++stats.visited > cfg.max_visited) throw Abort{};
        }
        return e;
    }

    bool allowed(bool is, bool lis, bool ps) const {
        switch (cfg.pruning) {
        case Pruning::None: return true;
        case Pruning::Interaction: return is;
        case Pruning::LazyInteraction: return lis;
        case Pruning::Pruned: return ps;
        }
        return true;
    }

    Res finish(const std::string& key, Res r, std::shared_ptr<const RuleInstance> step) {
        active.pop_back();
        Entry& e = memo[key];
        if (r == Res::Yes) {
            e.verdict = 2;
            e.step = std::move(step);
        } else if (r == Res::No) {
            e.verdict = 3;
        } else {
            e.verdict = 0;
        }
        return r;
    }

    // Handles one child given by key; `build` materializes it on demand.
    template <class Build, class Necessary>
    Res child(const std::string& key, std::size_t depth, Build&& build, Necessary&& necessary,
              std::shared_ptr<const RuleInstance>& winner) {
        ++stats.expanded;
        Entry& e = touch(key);
        if (e.verdict == 2) {
            winner = std::make_shared<const RuleInstance>(build());
            return Res::Yes;
        }
        if (e.verdict == 3 || e.verdict == 1) return Res::No;
        if (!necessary()) {
            e.verdict = 3;
            return Res::No;
        }
        RuleInstance inst = build();
        Res r = search(inst.premise, key, depth + 1);
        if (r == Res::Yes) winner = std::make_shared<const RuleInstance>(std::move(inst));
        return r;
    }

    Res search(const Structure& s, const std::string& key, std::size_t depth) {
        Entry& self = touch(key);
        if (self.verdict == 2) return Res::Yes;
        if (self.verdict == 3 || self.verdict == 1) return Res::No;
        if (s.is_unit()) {
            self.verdict = 2;
            return Res::Yes;
        }
        if (cfg.max_depth && depth >= cfg.max_depth) return Res::Cut;
        self.verdict = 1;
        active.push_back(key);
        bool cut = false;
        std::shared_ptr<const RuleInstance> winner;

        auto take = [&](Res r) {
            if (r == Res::Cut) cut = true;
            return r == Res::Yes;
        };

        if (fast_eligible(s)) {
            Fast f;
            std::vector<ParInfo> info;
            std::vector<std::size_t> path;
            fill(s, f, &info, path);

            for (const auto& site : ai_sites(s)) {
                const ParInfo& pi = info_for(info, site.at);
                Mask gone = pi.child[site.i] | pi.child[site.j];
                Mask v = f.v & ~gone;
                std::string k = encode(f, v, 0, 0);
                Res r = child(
                    k, depth, [&] { return materialize(s, site); },
                    [&] { return fast_necessary(f, v, 0, 0); }, winner);
                if (take(r)) return finish(key, Res::Yes, winner);
            }

            struct Pending {
                SwitchSite site;
                Mask a, b;
            };
            std::vector<Pending> first, later;
            for (const auto& site : switch_sites(s)) {
                const ParInfo& pi = info_for(info, site.at);
                Mask mr = 0, mk = 0, mt = 0;
                if (site.copar >= 0) {
                    const auto& g = pi.grand[static_cast<std::size_t>(site.copar)];
                    for (std::size_t x = 0; x < g.size(); ++x) (site.r >> x & 1u ? mr : mk) |= g[x];
                } else {
                    for (std::size_t x = 0; x < pi.child.size(); ++x)
                        if (site.r >> x & 1u) mk |= pi.child[x];
                }
                for (std::size_t x = 0; x < pi.child.size(); ++x)
                    if (site.t >> x & 1u) mt |= pi.child[x];
                bool is = site.copar >= 0 && (dual_mask(mt) & mr) != 0;
                bool lis = is && popcount(site.t) == 1;
                bool ps = (dual_mask(mk) & mt) == 0;
                if (!allowed(is, lis, ps)) continue;
                (is ? first : later).push_back({site, mk, mt});
            }
            for (auto* list : {&first, &later})
                for (const auto& pd : *list) {
                    std::string k = encode(f, f.v, pd.a, pd.b);
                    Res r = child(
                        k, depth, [&] { return materialize(s, pd.site); },
                        [&] { return fast_necessary(f, f.v, pd.a, pd.b); }, winner);
                    if (take(r)) return finish(key, Res::Yes, winner);
                }
            return finish(key, cut ? Res::Cut : Res::No, nullptr);
        }

        // General path: build every premise.
        std::vector<RuleInstance> insts = enumerate_ai_down(s);
        {
            std::vector<RuleInstance> first, later;
            for (auto& inst : enumerate_switch(s)) {
                bool is = is_interaction(inst);
                bool lis = is && is_lazy_interaction(inst);
                bool ps = is_pruned(inst);
                if (!allowed(is, lis, ps)) continue;
                (is ? first : later).push_back(std::move(inst));
            }
            for (auto* list : {&first, &later})
                for (auto& inst : *list) insts.push_back(std::move(inst));
        }
        if (cfg.system == System::BV)
            for (auto& inst : enumerate_q_down(s)) insts.push_back(std::move(inst));
        for (auto& inst : insts) {
            std::string k = key_of(inst.premise);
            Res r = child(
                k, depth, [&] { return inst; }, [&] { return general_necessary(inst.premise); }, winner);
            if (take(r)) return finish(key, Res::Yes, winner);
        }
        return finish(key, cut ? Res::Cut : Res::No, nullptr);
    }

    static const ParInfo& info_for(const std::vector<ParInfo>& info, const Position& at) {
        for (const auto& pi : info)
            if (pi.path == at.path) return pi;
        throw std::logic_error("oracle: par node not indexed");
    }

    SearchResult prove(const Structure& input) {
        SearchResult out;
        stats = {};
        ++stamp;
        active.clear();
        Structure s = normalize(ensure_occ_ids(input));
        std::string key = key_of(s);
        try {
            Res r;
            if (!s.is_unit() && !general_necessary(s)) {
                touch(key).verdict = 3;
                r = Res::No;
            } else {
                r = search(s, key, 0);
            }
            if (r == Res::Cut) {
                out.status = SearchStatus::LimitExceeded;
            } else if (r == Res::No) {
                out.status = SearchStatus::Unprovable;
            } else {
                out.status = SearchStatus::Proved;
                out.proof = rebuild_proof(s, key);
                out.stats.proof_length = out.proof->steps.size();
            }
        } catch (const Abort&) {
            for (const auto& k : active) memo[k].verdict = 0;
            active.clear();
            out.status = SearchStatus::LimitExceeded;
        }
        std::optional<std::size_t> len = out.stats.proof_length;
        out.stats = stats;
        out.stats.proof_length = len;
        return out;
    }

    Derivation rebuild_proof(const Structure& s, const std::string& key) {
        Derivation d;
        d.conclusion = s;
        std::string k = key;
        Structure cur = s;
        while (!cur.is_unit()) {
            auto it = memo.find(k);
            if (it == memo.end() || it->second.verdict != 2 || !it->second.step)
                throw std::logic_error("oracle: broken proof chain");
            d.steps.push_back(*it->second.step);
            cur = d.steps.back().premise;
            k = key_of(cur);
        }
        d.steps.push_back(o_down());
        d.is_proof = true;
        return d;
    }
};

Oracle::Oracle(SearchConfig cfg) : impl_(std::make_unique<Impl>(cfg)) {}
Oracle::~Oracle() = default;
Oracle::Oracle(Oracle&&) noexcept = default;
Oracle& Oracle::operator=(Oracle&&) noexcept = default;

SearchResult Oracle::prove(const Structure& s) { return impl_->prove(s); }
const SearchConfig& Oracle::config() const { return impl_->cfg; }
std::size_t Oracle::memo_size() const { return impl_->memo.size(); }

SearchResult prove_exhaustive(const Structure& s, const SearchConfig& cfg) { return Oracle(cfg).prove(s); }

std::optional<Derivation> derive(const Structure& from, const Structure& to, const SearchConfig& cfg) {
    Structure start = normalize(ensure_occ_ids(from));
    const std::string goal = render(to);
    Derivation d;
    d.conclusion = start;
    if (render(start) == goal) return d;

    std::unordered_set<std::string> dead;
    std::size_t visited = 0;
    std::vector<RuleInstance> trail;
    auto dfs = [&](auto&& self, const Structure& s, std::size_t depth) -> bool {
        if (cfg.max_depth && depth >= cfg.max_depth) return false;
        for (auto& inst : enumerate_rules(s, cfg.system)) {
            std::string k = render(inst.premise);
            if (k == goal) {
                trail.push_back(std::move(inst));
                return true;
            }
            if (dead.count(k)) continue;
            if (++visited > cfg.max_visited) throw LimitExceeded("derive: visit limit reached");
            trail.push_back(inst);
            if (self(self, inst.premise, depth + 1)) return true;
            trail.pop_back();
            dead.insert(std::move(k));
        }
        return false;
    };
    if (!dfs(dfs, start, 0)) return std::nullopt;
    d.steps = std::move(trail);
    return d;
}

std::size_t provable_continuations(const Structure& s, RuleName rule, const SearchConfig& cfg) {
    Structure n = normalize(ensure_occ_ids(s));
    std::vector<RuleInstance> insts;
    switch (rule) {
    case RuleName::AiDown: insts = enumerate_ai_down(n); break;
    case RuleName::Switch: insts = enumerate_switch(n); break;
    case RuleName::QDown: insts = enumerate_q_down(n); break;
    case RuleName::ODown: return n.is_unit() ? 1 : 0;
    }
    Oracle o(cfg);
    std::size_t count = 0;
    for (const auto& inst : insts) {
        SearchResult r = o.prove(inst.premise);
        if (r.status == SearchStatus::LimitExceeded) throw LimitExceeded("provable_continuations: limit reached");
        if (r.status == SearchStatus::Proved) ++count;
    }
    return count;
}

bool splitting_spotcheck(const Structure& r, const Structure& t, const Structure& p, const SearchConfig& cfg) {
    Oracle o(cfg);
    auto provable = [&](const Structure& x) {
        SearchResult res = o.prove(x);
        if (res.status == SearchStatus::LimitExceeded) throw LimitExceeded("splitting_spotcheck: limit reached");
        return res.status == SearchStatus::Proved;
    };
    Structure whole = number_occurrences(Structure::par({Structure::copar({r, t}), p}));
    if (!provable(whole)) throw NotApplicable("[(R,T),P] is not provable");

    // Candidates: every structure derivable upward from P, split at its top-level par.
    Structure start = canonicalize(p);
    std::vector<Structure> queue{start};
    std::set<std::string> seen{render(start)};
    for (std::size_t at = 0; at < queue.size(); ++at) {
        Structure q = queue[at];
        Children kids = q.kind() == NodeKind::Par ? q.children() : Children{q};
        if (kids.size() > 20) throw LimitExceeded("splitting_spotcheck: par too wide");
        const std::uint64_t all = (std::uint64_t{1} << kids.size()) - 1;
        for (std::uint64_t m = 0; m <= all; ++m) {
            Children a, b;
            for (std::size_t i = 0; i < kids.size(); ++i) (m >> i & 1u ? a : b).push_back(kids[i]);
            Structure p1 = normalize(Structure::par(a)), p2 = normalize(Structure::par(b));
            if (!derive(p, Structure::par({p1, p2}), cfg)) continue;
            if (provable(Structure::par({r, p1})) && provable(Structure::par({t, p2}))) return true;
        }
        for (const auto& inst : enumerate_rules(q, cfg.system)) {
            if (queue.size() >= cfg.max_visited) throw LimitExceeded("splitting_spotcheck: limit reached");
            Structure next = canonicalize(inst.premise);
            if (seen.insert(render(next)).second) queue.push_back(next);
        }
    }
    return false;
}

AgreementReport cross_validate(const Structure& s, const SearchConfig& cfg, const std::string& counterexample_log) {
    AgreementReport rep;
    StrategyConfig sc;
    sc.counterexample_log = counterexample_log;
    rep.strategy = prove_strategy(s, sc);
    rep.oracle = prove_exhaustive(s, cfg);
    if (rep.oracle.status == SearchStatus::LimitExceeded) throw LimitExceeded("cross_validate: oracle limit reached");
    bool sp = rep.strategy.kind == StrategyOutcome::Kind::Provable;
    bool sn = rep.strategy.kind == StrategyOutcome::Kind::NotProvable;
    bool op = rep.oracle.status == SearchStatus::Proved;
    rep.agree = (sp && op) || (sn && !op);
    if (!rep.agree)
        append_counterexample(counterexample_log, normalize(s),
                              std::string("strategy/oracle disagreement: oracle ") + (op ? "provable" : "unprovable"));
    return rep;
}

}  // namespace fbv
