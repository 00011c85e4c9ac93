#include "fbv/families.hpp"

#include <algorithm>
#include <unordered_set>

namespace fbv {

namespace {

using Mask = std::uint32_t;

struct Generator {
    const std::vector<Atom>& leaves;
    bool with_seq;

    // Unordered partitions of `m` into at least two blocks.
    static void set_partitions(Mask m, const std::function<void(const std::vector<Mask>&)>& f) {
        std::vector<int> elems;
        for (int i = 0; i < 32; ++i)
            if (m >> i & 1u) elems.push_back(i);
        std::vector<Mask> blocks;
        std::function<void(std::size_t)> rec = [&](std::size_t at) {
            if (at == elems.size()) {
                if (blocks.size() >= 2) f(blocks);
                return;
            }
            Mask b = Mask{1} << elems[at];
            for (std::size_t i = 0, nb = blocks.size(); i < nb; ++i) {
                blocks[i] |= b;
                rec(at + 1);
                blocks[i] &= ~b;
            }
            blocks.push_back(b);
            rec(at + 1);
            blocks.pop_back();
        };
        rec(0);
    }

    // Ordered partitions of `m` into at least two blocks.
    static void ordered_partitions(Mask m, const std::function<void(const std::vector<Mask>&)>& f) {
        std::vector<Mask> blocks;
        std::function<void(Mask)> rec = [&](Mask rest) {
            if (!rest) {
                if (blocks.size() >= 2) f(blocks);
                return;
            }
            for (Mask b = rest; b; b = (b - 1) & rest) {
                if (blocks.empty() && b == m) continue;
                blocks.push_back(b);
                rec(rest & ~b);
                blocks.pop_back();
            }
        };
        rec(m);
    }

    void product(const std::vector<Mask>& blocks, std::size_t at, NodeKind k, Children& acc, const StructureSink& sink) {
        if (at == blocks.size()) {
            sink(Structure::make(k, acc));
            return;
        }
        gen(blocks[at], k, [&](const Structure& c) {
            acc.push_back(c);
            product(blocks, at + 1, k, acc, sink);
            acc.pop_back();
        });
    }

    void gen(Mask m, NodeKind forbid, const StructureSink& sink) {
        if ((m & (m - 1)) == 0) {
            sink(Structure::atom(leaves[static_cast<std::size_t>(__builtin_ctz(m))]));
            return;
        }
        for (NodeKind k : {NodeKind::Par, NodeKind::Copar, NodeKind::Seq}) {
            if (k == forbid || (k == NodeKind::Seq && !with_seq)) continue;
            auto each = [&](const std::vector<Mask>& blocks) {
                Children acc;
                product(blocks, 0, k, acc, sink);
            };
            if (k == NodeKind::Seq)
                ordered_partitions(m, each);
            else
                set_partitions(m, each);
        }
    }
};

Structure merge_random(std::mt19937_64& rng, Children items, bool with_seq) {
    if (items.empty()) return Structure::unit();
    while (items.size() > 1) {
        std::uniform_int_distribution<std::size_t> pick(0, items.size() - 1);
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        std::uniform_int_distribution<int> kind(0, with_seq ? 2 : 1);
        int k = kind(rng);
        Structure a = items[i], b = items[j];
        Structure m = k == 0 ? Structure::par({a, b}) : k == 1 ? Structure::copar({a, b}) : Structure::seq({a, b});
        if (i < j) std::swap(i, j);
        items.erase(items.begin() + static_cast<long>(i));
        items.erase(items.begin() + static_cast<long>(j));
        items.push_back(m);
    }
    return normalize(items.front());
}

std::vector<std::vector<std::size_t>> node_paths(const Structure& s) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    auto walk = [&](auto&& self, const Structure& t) -> void {
        out.push_back(cur);
        for (std::size_t i = 0; i < t.children().size(); ++i) {
            cur.push_back(i);
            self(self, t.children()[i]);
            cur.pop_back();
        }
    };
    walk(walk, s);
    return out;
}

Structure replace(const Structure& s, const std::vector<std::size_t>& path, std::size_t d, const Structure& r) {
    if (d == path.size()) return r;
    Children ch = s.children();
    ch[path[d]] = replace(ch[path[d]], path, d + 1, r);
    return Structure::make(s.kind(), std::move(ch));
}

const Structure& node(const Structure& s, const std::vector<std::size_t>& path) {
    const Structure* cur = &s;
    for (auto i : path) cur = &cur->children()[i];
    return *cur;
}

// Two nonempty groups, uniformly among the splits.
std::pair<Children, Children> split2(std::mt19937_64& rng, const Children& ch) {
    std::uniform_int_distribution<std::uint64_t> pick(1, (std::uint64_t{1} << ch.size()) - 2);
    std::uint64_t m = pick(rng);
    Children a, b;
    for (std::size_t i = 0; i < ch.size(); ++i) (m >> i & 1u ? a : b).push_back(ch[i]);
    return {a, b};
}

}  // namespace

void for_each_structure(const std::vector<Atom>& leaves, bool with_seq, const StructureSink& sink) {
    if (leaves.empty()) {
        sink(Structure::unit());
        return;
    }
    if (leaves.size() > 31) throw std::length_error("for_each_structure: too many leaves");
    Generator g{leaves, with_seq};
    g.gen((Mask{1} << leaves.size()) - 1, NodeKind::Unit, sink);
}

std::vector<Structure> web_family(const std::vector<std::string>& names, std::size_t max_occ, bool with_seq) {
    std::vector<Structure> out;
    std::unordered_set<std::string> seen;
    for (std::size_t k = 1; k <= max_occ; ++k) {
        // multisets of size k, as nondecreasing index sequences
        std::vector<std::size_t> idx(k, 0);
        for (;;) {
            std::vector<Atom> leaves;
            for (std::size_t i = 0; i < k; ++i) leaves.push_back(Atom{names[idx[i]], Polarity::Positive, static_cast<int>(i)});
            for_each_structure(leaves, with_seq, [&](const Structure& s) {
                Structure c = canonicalize(s);
                if (seen.insert(canonical_key(c)).second) out.push_back(c);
            });
            std::size_t pos = k;
            while (pos > 0 && idx[pos - 1] == names.size() - 1) --pos;
            if (pos == 0) break;
            ++idx[pos - 1];
            for (std::size_t i = pos; i < k; ++i) idx[i] = idx[pos - 1];
        }
    }
    return out;
}

void for_each_flat_distinct(const std::vector<std::string>& names, std::size_t max_occ, const StructureSink& sink) {
    std::vector<Atom> labels;
    for (const auto& n : names) {
        labels.push_back(Atom{n, Polarity::Positive, -1});
        labels.push_back(Atom{n, Polarity::Negative, -1});
    }
    const Mask all = (Mask{1} << labels.size()) - 1;
    for (Mask m = 1; m <= all; ++m) {
        if (static_cast<std::size_t>(__builtin_popcount(m)) > max_occ) continue;
        std::vector<Atom> leaves;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (m >> i & 1u) {
                Atom a = labels[i];
                a.occ_id = static_cast<int>(leaves.size());
                leaves.push_back(a);
            }
        for_each_structure(leaves, false, sink);
    }
}

Structure random_structure(std::mt19937_64& rng, const std::vector<Atom>& leaves, bool with_seq) {
    Children items;
    for (const auto& a : leaves) items.push_back(Structure::atom(a));
    std::shuffle(items.begin(), items.end(), rng);
    return merge_random(rng, std::move(items), with_seq);
}

Structure random_flat_distinct(std::mt19937_64& rng, std::size_t max_occ) {
    std::uniform_int_distribution<std::size_t> pairs(1, std::max<std::size_t>(1, max_occ / 2));
    std::size_t p = pairs(rng);
    std::vector<Atom> leaves;
    for (std::size_t i = 0; i < p; ++i) {
        std::string n = std::string(1, static_cast<char>('a' + i % 26)) + (i >= 26 ? std::to_string(i / 26) : "");
        leaves.push_back(Atom{n, Polarity::Positive, -1});
        leaves.push_back(Atom{n, Polarity::Negative, -1});
    }
    if (leaves.size() > 2 && std::uniform_int_distribution<int>(0, 9)(rng) == 0) {
        std::uniform_int_distribution<std::size_t> drop(0, leaves.size() - 1);
        leaves.erase(leaves.begin() + static_cast<long>(drop(rng)));
    }
    return number_occurrences(random_structure(rng, leaves, false));
}

Structure random_provable_flat(std::mt19937_64& rng, std::size_t pairs) {
    Structure s = Structure::unit();
    for (std::size_t i = 0; i < pairs; ++i) {
        std::string n = std::string(1, static_cast<char>('a' + i % 26)) + (i >= 26 ? std::to_string(i / 26) : "");
        Structure pair = Structure::par({Structure::atom(n), Structure::atom(n, Polarity::Negative)});
        auto paths = node_paths(s);
        const auto& path = paths[std::uniform_int_distribution<std::size_t>(0, paths.size() - 1)(rng)];
        // (N,[x,-x]) is provable whenever N is, since the unit is neutral for copar
        bool cop = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
        Structure here = cop ? Structure::copar({node(s, path), pair}) : Structure::par({node(s, path), pair});
        s = normalize(replace(s, path, 0, here));
    }

    // downward switches and mixes
    auto rounds = std::uniform_int_distribution<std::size_t>(0, pairs)(rng);
    for (std::size_t r = 0; r < rounds; ++r) {
        std::vector<std::pair<std::vector<std::size_t>, int>> sites;  // copar path, par child or -1
        for (const auto& p : node_paths(s)) {
            const Structure& c = node(s, p);
            if (c.kind() != NodeKind::Copar) continue;
            sites.push_back({p, -1});
            for (std::size_t k = 0; k < c.children().size(); ++k)
                if (c.children()[k].kind() == NodeKind::Par) sites.push_back({p, static_cast<int>(k)});
        }
        if (sites.empty()) break;
        auto [p, k] = sites[std::uniform_int_distribution<std::size_t>(0, sites.size() - 1)(rng)];
        const Structure& c = node(s, p);
        Structure repl;
        if (k < 0) {
            auto [x, y] = split2(rng, c.children());
            repl = Structure::par({Structure::copar(x), Structure::copar(y)});
        } else {
            const Structure& par = c.children()[static_cast<std::size_t>(k)];
            auto [rr, tt] = split2(rng, par.children());
            Children cop = {Structure::par(rr)};
            for (std::size_t x = 0; x < c.children().size(); ++x)
                if (static_cast<int>(x) != k) cop.push_back(c.children()[x]);
            repl = Structure::par({Structure::copar(cop), Structure::par(tt)});
        }
        s = normalize(replace(s, p, 0, repl));
    }
    return number_occurrences(canonicalize(s));
}

Structure scramble(std::mt19937_64& rng, const Structure& s) {
    if (s.is_atom()) {
        if (std::uniform_int_distribution<int>(0, 5)(rng) == 0) return Structure::par({s});
        return s;
    }
    if (s.is_unit()) return s;
    Children ch;
    for (const auto& c : s.children()) ch.push_back(scramble(rng, c));
    if (s.kind() != NodeKind::Seq) std::shuffle(ch.begin(), ch.end(), rng);
    std::uniform_int_distribution<int> coin(0, 3);
    if (coin(rng) == 0) ch.insert(ch.begin() + static_cast<long>(std::uniform_int_distribution<std::size_t>(0, ch.size())(rng)), Structure::unit());
    if (ch.size() >= 3 && coin(rng) == 0) {
        // regroup two adjacent children under the same connective
        std::size_t i = std::uniform_int_distribution<std::size_t>(0, ch.size() - 2)(rng);
        Structure g = Structure::make(s.kind(), {ch[i], ch[i + 1]});
        ch.erase(ch.begin() + static_cast<long>(i), ch.begin() + static_cast<long>(i) + 2);
        ch.insert(ch.begin() + static_cast<long>(i), g);
    }
    return Structure::make(s.kind(), std::move(ch));
}

}  // namespace fbv
