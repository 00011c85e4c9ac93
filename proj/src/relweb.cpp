#include "fbv/relweb.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace fbv {

const char* relation_symbol(RelationKind k) {
    switch (k) {
    case RelationKind::SeqBefore: return "<|";
    case RelationKind::SeqAfter: return "|>";
    case RelationKind::ParRel: return "v";
    case RelationKind::CoparRel: return "^";
    }
    return "?";
}

namespace {

RelationKind inverse(RelationKind k) {
    if (k == RelationKind::SeqBefore) return RelationKind::SeqAfter;
    if (k == RelationKind::SeqAfter) return RelationKind::SeqBefore;
    return k;
}

std::vector<std::string> display_labels(const OccurrenceSet& occs) {
    std::map<std::string, int> count;
    for (const auto& o : occs.entries) ++count[o.label()];
    std::vector<std::string> out;
    for (const auto& o : occs.entries) {
        std::string l = o.label();
        if (count[l] > 1) l += "#" + std::to_string(o.occ_id);
        out.push_back(std::move(l));
    }
    return out;
}

}  // namespace

WebCandidate::WebCandidate(OccurrenceSet occs)
    : occs_(std::move(occs)), n_(occs_.size()), rel_(n_ * n_, 0) {}

void WebCandidate::relate(std::size_t i, std::size_t j, RelationKind k) {
    rel_[i * n_ + j] = bit(k);
    rel_[j * n_ + i] = bit(inverse(k));
}

RelationKind RelationWeb::kind(std::size_t i, std::size_t j) const {
    std::uint8_t m = c_.mask(i, j);
    for (unsigned k = 0; k < 4; ++k)
        if (m & (1u << k)) return static_cast<RelationKind>(k);
    throw std::logic_error("RelationWeb::kind: no relation on pair");
}

bool operator==(const RelationWeb& a, const RelationWeb& b) {
    if (a.size() != b.size()) return false;
    std::unordered_map<int, std::size_t> where;
    for (std::size_t i = 0; i < b.size(); ++i) where[b.occs().entries[i].occ_id] = i;
    std::vector<std::size_t> map(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& o = a.occs().entries[i];
        auto it = where.find(o.occ_id);
        if (it == where.end() || !(b.occs().entries[it->second] == o)) return false;
        map[i] = it->second;
    }
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (i != j && a.candidate().mask(i, j) != b.candidate().mask(map[i], map[j])) return false;
    return true;
}

std::string RelationWeb::dump() const {
    auto labels = display_labels(occs());
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j)
            if (i != j) lines.push_back(labels[i] + " " + relation_symbol(kind(i, j)) + " " + labels[j]);
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

std::string Violation::describe(const WebCandidate& w) const {
    auto labels = display_labels(w.occs());
    std::string out = condition + " violated at";
    for (auto i : witnesses) out += " " + labels[i];
    return out;
}

RelationWeb web_of(const Structure& s) {
    OccurrenceSet occs = occurrences(s);
    std::set<int> ids;
    bool renumber = false;
    for (const auto& o : occs.entries)
        if (o.occ_id < 0 || !ids.insert(o.occ_id).second) renumber = true;
    if (renumber)
        for (std::size_t i = 0; i < occs.size(); ++i) occs.entries[i].occ_id = static_cast<int>(i);

    WebCandidate w(std::move(occs));
    // Subtrees occupy contiguous preorder ranges.
    auto walk = [&](auto&& self, const Structure& t, std::size_t start) -> void {
        if (t.is_atom() || t.is_unit()) return;
        std::vector<std::pair<std::size_t, std::size_t>> ranges;
        std::size_t at = start;
        for (const auto& c : t.children()) {
            self(self, c, at);
            ranges.emplace_back(at, at + c.size());
            at += c.size();
        }
        for (std::size_t x = 0; x < ranges.size(); ++x)
            for (std::size_t y = x + 1; y < ranges.size(); ++y)
                for (std::size_t i = ranges[x].first; i < ranges[x].second; ++i)
                    for (std::size_t j = ranges[y].first; j < ranges[y].second; ++j) {
                        switch (t.kind()) {
                        case NodeKind::Par: w.relate(i, j, RelationKind::ParRel); break;
                        case NodeKind::Copar: w.relate(i, j, RelationKind::CoparRel); break;
                        default: w.relate(i, j, RelationKind::SeqBefore); break;
                        }
                    }
    };
    walk(walk, s, 0);
    return RelationWeb(std::move(w));
}

std::vector<Violation> check_s1_s7(const WebCandidate& w, std::size_t limit) {
    std::vector<Violation> out;
    const std::size_t n = w.size();
    auto push = [&](std::string cond, std::vector<std::size_t> wit) {
        if (out.size() < limit) out.push_back({std::move(cond), std::move(wit)});
        return out.size() >= limit;
    };
    const auto B = RelationKind::SeqBefore, A = RelationKind::SeqAfter, P = RelationKind::ParRel,
               C = RelationKind::CoparRel;

    for (std::size_t i = 0; i < n; ++i)
        if (w.mask(i, i) != 0 && push("s1", {i})) return out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            std::uint8_t m = w.mask(i, j);
            if ((m == 0 || (m & (m - 1)) != 0) && push("s2", {i, j})) return out;
            if (w.has(i, j, B) != w.has(j, i, A) && push("s3", {i, j})) return out;
            if (i < j) {
                if (w.has(i, j, P) != w.has(j, i, P) && push("s5", {i, j})) return out;
                if (w.has(i, j, C) != w.has(j, i, C) && push("s5", {i, j})) return out;
            }
        }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (b == a || !w.has(a, b, B)) continue;
            for (std::size_t c = 0; c < n; ++c)
                if (c != a && c != b && w.has(b, c, B) && !w.has(a, c, B) && push("s4", {a, b, c})) return out;
        }

    // 0 = seq, 1 = par, 2 = copar, 3 = none/ambiguous
    auto cls = [&](std::size_t i, std::size_t j) {
        std::uint8_t m = w.mask(i, j);
        if (m == bit(B) || m == bit(A)) return 0;
        if (m == bit(P)) return 1;
        if (m == bit(C)) return 2;
        return 3;
    };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c) {
                int x = cls(a, b), y = cls(b, c), z = cls(a, c);
                if (x == 3 || y == 3 || z == 3) continue;
                if (x != y && y != z && x != z && push("s6", {a, b, c})) return out;
            }

    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (b == a) continue;
            for (std::size_t d = 0; d < n; ++d) {
                if (d == a || d == b) continue;
                for (std::size_t c = 0; c < n; ++c) {
                    if (c == a || c == b || c == d) continue;
                    if (w.has(a, b, B) && w.has(a, d, B) && w.has(c, d, B)) {
                        bool ok = w.has(a, c, B) || w.has(b, c, B) || w.has(b, d, B) || w.has(c, a, B) ||
                                  w.has(c, b, B) || w.has(d, b, B);
                        if (!ok && push("s7<|", {a, b, c, d})) return out;
                    }
                    for (RelationKind k : {P, C}) {
                        if (a > c) continue;  // the pattern is symmetric under a<->c, b<->d
                        if (w.has(a, b, k) && w.has(a, d, k) && w.has(c, d, k)) {
                            bool ok = w.has(a, c, k) || w.has(b, c, k) || w.has(b, d, k);
                            if (!ok && push(k == P ? "s7v" : "s7^", {a, b, c, d})) return out;
                        }
                    }
                }
            }
        }
    return out;
}

namespace {

struct Rebuilder {
    const WebCandidate& w;

    RelationKind rel(std::size_t i, std::size_t j) const {
        std::uint8_t m = w.mask(i, j);
        for (unsigned k = 0; k < 4; ++k)
            if (m & (1u << k)) return static_cast<RelationKind>(k);
        throw WebError(WebError::Kind::NoPartition, "pair without relation");
    }

    [[noreturn]] static void no_partition() {
        throw WebError(WebError::Kind::NoPartition, "no partition found for a web satisfying s1-s7");
    }

    Structure build(const std::vector<std::size_t>& xi) const {
        if (xi.size() == 1) {
            const auto& o = w.occs().entries[xi[0]];
            return Structure::atom(o.name, o.polarity, o.occ_id);
        }
        std::vector<std::size_t> mu, nu;
        RelationKind sigma;
        partition(xi, mu, nu, sigma);
        Structure u = build(mu), v = build(nu);
        switch (sigma) {
        case RelationKind::SeqBefore: return normalize(Structure::seq({u, v}));
        case RelationKind::ParRel: return normalize(Structure::par({u, v}));
        case RelationKind::CoparRel: return normalize(Structure::copar({u, v}));
        default: no_partition();
        }
    }

    // Seed pair, then absorb each further occurrence; when neither side
    // absorbs it, regroup the two sides around it.
    void partition(const std::vector<std::size_t>& xi, std::vector<std::size_t>& mu, std::vector<std::size_t>& nu,
                   RelationKind& sigma) const {
        std::size_t a = xi[0], b = xi[1];
        sigma = rel(a, b);
        if (sigma == RelationKind::SeqAfter) {
            std::swap(a, b);
            sigma = RelationKind::SeqBefore;
        }
        mu = {a};
        nu = {b};
        for (std::size_t t = 2; t < xi.size(); ++t) {
            std::size_t c = xi[t];
            bool left = std::all_of(mu.begin(), mu.end(), [&](auto d) { return rel(d, c) == sigma; });
            if (left) {
                nu.push_back(c);
                continue;
            }
            bool right = std::all_of(nu.begin(), nu.end(), [&](auto e) { return rel(c, e) == sigma; });
            if (right) {
                mu.push_back(c);
                continue;
            }
            regroup(mu, nu, sigma, c);
        }
        for (auto m : mu)
            for (auto n : nu)
                if (rel(m, n) != sigma) no_partition();
    }

    void regroup(std::vector<std::size_t>& mu, std::vector<std::size_t>& nu, RelationKind& sigma,
                 std::size_t c) const {
        // tau: how c relates to the members that do not carry sigma towards it
        RelationKind tau{};
        bool found = false;
        for (auto d : mu)
            if (rel(d, c) != sigma) {
                tau = rel(d, c);
                found = true;
                break;
            }
        if (!found) no_partition();

        std::vector<std::size_t> mu_s, mu_t, nu_s, nu_t;
        if (sigma == RelationKind::SeqBefore) {
            // mu splits into mu_s (d <| c) and mu_t (d tau c); nu into nu_s (c <| e) and nu_t (c tau e)
            for (auto d : mu) {
                RelationKind r = rel(d, c);
                if (r == sigma)
                    mu_s.push_back(d);
                else if (r == tau)
                    mu_t.push_back(d);
                else
                    no_partition();
            }
            for (auto e : nu) {
                RelationKind r = rel(c, e);
                if (r == sigma)
                    nu_s.push_back(e);
                else if (r == tau)
                    nu_t.push_back(e);
                else
                    no_partition();
            }
            std::vector<std::size_t> rest = mu_t;
            rest.insert(rest.end(), nu_t.begin(), nu_t.end());
            if (!mu_s.empty()) {
                mu = mu_s;
                nu = rest;
                nu.insert(nu.end(), nu_s.begin(), nu_s.end());
                nu.push_back(c);
            } else if (!nu_s.empty()) {
                mu = rest;
                mu.push_back(c);
                nu = nu_s;
            } else {
                mu = rest;
                nu = {c};
                sigma = tau;
            }
            return;
        }

        // sigma is par or copar; tau is <|, |> or the other one
        for (auto d : mu) {
            RelationKind r = rel(d, c);
            if (r == sigma)
                mu_s.push_back(d);
            else if (r == tau)
                mu_t.push_back(d);
            else
                no_partition();
        }
        for (auto e : nu) {
            RelationKind r = rel(e, c);
            if (r == sigma)
                nu_s.push_back(e);
            else if (r == tau)
                nu_t.push_back(e);
            else
                no_partition();
        }
        std::vector<std::size_t> rest = mu_t;
        rest.insert(rest.end(), nu_t.begin(), nu_t.end());
        if (!mu_s.empty()) {
            mu = mu_s;
            nu = rest;
            nu.insert(nu.end(), nu_s.begin(), nu_s.end());
            nu.push_back(c);
        } else if (!nu_s.empty()) {
            mu = rest;
            mu.push_back(c);
            nu = nu_s;
        } else if (tau == RelationKind::SeqBefore) {
            mu = rest;
            nu = {c};
            sigma = RelationKind::SeqBefore;
        } else if (tau == RelationKind::SeqAfter) {
            mu = {c};
            nu = rest;
            sigma = RelationKind::SeqBefore;
        } else {
            mu = rest;
            nu = {c};
            sigma = tau;
        }
    }
};

}  // namespace

Structure web_to_structure(const WebCandidate& w) {
    auto v = check_s1_s7(w, 1);
    if (!v.empty()) throw WebError(WebError::Kind::InvalidWeb, v.front().describe(w));
    if (w.size() == 0) return Structure::unit();
    std::vector<std::size_t> all(w.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return Rebuilder{w}.build(all);
}

namespace {

struct DualIndex {
    std::vector<int> dual;  // index of the dual occurrence, or -1
};

DualIndex dual_index(const OccurrenceSet& occs) {
    std::map<std::pair<std::string, Polarity>, std::size_t> at;
    for (std::size_t i = 0; i < occs.size(); ++i) {
        const auto& o = occs.entries[i];
        if (!at.emplace(std::make_pair(o.name, o.polarity), i).second) throw DuplicateAtoms();
    }
    DualIndex d;
    d.dual.assign(occs.size(), -1);
    for (std::size_t i = 0; i < occs.size(); ++i) {
        const auto& o = occs.entries[i];
        auto it = at.find({o.name, flip(o.polarity)});
        if (it != at.end()) d.dual[i] = static_cast<int>(it->second);
    }
    return d;
}

}  // namespace

std::optional<Occurrence> c1_check(const Structure& s) {
    RelationWeb w = web_of(s);
    DualIndex d = dual_index(w.occs());
    for (std::size_t i = 0; i < w.size(); ++i) {
        int j = d.dual[i];
        if (j < 0 || w.kind(i, static_cast<std::size_t>(j)) != RelationKind::ParRel) return w.occs().entries[i];
    }
    return std::nullopt;
}

std::optional<C2Witness> c2_check(const Structure& s) {
    RelationWeb w = web_of(s);
    DualIndex d = dual_index(w.occs());
    const auto P = RelationKind::ParRel, C = RelationKind::CoparRel;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (d.dual[i] > static_cast<int>(i)) pairs.emplace_back(i, static_cast<std::size_t>(d.dual[i]));
    for (std::size_t x = 0; x < pairs.size(); ++x)
        for (std::size_t y = x + 1; y < pairs.size(); ++y) {
            auto [a, na] = pairs[x];
            if (w.kind(a, na) != P || w.kind(pairs[y].first, pairs[y].second) != P) continue;
            for (int flipq = 0; flipq < 2; ++flipq) {
                std::size_t q = flipq ? pairs[y].second : pairs[y].first;
                std::size_t nq = flipq ? pairs[y].first : pairs[y].second;
                if (w.kind(a, q) == C && w.kind(na, nq) == C && w.kind(a, nq) == P && w.kind(na, q) == P) {
                    const auto& e = w.occs().entries;
                    return C2Witness{e[a], e[na], e[q], e[nq]};
                }
            }
        }
    return std::nullopt;
}

}  // namespace fbv
