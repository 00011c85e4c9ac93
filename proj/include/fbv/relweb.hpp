#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbv/errors.hpp"
#include "fbv/structure.hpp"

namespace fbv {

enum class RelationKind : std::uint8_t { SeqBefore = 0, SeqAfter = 1, ParRel = 2, CoparRel = 3 };

inline std::uint8_t bit(RelationKind k) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(k)); }
const char* relation_symbol(RelationKind k);  // "<|", "|>", "v", "^"

// Arbitrary relation data over occurrences, indexed by position in `occs`.
// Each ordered pair carries a bitmask of RelationKind bits.
class WebCandidate {
public:
    WebCandidate() = default;
    explicit WebCandidate(OccurrenceSet occs);

    const OccurrenceSet& occs() const { return occs_; }
    std::size_t size() const { return occs_.size(); }

    std::uint8_t mask(std::size_t i, std::size_t j) const { return rel_[i * n_ + j]; }
    bool has(std::size_t i, std::size_t j, RelationKind k) const { return (mask(i, j) & bit(k)) != 0; }
    void add(std::size_t i, std::size_t j, RelationKind k) { rel_[i * n_ + j] |= bit(k); }
    void clear(std::size_t i, std::size_t j) { rel_[i * n_ + j] = 0; }
    // Sets i k j and the inverse on (j, i), replacing anything there.
    void relate(std::size_t i, std::size_t j, RelationKind k);

private:
    OccurrenceSet occs_;
    std::size_t n_ = 0;
    std::vector<std::uint8_t> rel_;
};

// A candidate produced from a structure; exactly one kind per ordered pair.
class RelationWeb {
public:
    RelationWeb() = default;
    explicit RelationWeb(WebCandidate c) : c_(std::move(c)) {}

    const OccurrenceSet& occs() const { return c_.occs(); }
    std::size_t size() const { return c_.size(); }
    RelationKind kind(std::size_t i, std::size_t j) const;
    const WebCandidate& candidate() const { return c_; }

    // Compares by occ_id, independent of entry order.
    friend bool operator==(const RelationWeb& a, const RelationWeb& b);

    // One "x REL y" line per ordered pair, sorted.
    std::string dump() const;

private:
    WebCandidate c_;
};

struct Violation {
    std::string condition;  // "s1" .. "s6", "s7<|", "s7v", "s7^"
    std::vector<std::size_t> witnesses;
    std::string describe(const WebCandidate& w) const;
};

// Occurrences with a negative or repeated occ_id are renumbered by preorder position.
RelationWeb web_of(const Structure& s);

std::vector<Violation> check_s1_s7(const WebCandidate& w, std::size_t limit = SIZE_MAX);

Structure web_to_structure(const WebCandidate& w);
inline Structure web_to_structure(const RelationWeb& w) { return web_to_structure(w.candidate()); }

struct C2Witness {
    Occurrence a, a_dual, q, q_dual;  // a ^ q, a_dual ^ q_dual, every other pair v
};

std::optional<Occurrence> c1_check(const Structure& s);
std::optional<C2Witness> c2_check(const Structure& s);

}  // namespace fbv
