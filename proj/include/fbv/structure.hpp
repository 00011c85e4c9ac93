#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace fbv {

enum class NodeKind : std::uint8_t { Unit, Atom, Par, Copar, Seq };
enum class Polarity : std::uint8_t { Positive, Negative };

inline Polarity flip(Polarity p) {
    return p == Polarity::Positive ? Polarity::Negative : Polarity::Positive;
}

struct Atom {
    std::string name;
    Polarity polarity = Polarity::Positive;
    int occ_id = -1;

    bool same_label(const Atom& o) const { return name == o.name && polarity == o.polarity; }
    bool dual_of(const Atom& o) const { return name == o.name && polarity != o.polarity; }
    std::string label() const { return polarity == Polarity::Negative ? "-" + name : name; }
};

class Structure;
using Children = std::vector<Structure>;

// Immutable tree. Copies share nodes.
class Structure {
public:
    Structure();  // unit

    static Structure unit();
    static Structure atom(std::string name, Polarity pol = Polarity::Positive, int occ_id = -1);
    static Structure atom(Atom a);
    static Structure par(Children ch);
    static Structure copar(Children ch);
    static Structure seq(Children ch);
    static Structure make(NodeKind k, Children ch);

    NodeKind kind() const;
    bool is_unit() const { return kind() == NodeKind::Unit; }
    bool is_atom() const { return kind() == NodeKind::Atom; }
    const Atom& atom() const;
    const Children& children() const;
    // number of atom occurrences
    std::size_t size() const;

    friend bool operator==(const Structure& a, const Structure& b);
    friend bool operator!=(const Structure& a, const Structure& b) { return !(a == b); }

private:
    struct Node;
    explicit Structure(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Occurrence {
    int occ_id;
    std::string name;
    Polarity polarity;

    std::string label() const { return polarity == Polarity::Negative ? "-" + name : name; }
    friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

struct OccurrenceSet {
    std::vector<Occurrence> entries;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    friend bool operator==(const OccurrenceSet&, const OccurrenceSet&) = default;
};

Structure negate(const Structure& s);
Structure normalize(const Structure& s);
Structure canonicalize(const Structure& s);
bool is_normal(const Structure& s);
bool is_flat(const Structure& s);  // no Seq nodes

OccurrenceSet occurrences(const Structure& s);
bool distinct_pairs_check(const Structure& s);

// Preorder numbering 0..n-1, used by the parser and by builders.
Structure number_occurrences(const Structure& s);
// Renumbers only when some occ_id is negative or repeated.
Structure ensure_occ_ids(const Structure& s);

// Text forms. `render` prints the canonical form, `render_raw` prints as is.
std::string render(const Structure& s);
std::string render_raw(const Structure& s);
// Rendering of a structure that is already canonical.
std::string canonical_key(const Structure& s);

// Total order used for canonical sorting of par/copar children.
// Both arguments must already be canonical.
bool canonical_less(const Structure& a, const Structure& b);

const char* kind_name(NodeKind k);

}  // namespace fbv
