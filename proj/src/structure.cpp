#include "fbv/structure.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

namespace fbv {

struct Structure::Node {
    NodeKind kind = NodeKind::Unit;
    Atom atom;
    Children children;
    std::size_t size = 0;
};

Structure::Structure() : node_(nullptr) {}

Structure Structure::unit() { return Structure(); }

Structure Structure::atom(std::string name, Polarity pol, int occ_id) {
    return atom(Atom{std::move(name), pol, occ_id});
}

Structure Structure::atom(Atom a) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Atom;
    n->atom = std::move(a);
    n->size = 1;
    return Structure(std::move(n));
}

Structure Structure::make(NodeKind k, Children ch) {
    if (k == NodeKind::Unit) return unit();
    if (k == NodeKind::Atom) throw std::invalid_argument("Structure::make: atom needs a name");
    auto n = std::make_shared<Node>();
    n->kind = k;
    for (const auto& c : ch) n->size += c.size();
    n->children = std::move(ch);
    return Structure(std::move(n));
}

Structure Structure::par(Children ch) { return make(NodeKind::Par, std::move(ch)); }
Structure Structure::copar(Children ch) { return make(NodeKind::Copar, std::move(ch)); }
Structure Structure::seq(Children ch) { return make(NodeKind::Seq, std::move(ch)); }

NodeKind Structure::kind() const { return node_ ? node_->kind : NodeKind::Unit; }

const Atom& Structure::atom() const {
    if (kind() != NodeKind::Atom) throw std::logic_error("Structure::atom on non-atom");
    return node_->atom;
}

const Children& Structure::children() const {
    static const Children none;
    return node_ ? node_->children : none;
}

std::size_t Structure::size() const { return node_ ? node_->size : 0; }

bool operator==(const Structure& a, const Structure& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case NodeKind::Unit: return true;
    case NodeKind::Atom: {
        const Atom& x = a.atom();
        const Atom& y = b.atom();
        return x.name == y.name && x.polarity == y.polarity && x.occ_id == y.occ_id;
    }
    default: return a.children() == b.children();
    }
}

const char* kind_name(NodeKind k) {
    switch (k) {
    case NodeKind::Unit: return "unit";
    case NodeKind::Atom: return "atom";
    case NodeKind::Par: return "par";
    case NodeKind::Copar: return "copar";
    case NodeKind::Seq: return "seq";
    }
    return "?";
}

Structure negate(const Structure& s) {
    switch (s.kind()) {
    case NodeKind::Unit: return s;
    case NodeKind::Atom: {
        Atom a = s.atom();
        a.polarity = flip(a.polarity);
        return Structure::atom(std::move(a));
    }
    default: break;
    }
    Children ch;
    ch.reserve(s.children().size());
    for (const auto& c : s.children()) ch.push_back(negate(c));
    NodeKind k = s.kind();
    if (k == NodeKind::Par)
        k = NodeKind::Copar;
    else if (k == NodeKind::Copar)
        k = NodeKind::Par;
    return Structure::make(k, std::move(ch));
}

Structure normalize(const Structure& s) {
    if (s.kind() == NodeKind::Unit || s.kind() == NodeKind::Atom) return s;
    Children out;
    out.reserve(s.children().size());
    for (const auto& c : s.children()) {
        Structure n = normalize(c);
        if (n.is_unit()) continue;
        if (n.kind() == s.kind()) {
            for (const auto& g : n.children()) out.push_back(g);
        } else {
            out.push_back(std::move(n));
        }
    }
    if (out.empty()) return Structure::unit();
    if (out.size() == 1) return out.front();
    return Structure::make(s.kind(), std::move(out));
}

bool is_normal(const Structure& s) {
    if (s.is_atom()) return true;
    if (s.is_unit()) return true;  // the unit alone is a normal form
    if (s.children().size() < 2) return false;
    for (const auto& c : s.children()) {
        if (c.is_unit() || c.kind() == s.kind()) return false;
        if (!is_normal(c)) return false;
    }
    return true;
}

bool is_flat(const Structure& s) {
    if (s.kind() == NodeKind::Seq) return false;
    for (const auto& c : s.children())
        if (!is_flat(c)) return false;
    return true;
}

namespace {

int kind_rank(NodeKind k) {
    switch (k) {
    case NodeKind::Unit: return 0;
    case NodeKind::Atom: return 1;
    case NodeKind::Seq: return 2;
    case NodeKind::Par: return 3;
    case NodeKind::Copar: return 4;
    }
    return 5;
}

void render_into(const Structure& s, std::string& out) {
    switch (s.kind()) {
    case NodeKind::Unit: out += '*'; return;
    case NodeKind::Atom:
        if (s.atom().polarity == Polarity::Negative) out += '-';
        out += s.atom().name;
        return;
    default: break;
    }
    char open = '[', close = ']', sep = ',';
    if (s.kind() == NodeKind::Copar) {
        open = '(';
        close = ')';
    } else if (s.kind() == NodeKind::Seq) {
        open = '<';
        close = '>';
        sep = ';';
    }
    out += open;
    bool first = true;
    for (const auto& c : s.children()) {
        if (!first) out += sep;
        first = false;
        render_into(c, out);
    }
    out += close;
}

struct Keyed {
    Structure s;
    std::string key;
};

bool keyed_less(const Keyed& a, const Keyed& b) {
    int ra = kind_rank(a.s.kind()), rb = kind_rank(b.s.kind());
    if (ra != rb) return ra < rb;
    if (a.s.is_atom()) {
        const Atom& x = a.s.atom();
        const Atom& y = b.s.atom();
        if (x.name != y.name) return x.name < y.name;
        if (x.polarity != y.polarity) return x.polarity == Polarity::Positive;
        return false;
    }
    return a.key < b.key;
}

// s is normal here.
Keyed canon(const Structure& s) {
    if (s.is_unit() || s.is_atom()) {
        std::string k;
        render_into(s, k);
        return {s, std::move(k)};
    }
    std::vector<Keyed> kids;
    kids.reserve(s.children().size());
    for (const auto& c : s.children()) kids.push_back(canon(c));
    if (s.kind() != NodeKind::Seq) std::stable_sort(kids.begin(), kids.end(), keyed_less);
    Children ch;
    ch.reserve(kids.size());
    std::string key;
    char open = '[', close = ']', sep = ',';
    if (s.kind() == NodeKind::Copar) {
        open = '(';
        close = ')';
    } else if (s.kind() == NodeKind::Seq) {
        open = '<';
        close = '>';
        sep = ';';
    }
    key += open;
    for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i) key += sep;
        key += kids[i].key;
        ch.push_back(std::move(kids[i].s));
    }
    key += close;
    return {Structure::make(s.kind(), std::move(ch)), std::move(key)};
}

}  // namespace

Structure canonicalize(const Structure& s) { return canon(normalize(s)).s; }

std::string render_raw(const Structure& s) {
    std::string out;
    render_into(s, out);
    return out;
}

std::string canonical_key(const Structure& s) { return render_raw(s); }

std::string render(const Structure& s) { return canon(normalize(s)).key; }

bool canonical_less(const Structure& a, const Structure& b) {
    return keyed_less(Keyed{a, render_raw(a)}, Keyed{b, render_raw(b)});
}

OccurrenceSet occurrences(const Structure& s) {
    OccurrenceSet out;
    out.entries.reserve(s.size());
    auto walk = [&](auto&& self, const Structure& t) -> void {
        if (t.is_atom()) {
            const Atom& a = t.atom();
            out.entries.push_back({a.occ_id, a.name, a.polarity});
            return;
        }
        for (const auto& c : t.children()) self(self, c);
    };
    walk(walk, s);
    return out;
}

bool distinct_pairs_check(const Structure& s) {
    std::set<std::pair<std::string, Polarity>> seen;
    for (const auto& o : occurrences(s).entries)
        if (!seen.insert({o.name, o.polarity}).second) return false;
    return true;
}

Structure number_occurrences(const Structure& s) {
    int next = 0;
    auto walk = [&](auto&& self, const Structure& t) -> Structure {
        if (t.is_atom()) {
            Atom a = t.atom();
            a.occ_id = next++;
            return Structure::atom(std::move(a));
        }
        if (t.is_unit()) return t;
        Children ch;
        ch.reserve(t.children().size());
        for (const auto& c : t.children()) ch.push_back(self(self, c));
        return Structure::make(t.kind(), std::move(ch));
    };
    return walk(walk, s);
}

}  // namespace fbv

namespace fbv {

Structure ensure_occ_ids(const Structure& s) {
    std::set<int> ids;
    for (const auto& o : occurrences(s).entries)
        if (o.occ_id < 0 || !ids.insert(o.occ_id).second) return number_occurrences(s);
    return s;
}

}  // namespace fbv
