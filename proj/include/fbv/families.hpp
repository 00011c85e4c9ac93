#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fbv/structure.hpp"

namespace fbv {

using StructureSink = std::function<void(const Structure&)>;

// Every normal-form structure using each leaf exactly once. Leaves keep
// their occ_ids. Structures with repeated labels may be produced more than
// once up to canonical equality.
void for_each_structure(const std::vector<Atom>& leaves, bool with_seq, const StructureSink& sink);

// Canonically distinct structures with 1..max_occ positive atoms drawn from `names`.
std::vector<Structure> web_family(const std::vector<std::string>& names, std::size_t max_occ, bool with_seq);

// Flat structures over every nonempty set of at most max_occ labels taken
// from {n, -n : n in names}; each label at most once.
void for_each_flat_distinct(const std::vector<std::string>& names, std::size_t max_occ, const StructureSink& sink);

// Random flat structure over 1..max_occ/2 dual pairs (all labels distinct).
Structure random_flat_distinct(std::mt19937_64& rng, std::size_t max_occ);

// Random flat structure with a proof, built top-down from the unit by
// adding dual pairs and applying switch and mix downwards.
Structure random_provable_flat(std::mt19937_64& rng, std::size_t pairs);

// Random normal-form structure (seq optional) over the given labels.
Structure random_structure(std::mt19937_64& rng, const std::vector<Atom>& leaves, bool with_seq);

// Same structure, different presentation: shuffled par/copar children,
// inserted units, singleton wrappers and split associativity.
Structure scramble(std::mt19937_64& rng, const Structure& s);

}  // namespace fbv
