#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "fbv/rules.hpp"
#include "fbv/strategy.hpp"
#include "fbv/structure.hpp"

namespace fbv {

enum class Pruning { None, Interaction, LazyInteraction, Pruned };
const char* pruning_name(Pruning p);

struct SearchConfig {
    System system = System::FBV;
    Pruning pruning = Pruning::None;
    std::size_t max_visited = 1'000'000;
    std::size_t max_depth = 0;  // 0: unbounded
    // Cut states failing a necessary condition for provability (each atom
    // needs a par-related dual; the C2 pattern for distinct-pair flat input).
    bool necessary_conditions = true;
};

struct SearchStats {
    std::size_t visited = 0;   // distinct canonical structures touched
    std::size_t expanded = 0;  // rule instances examined
    std::optional<std::size_t> proof_length;
};

enum class SearchStatus { Proved, Unprovable, LimitExceeded };

struct SearchResult {
    SearchStatus status = SearchStatus::Unprovable;
    std::optional<Derivation> proof;
    SearchStats stats;
};

struct LimitExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotApplicable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A prover whose memo table persists across calls. Not thread-safe;
// use one instance per thread.
class Oracle {
public:
    explicit Oracle(SearchConfig cfg = {});
    ~Oracle();
    Oracle(Oracle&&) noexcept;
    Oracle& operator=(Oracle&&) noexcept;

    SearchResult prove(const Structure& s);
    const SearchConfig& config() const;
    std::size_t memo_size() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

SearchResult prove_exhaustive(const Structure& s, const SearchConfig& cfg = {});

// Derivation with conclusion `from` and premise `to`; nullopt if none.
// Throws LimitExceeded.
std::optional<Derivation> derive(const Structure& from, const Structure& to, const SearchConfig& cfg = {});

// Throws LimitExceeded.
std::size_t provable_continuations(const Structure& s, RuleName rule, const SearchConfig& cfg = {});

// Throws NotApplicable when [(r,t),p] is not provable, LimitExceeded on limits.
bool splitting_spotcheck(const Structure& r, const Structure& t, const Structure& p, const SearchConfig& cfg = {});

struct AgreementReport {
    bool agree = false;
    StrategyOutcome strategy;
    SearchResult oracle;
};

AgreementReport cross_validate(const Structure& s, const SearchConfig& cfg = {},
                               const std::string& counterexample_log = "");

}  // namespace fbv
