#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "fbv/relweb.hpp"
#include "fbv/rules.hpp"
#include "fbv/structure.hpp"

namespace fbv {

struct IncValue {
    bool infinite = false;
    unsigned value = 0;

    static IncValue inf() { return {true, 0}; }
    static IncValue of(unsigned v) { return {false, v}; }

    friend bool operator==(const IncValue&, const IncValue&) = default;
    friend bool operator<(const IncValue& a, const IncValue& b) {
        if (a.infinite != b.infinite) return b.infinite;
        return !a.infinite && a.value < b.value;
    }
    std::string str() const { return infinite ? "inf" : std::to_string(value); }
};

// Occurrences are given by occ_id.
IncValue ainc(const Structure& s, int a, int b);            // counting form
IncValue ainc_recursive(const Structure& s, int a, int b);  // recursive form
IncValue inc(const Structure& s, int a, int b);             // modulo coherence

struct IncEntry {
    std::string name;
    int positive = -1;  // occ_id of the positive occurrence
    int negative = -1;
    IncValue value;
};

struct IncTable {
    std::vector<IncEntry> entries;  // sorted by name
    std::size_t argmin = 0;         // meaningless when entries is empty
    IncValue min = IncValue::inf();
};

IncTable inc_table(const Structure& s);

struct PreconditionViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DeadEnd : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepResult {
    std::vector<RuleInstance> instances;
    Structure next;
};

// One strategy step. Throws DeadEnd or PreconditionViolated.
StepResult step(const Structure& s);

enum class NotProvableReason { C1Violation, C2Violation, DeadEnd };
const char* reason_name(NotProvableReason r);

struct StrategyOutcome {
    enum class Kind { Provable, NotProvable, Inconclusive };
    Kind kind = Kind::Inconclusive;
    Derivation derivation;  // for Provable; for the other kinds, the steps taken so far
    NotProvableReason reason = NotProvableReason::DeadEnd;
    bool precondition_violated = false;
    std::string diagnostic;  // witness or explanation
};

struct StrategyConfig {
    std::size_t max_steps = 0;         // 0: 2 * n^2
    std::string counterexample_log;  // appended on dead ends and exceeded bounds; empty: off
};

StrategyOutcome prove_strategy(const Structure& s, const StrategyConfig& cfg = {});

void append_counterexample(const std::string& path, const Structure& s, const std::string& note);

}  // namespace fbv
