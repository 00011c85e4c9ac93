#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "fbv/oracle.hpp"
#include "fbv/rules.hpp"
#include "fbv/structure.hpp"

namespace fbv {

inline constexpr const char* kNotProvable = "The structure is not provable.";

// Top-down listing: "oi", one "<rule> <premise>" line per step, then the conclusion.
std::vector<std::string> render_proof(const Derivation& d);
std::vector<std::string> render_not_provable(const Structure& s);

struct StepLine {
    std::string rule;
    std::string premise;  // empty for "oi"
};
std::vector<StepLine> proof_lines(const Derivation& d);

nlohmann::json stats_json(const SearchStats& s);
std::string stats_text(const SearchStats& s);

}  // namespace fbv
