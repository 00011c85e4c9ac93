#include "fbv/output.hpp"

namespace fbv {

std::vector<StepLine> proof_lines(const Derivation& d) {
    std::vector<StepLine> out;
    out.push_back({"oi", ""});
    for (auto it = d.steps.rbegin(); it != d.steps.rend(); ++it) {
        if (it->rule == RuleName::ODown) continue;
        out.push_back({rule_token(it->rule), render(it->premise)});
    }
    return out;
}

std::vector<std::string> render_proof(const Derivation& d) {
    std::vector<std::string> lines;
    for (const auto& l : proof_lines(d)) lines.push_back(l.premise.empty() ? l.rule : l.rule + " " + l.premise);
    lines.push_back(render(d.conclusion));
    return lines;
}

std::vector<std::string> render_not_provable(const Structure& s) { return {render(s), kNotProvable}; }

nlohmann::json stats_json(const SearchStats& s) {
    nlohmann::json j{{"visited", s.visited}, {"expanded", s.expanded}};
    if (s.proof_length)
        j["proof_length"] = *s.proof_length;
    else
        j["proof_length"] = nullptr;
    return j;
}

std::string stats_text(const SearchStats& s) {
    std::string out = "visited=" + std::to_string(s.visited) + "\nexpanded=" + std::to_string(s.expanded) + "\n";
    out += "proof_length=" + (s.proof_length ? std::to_string(*s.proof_length) : std::string("none")) + "\n";
    return out;
}

}  // namespace fbv
