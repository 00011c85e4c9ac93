#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fbv/oracle.hpp"
#include "fbv/output.hpp"
#include "fbv/strategy.hpp"
#include "fbv/syntax.hpp"

namespace {

enum Exit { Provable = 0, NotProvable = 1, Inconclusive = 2, Usage = 3 };

struct Options {
    std::string system = "fbv";
    std::string mode = "both";
    std::string pruning = "none";
    std::size_t max_visited = 1'000'000;
    std::size_t max_steps = 0;
    std::string emit = "text";
    bool stats = false;
    std::string counterexample_log;
    std::string input;
};

struct Verdict {
    Exit code = Inconclusive;
    std::optional<fbv::Derivation> proof;
    std::optional<fbv::SearchStats> stats;
    std::string note;  // for inconclusive results
};

fbv::Pruning parse_pruning(const std::string& p) {
    if (p == "is") return fbv::Pruning::Interaction;
    if (p == "lis") return fbv::Pruning::LazyInteraction;
    if (p == "ps") return fbv::Pruning::Pruned;
    return fbv::Pruning::None;
}

Verdict run_oracle(const fbv::Structure& s, const Options& o) {
    fbv::SearchConfig cfg;
    cfg.system = o.system == "bv" ? fbv::System::BV : fbv::System::FBV;
    cfg.pruning = parse_pruning(o.pruning);
    cfg.max_visited = o.max_visited;
    Verdict v;
    auto r = fbv::prove_exhaustive(s, cfg);
    v.stats = r.stats;
    switch (r.status) {
    case fbv::SearchStatus::Proved:
        v.code = Provable;
        v.proof = r.proof;
        break;
    case fbv::SearchStatus::Unprovable:
        v.code = NotProvable;
        break;
    case fbv::SearchStatus::LimitExceeded:
        v.code = Inconclusive;
        v.note = "search limit exceeded";
        break;
    }
    return v;
}

Verdict run_strategy(const fbv::Structure& s, const Options& o) {
    fbv::StrategyConfig cfg;
    cfg.max_steps = o.max_steps;
    cfg.counterexample_log = o.counterexample_log;
    auto r = fbv::prove_strategy(s, cfg);
    Verdict v;
    switch (r.kind) {
    case fbv::StrategyOutcome::Kind::Provable:
        v.code = Provable;
        v.proof = r.derivation;
        break;
    case fbv::StrategyOutcome::Kind::NotProvable:
        v.code = NotProvable;
        v.note = fbv::reason_name(r.reason);
        break;
    case fbv::StrategyOutcome::Kind::Inconclusive:
        v.code = Inconclusive;
        v.note = r.diagnostic;
        break;
    }
    return v;
}

Verdict run(const fbv::Structure& s, const Options& o) {
    if (o.mode == "oracle") return run_oracle(s, o);
    if (o.mode == "strategy") return run_strategy(s, o);

    Verdict st = run_strategy(s, o);
    Verdict orc = run_oracle(s, o);
    if (orc.code == Inconclusive) return st;
    if (st.code == Inconclusive) return orc;
    if (st.code != orc.code) {
        std::cerr << "warning: strategy and oracle disagree on " << fbv::render(s) << "; reporting the oracle verdict\n";
        if (!o.counterexample_log.empty())
            fbv::append_counterexample(o.counterexample_log, s, "strategy/oracle disagreement");
        return orc;
    }
    st.stats = orc.stats;
    return st;
}

void emit_text(const fbv::Structure& normalized, const Verdict& v, const Options& o) {
    if (v.code == Provable) {
        for (const auto& l : fbv::render_proof(*v.proof)) std::cout << l << '\n';
    } else if (v.code == NotProvable) {
        for (const auto& l : fbv::render_not_provable(normalized)) std::cout << l << '\n';
    } else {
        std::cout << fbv::render(normalized) << '\n';
        std::cerr << "inconclusive: " << (v.note.empty() ? "no verdict" : v.note) << '\n';
    }
    if (o.stats && v.stats) std::cout << fbv::stats_text(*v.stats);
}

void emit_json(const std::string& input, const fbv::Structure& normalized, const Verdict& v, const Options& o) {
    nlohmann::json j;
    j["input"] = input;
    j["normalized"] = fbv::render(normalized);
    j["verdict"] = v.code == Provable ? "provable" : v.code == NotProvable ? "not_provable" : "inconclusive";
    j["steps"] = nlohmann::json::array();
    if (v.proof)
        for (const auto& l : fbv::proof_lines(*v.proof)) j["steps"].push_back({{"rule", l.rule}, {"premise", l.premise}});
    if (o.stats && v.stats) j["stats"] = fbv::stats_json(*v.stats);
    std::cout << j.dump() << '\n';
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Prover for flat BV structures"};
    app.add_option("--system", o.system, "fbv or bv")->check(CLI::IsMember({"fbv", "bv"}));
    app.add_option("--mode", o.mode, "strategy, oracle or both")->check(CLI::IsMember({"strategy", "oracle", "both"}));
    app.add_option("--pruning", o.pruning, "switch pruning for the oracle")->check(CLI::IsMember({"none", "is", "lis", "ps"}));
    app.add_option("--max-visited", o.max_visited, "oracle state budget");
    app.add_option("--max-steps", o.max_steps, "strategy step bound (0: 2n^2)");
    app.add_option("--emit", o.emit, "text or json")->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--stats", o.stats, "print search statistics");
    app.add_option("--counterexample-log", o.counterexample_log, "append disagreements and dead ends here");
    app.add_option("input", o.input, "input file (default: stdin)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : Usage;
    }

    std::ifstream file;
    if (!o.input.empty()) {
        file.open(o.input);
        if (!file) {
            std::cerr << "cannot open " << o.input << '\n';
            return Usage;
        }
    }
    std::istream& in = o.input.empty() ? std::cin : file;

    fbv::ParseOptions popts;
    popts.allow_seq = o.system == "bv";

    int worst = -1;
    bool first = true;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        int code;
        try {
            fbv::Structure s = fbv::parse(text, popts);
            fbv::Structure normalized = fbv::normalize(s);
            Verdict v = run(s, o);
            if (o.emit == "json") {
                emit_json(text, normalized, v, o);
            } else {
                if (!first) std::cout << '\n';
                emit_text(normalized, v, o);
            }
            code = v.code;
        } catch (const fbv::ParseError& e) {
            std::cerr << "line " << lineno << ": parse error at offset " << e.offset() << ": " << e.what() << '\n';
            code = Usage;
        } catch (const std::exception& e) {
            std::cerr << "line " << lineno << ": " << e.what() << '\n';
            code = Inconclusive;
        }
        first = false;
        worst = std::max(worst, code);
    }
    if (worst < 0) {
        std::cerr << "no input structures\n";
        return Usage;
    }
    return worst;
}
