#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"

#include "fbv/families.hpp"
#include "fbv/oracle.hpp"
#include "fbv/syntax.hpp"

using namespace fbv;

TEST_CASE("prove_exhaustive") {
    SearchResult unit = prove_exhaustive(Structure::unit());
    REQUIRE(unit.status == SearchStatus::Proved);
    REQUIRE(unit.proof->steps.size() == 1);
    CHECK(unit.proof->steps[0].rule == RuleName::ODown);

    SearchConfig bv;
    bv.system = System::BV;
    SearchResult q = prove_exhaustive(parse("[<[a,-b];c>,<(-a,b);-c>]"), bv);
    REQUIRE(q.status == SearchStatus::Proved);
    CHECK(check_derivation(*q.proof, System::BV));
    CHECK(prove_exhaustive(parse("[<[a,-b];c>,<(-a,b);-c>]")).status == SearchStatus::Unprovable);

    CHECK(prove_exhaustive(parse("[(a,b),(-a,-b)]")).status == SearchStatus::Unprovable);
    SearchResult rep = prove_exhaustive(parse("[a,-a,b,-b,(a,b),(-a,-b)]"));
    REQUIRE(rep.status == SearchStatus::Proved);
    CHECK(check_derivation(*rep.proof, System::FBV));
    CHECK(rep.stats.proof_length == rep.proof->steps.size());
}

TEST_CASE("seq structure needing an early interaction") {
    SearchConfig bv;
    bv.system = System::BV;
    SearchResult r = prove_exhaustive(parse("[<(([d,-d]),<a;b>);c>,<-a;(<-b;-c>,[e,-e])>]"), bv);
    REQUIRE(r.status == SearchStatus::Proved);
    CHECK(check_derivation(*r.proof, System::BV));
}

TEST_CASE("limits are reported separately from unprovability") {
    SearchConfig tiny;
    tiny.max_visited = 3;
    CHECK(prove_exhaustive(parse("[(a,-b),(b,-c),(c,-d),(d,-a)]"), tiny).status == SearchStatus::LimitExceeded);
    SearchConfig shallow;
    shallow.max_depth = 1;
    CHECK(prove_exhaustive(parse("[(a,b),-a,-b]"), shallow).status == SearchStatus::LimitExceeded);
    // a limited search leaves no stale verdicts behind
    Oracle o(tiny);
    CHECK(o.prove(parse("[(a,-b),(b,-c),(c,-d),(d,-a)]")).status == SearchStatus::LimitExceeded);
}

TEST_CASE("verdicts are presentation independent") {
    std::mt19937_64 rng(41);
    Oracle shared;
    for (int k = 0; k < 100; ++k) {
        Structure s = k % 2 ? random_provable_flat(rng, 3) : random_flat_distinct(rng, 8);
        Structure t = scramble(rng, s);
        SearchStatus a = prove_exhaustive(s).status, b = prove_exhaustive(t).status;
        CHECK(a == b);
        CHECK(shared.prove(t).status == a);
    }
}

TEST_CASE("pruned searches agree and proofs replay") {
    std::mt19937_64 rng(43);
    for (int k = 0; k < 150; ++k) {
        Structure s = k % 2 ? random_provable_flat(rng, 4) : random_flat_distinct(rng, 8);
        SearchStatus base = prove_exhaustive(s).status;
        for (Pruning p : {Pruning::Interaction, Pruning::LazyInteraction, Pruning::Pruned}) {
            SearchConfig cfg;
            cfg.pruning = p;
            SearchResult r = prove_exhaustive(s, cfg);
            CAPTURE(pruning_name(p));
            CHECK(r.status == base);
            if (r.proof) CHECK(check_derivation(*r.proof, System::FBV));
        }
        SearchConfig plain;
        plain.necessary_conditions = false;
        CHECK(prove_exhaustive(s, plain).status == base);
    }
}

TEST_CASE("ten-occurrence inputs finish within the default budget") {
    std::mt19937_64 rng(47);
    for (int k = 0; k < 30; ++k) {
        Structure s = k % 2 ? random_provable_flat(rng, 5) : random_flat_distinct(rng, 10);
        CHECK(prove_exhaustive(s).status != SearchStatus::LimitExceeded);
    }
    CHECK(prove_exhaustive(parse("[(a,-b),(b,-c),(c,-d),(d,-e),(e,-a)]")).status == SearchStatus::Unprovable);
}

TEST_CASE("derive") {
    Structure s = parse("[(a,b),c]");
    auto same = derive(s, s);
    REQUIRE(same);
    CHECK(same->steps.empty());

    SearchConfig bv;
    bv.system = System::BV;
    auto q = derive(parse("[a,b]"), parse("<a;b>"), bv);
    REQUIRE(q);
    REQUIRE(q->steps.size() == 1);
    CHECK(q->steps[0].rule == RuleName::QDown);
    CHECK(check_derivation(*q, System::BV));

    CHECK_FALSE(derive(parse("(a,b)"), parse("[a,b]")));
    auto sw = derive(parse("[(a,b),c]"), parse("(a,[b,c])"));
    REQUIRE(sw);
    CHECK(check_derivation(*sw, System::FBV));
}

TEST_CASE("provable_continuations") {
    CHECK(provable_continuations(parse("[(-a,-b),a,b]"), RuleName::Switch) == 2);
    CHECK(provable_continuations(parse("[a,-a]"), RuleName::AiDown) == 1);
    CHECK(provable_continuations(parse("[(a,b),(-a,-b)]"), RuleName::Switch) == 0);
}

TEST_CASE("splitting_spotcheck") {
    CHECK(splitting_spotcheck(parse("a"), parse("b"), parse("[-a,-b]")));
    CHECK(splitting_spotcheck(parse("a"), parse("b"), parse("[-b,-a]")));
    CHECK_THROWS_AS(splitting_spotcheck(parse("a"), parse("b"), parse("[-a,c]")), NotApplicable);

    // provable samples with a four-atom context
    std::mt19937_64 rng(53);
    int checked = 0;
    for (int k = 0; k < 200 && checked < 10; ++k) {
        std::vector<Atom> leaves{{"a", Polarity::Negative, -1}, {"b", Polarity::Negative, -1}, {"c", Polarity::Positive, -1},
                                 {"c", Polarity::Negative, -1}};
        Structure p = random_structure(rng, leaves, false);
        Structure whole = Structure::par({Structure::copar({parse("a"), parse("b")}), p});
        if (prove_exhaustive(whole).status != SearchStatus::Proved) continue;
        ++checked;
        CHECK(splitting_spotcheck(parse("a"), parse("b"), p));
    }
    CHECK(checked > 0);
}

TEST_CASE("cross_validate") {
    auto log = std::filesystem::temp_directory_path() / "fbv_cross.txt";
    std::filesystem::remove(log);
    AgreementReport s0 = cross_validate(parse("[(a,-b),(-c,[-a,b]),(c,[-d,e]),(d,-e)]"), {}, log.string());
    CHECK(s0.agree);
    CHECK(s0.strategy.kind == StrategyOutcome::Kind::Provable);
    AgreementReport c2 = cross_validate(parse("[(a,b),(-a,-b)]"), {}, log.string());
    CHECK(c2.agree);
    CHECK(c2.strategy.kind == StrategyOutcome::Kind::NotProvable);

    std::mt19937_64 rng(59);
    for (int k = 0; k < 100; ++k) CHECK(cross_validate(random_flat_distinct(rng, 10), {}, log.string()).agree);
    CHECK_FALSE(std::filesystem::exists(log));
}
