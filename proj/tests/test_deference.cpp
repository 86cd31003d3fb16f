#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

using namespace deleg;
using namespace deleg::testsupport;

TEST_CASE("total trust holds on the trusted-expert frame") {
    const TrustVerdict v = checkTotalTrust(trustedExpertFrame());
    CHECK(v.holds);
    CHECK(v.decisive);
    CHECK_FALSE(v.witness.has_value());
}

TEST_CASE("total trust holds for a truth-knowing agent") {
    CHECK(checkTotalTrust(truthKnowingFrame(2)).holds);
    CHECK(checkTotalTrust(truthKnowingFrame(4)).holds);
}

TEST_CASE("total trust fails on the anti-expert frame with a checkable witness") {
    const ProbabilityFrame frame = antiExpertFrame();
    const TrustVerdict v = checkTotalTrust(frame);
    REQUIRE_FALSE(v.holds);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->slack > 0);
    CHECK(verifyTrustWitness(frame, v.witness->x, v.witness->threshold));

    // The hand-built witness: X = (1, 0) with threshold 1. The agent at b is
    // certain of a, so it expects 1; conditioning on that event leaves the
    // principal expecting 0.
    const OptionRV handBuilt("x", frame.space, {Rat(1), Rat(0)});
    CHECK(verifyTrustWitness(frame, handBuilt, Rat(1)));

    // And a non-violation does not verify.
    CHECK_FALSE(verifyTrustWitness(trustedExpertFrame(), handBuilt, Rat(1)));
}

TEST_CASE("randomized falsifier finds the anti-expert violation") {
    const ProbabilityFrame frame = antiExpertFrame();
    const TrustVerdict v = falsifyTotalTrustRandomized(frame, 1000, 42);
    REQUIRE_FALSE(v.holds);
    REQUIRE(v.witness.has_value());
    CHECK(verifyTrustWitness(frame, v.witness->x, v.witness->threshold));
}

TEST_CASE("randomized falsifier stays quiet on the trusted frame") {
    const TrustVerdict v = falsifyTotalTrustRandomized(trustedExpertFrame(), 2000, 7);
    CHECK(v.holds);
    CHECK_FALSE(v.decisive);
}

TEST_CASE("falsifier rejects a zero trial budget") {
    CHECK_THROWS_AS(falsifyTotalTrustRandomized(trustedExpertFrame(), 0, 1),
                    std::invalid_argument);
}

TEST_CASE("falsifier never contradicts the exact decision") {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 40; ++round) {
        const ProbabilityFrame frame = randomFrame(rng, 5, 10);
        const TrustVerdict exact = checkTotalTrust(frame);
        const TrustVerdict sampled = falsifyTotalTrustRandomized(frame, 2000, rng());
        if (exact.holds) CHECK(sampled.holds);
        if (!sampled.holds) {
            CHECK_FALSE(exact.holds);
            CHECK(verifyTrustWitness(frame, sampled.witness->x, sampled.witness->threshold));
        }
    }
}

TEST_CASE("trust failure witnesses break valuing; trust implies no violation found") {
    std::mt19937_64 rng(99);
    int failures = 0, holds = 0;
    for (int round = 0; round < 60 && (failures < 15 || holds < 15); ++round) {
        const ProbabilityFrame frame = randomFrame(rng, 4, 8);
        const TrustVerdict v = checkTotalTrust(frame);
        if (!v.holds) {
            ++failures;
            const OptionRV& x = v.witness->x;
            const OptionRV constT =
                OptionRV::constant(frame.space, v.witness->threshold, "threshold");
            if (x.payoffs == constT.payoffs) continue;
            const ValuingVerdict valuing =
                checkValuingOverFamily(frame, {DecisionProblemRV({x, constT})});
            CHECK_FALSE(valuing.holds);
        } else {
            ++holds;
            // Sampled problems: delegation must weakly beat every option.
            for (int p = 0; p < 50; ++p) {
                std::vector<OptionRV> options;
                for (size_t k = 0; k < 2 + rng() % 2; ++k) {
                    options.push_back(randomOption(rng, frame.space, 5,
                                                   "O" + std::to_string(k)));
                }
                bool distinct = true;
                for (size_t i = 0; i < options.size() && distinct; ++i) {
                    for (size_t j = i + 1; j < options.size(); ++j) {
                        if (options[i].payoffs == options[j].payoffs) distinct = false;
                    }
                }
                if (!distinct) continue;
                CHECK(checkValuingOverFamily(frame, {DecisionProblemRV(options)}).holds);
            }
        }
    }
    CHECK(failures > 0);
    CHECK(holds > 0);
}

TEST_CASE("valuing over the signal problem holds with margin 1") {
    const ValuingVerdict v = checkValuingOverFamily(trustedExpertFrame(), {signalOptions()});
    CHECK(v.holds);
    CHECK(v.minMargin == 1);
}

TEST_CASE("valuing over a singleton problem is immediate") {
    const ProbabilityFrame frame = trustedExpertFrame();
    const DecisionProblemRV only(
        std::vector<OptionRV>{OptionRV("only", frame.space, {Rat(3), Rat(-2)})});
    const ValuingVerdict v = checkValuingOverFamily(frame, {only});
    CHECK(v.holds);
    CHECK(v.minMargin == 0);
}

TEST_CASE("valuing holds on the rain-bet family for every stake") {
    const GeneralizedFrame g = rainBetFrame(tenthsGrid());
    std::vector<std::vector<Act>> family;
    for (const Rat& x : tenthsGrid()) {
        family.push_back({g.actByLabel("accept:" + toString(x)), g.actByLabel("reject")});
    }
    const ValuingVerdict v = checkValuingOverFamily(g, family);
    CHECK(v.holds);
    CHECK(v.minMargin >= 0);
}

TEST_CASE("valuing is antitone under family inclusion") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 60; ++round) {
        const ProbabilityFrame frame = randomFrame(rng, 4, 6);
        std::vector<DecisionProblemRV> family;
        for (int p = 0; p < 4; ++p) {
            std::vector<OptionRV> options;
            for (size_t k = 0; k < 2; ++k) {
                options.push_back(randomOption(rng, frame.space, 4, "O" + std::to_string(k)));
            }
            if (options[0].payoffs == options[1].payoffs) continue;
            family.push_back(DecisionProblemRV(options));
        }
        if (family.size() < 2) continue;
        if (checkValuingOverFamily(frame, family).holds) {
            const std::vector<DecisionProblemRV> subset(family.begin(),
                                                        family.begin() + family.size() / 2);
            CHECK(checkValuingOverFamily(frame, subset).holds);
        }
    }
}

TEST_CASE("posterior alignment fails on the high-stake rain bet with the known witness") {
    const GeneralizedFrame full = rainBetFrame({Rat(9, 10)});
    const GeneralizedFrame g =
        full.withActs({full.actByLabel("accept:9/10"), full.actByLabel("reject")});
    const AlignmentVerdict v = checkPosteriorAlignment(g);
    REQUIRE_FALSE(v.holds);
    REQUIRE(v.cellWitness.has_value());
    const CellWitness& w = *v.cellWitness;
    CHECK(w.cell == std::vector<size_t>{0, 1});
    CHECK(w.a.label == "accept:9/10");
    CHECK(w.b.label == "reject");
    CHECK(w.principalA == Rat(1, 10));
    CHECK(w.principalB == 0);
    CHECK(w.agentA == Rat(-3, 10));
    CHECK(w.agentB == 0);
}

TEST_CASE("posterior alignment holds when the agent matches the conditional prior") {
    // Same rain structure but the agent's credence equals pi conditioned on
    // its own cell, with shared values: both conditions become tautologies.
    const GeneralizedFrame base = rainBetFrame(tenthsGrid());
    const StateSpace& space = base.space;
    const Credence type1(space, {Rat(1), Rat(0), Rat(0), Rat(0)});
    const Credence type2(space, {Rat(0), Rat(0), Rat(0), Rat(1)});
    const GeneralizedFrame aligned(space, base.pi, base.consequences, base.utility, base.acts,
                                   {type1, type1, type2, type2}, base.agentUtilities);
    CHECK(checkPosteriorAlignment(aligned).holds);
}

TEST_CASE("posterior alignment catches comparative-credence reversals") {
    // Single cell; the agent is sure of the state the principal finds unlikely.
    const StateSpace space = twoStates();
    const std::map<std::string, Rat> u{{"c1", Rat(1)}, {"c2", Rat(0)}};
    const Credence sureOfB(space, {Rat(0), Rat(1)});
    const GeneralizedFrame g(space, Credence(space, {Rat(3, 4), Rat(1, 4)}), {"c1", "c2"}, u,
                             {Act::constant(space, "c1"), Act::constant(space, "c2")},
                             {sureOfB, sureOfB}, {u, u});
    const AlignmentVerdict v = checkPosteriorAlignment(g);
    REQUIRE_FALSE(v.holds);
    CHECK_FALSE(v.cellWitness.has_value());
    REQUIRE(v.eventWitness.has_value());
    CHECK(v.eventWitness->eventX == std::vector<size_t>{1});
    CHECK(v.eventWitness->eventY == std::vector<size_t>{0});
}

TEST_CASE("alignment requires clarity") {
    const StateSpace space = twoStates();
    const std::map<std::string, Rat> u{{"c1", Rat(1)}, {"c2", Rat(0)}};
    const GeneralizedFrame leaky(
        space, Credence::uniform(space), {"c1", "c2"}, u, {Act::constant(space, "c1")},
        {Credence(space, {Rat(4, 5), Rat(1, 5)}), Credence(space, {Rat(1, 10), Rat(9, 10)})},
        {u, std::map<std::string, Rat>{{"c1", Rat(2)}, {"c2", Rat(0)}}});
    CHECK_THROWS_AS(checkPosteriorAlignment(leaky), std::invalid_argument);
}

TEST_CASE("pi-null cells are skipped and reported") {
    const StateSpace space({"a", "b", "c"});
    const std::map<std::string, Rat> u{{"c1", Rat(1)}, {"c2", Rat(0)}};
    const Credence pi(space, {Rat(1, 2), Rat(1, 2), Rat(0)});
    const Credence cellAB(space, {Rat(1, 2), Rat(1, 2), Rat(0)});
    const Credence cellC(space, {Rat(0), Rat(0), Rat(1)});
    const GeneralizedFrame g(space, pi, {"c1", "c2"}, u,
                             {Act::constant(space, "c1"), Act::constant(space, "c2")},
                             {cellAB, cellAB, cellC}, {u, u, u});
    const AlignmentVerdict v = checkPosteriorAlignment(g);
    CHECK(v.holds);
    REQUIRE(v.skippedCells.size() == 1);
    CHECK(v.skippedCells[0] == std::vector<size_t>{2});
}

TEST_CASE("the constructed counterexample defeats valuing by the predicted margin") {
    const GeneralizedFrame full = rainBetFrame({Rat(9, 10)});
    const GeneralizedFrame g =
        full.withActs({full.actByLabel("accept:9/10"), full.actByLabel("reject")});
    const AlignmentVerdict v = checkPosteriorAlignment(g);
    REQUIRE(v.cellWitness.has_value());

    const CounterexampleProblem cx = constructValuingCounterexample(g, *v.cellWitness);
    CHECK(cx.margin == Rat(1, 20));
    CHECK(cx.problem.size() == 2);
    const ValuingVerdict recheck = checkValuingOverFamily(cx.frame, {cx.problem});
    REQUIRE_FALSE(recheck.holds);
    CHECK(recheck.witness->margin == Rat(1, 20));
    CHECK(recheck.witness->option == cx.preferred.label);
}

TEST_CASE("a full-mass cell splices to the original acts") {
    const StateSpace space = twoStates();
    const std::map<std::string, Rat> u{{"hi", Rat(1)}, {"lo", Rat(0)}};
    const Credence flat = Credence::uniform(space);
    // One cell covering everything; agent values are inverted so it prefers lo.
    const std::map<std::string, Rat> inverted{{"hi", Rat(0)}, {"lo", Rat(1)}};
    const GeneralizedFrame g(space, flat, {"hi", "lo"}, u,
                             {Act::constant(space, "hi"), Act::constant(space, "lo")},
                             {flat, flat}, {inverted, inverted});
    const AlignmentVerdict v = checkPosteriorAlignment(g);
    REQUIRE(v.cellWitness.has_value());
    const CounterexampleProblem cx = constructValuingCounterexample(g, *v.cellWitness);
    CHECK(cx.frame.acts.size() == 2);  // splices collapse onto existing acts
    CHECK(cx.margin == 1);
    CHECK_FALSE(checkValuingOverFamily(cx.frame, {cx.problem}).holds);
}

TEST_CASE("random misaligned frames always yield working counterexamples") {
    std::mt19937_64 rng(31337);
    int found = 0, attempts = 0;
    while (found < 30 && attempts < 4000) {
        ++attempts;
        const GeneralizedFrame g = randomClearFrame(rng, 4, 4, 3);
        const AlignmentVerdict v = checkPosteriorAlignment(g);
        if (!v.cellWitness) continue;
        ++found;
        const CounterexampleProblem cx = constructValuingCounterexample(g, *v.cellWitness);
        CHECK(cx.margin > 0);
        CHECK_FALSE(checkValuingOverFamily(cx.frame, {cx.problem}).holds);
    }
    CHECK(found == 30);
}

TEST_CASE("richness closure") {
    const StateSpace space = twoStates();
    const Act c1 = Act::constant(space, "c1");
    const Act c2 = Act::constant(space, "c2");

    SUBCASE("trivial events keep constants closed") {
        const RichnessReport r = checkRichnessClosure({c1, c2}, {{}, {0, 1}});
        CHECK(r.closed);
    }
    SUBCASE("a proper event needs the two indicator acts") {
        const RichnessReport r = checkRichnessClosure({c1, c2}, {{0}});
        CHECK_FALSE(r.closed);
        CHECK(r.missing.size() == 2);
    }
    SUBCASE("singleton act sets are closed") {
        CHECK(checkRichnessClosure({c1}, {{0}, {1}, {0, 1}}).closed);
    }
    SUBCASE("the rain acts miss the on-cell splice") {
        const GeneralizedFrame g = rainBetFrame({Rat(9, 10)});
        const Act& accept = g.actByLabel("accept:9/10");
        const Act& reject = g.actByLabel("reject");
        const RichnessReport r = checkRichnessClosure({accept, reject}, {{0, 1}});
        REQUIRE_FALSE(r.closed);
        const Act expected = spliceActs(accept, {0, 1}, reject);
        const bool present = std::any_of(r.missing.begin(), r.missing.end(),
                                         [&](const Act& a) { return a.sameOutcomes(expected); });
        CHECK(present);
    }
    SUBCASE("closing adds exactly the indicators and terminates") {
        const auto closed = richnessClose({c1, c2}, {{0}}, 16);
        CHECK(closed.size() == 4);
        CHECK(checkRichnessClosure(closed, {{0}}).closed);
    }
    SUBCASE("the cap is enforced by name") {
        CHECK_THROWS_WITH_AS(richnessClose({c1, c2}, {{0}}, 3), doctest::Contains("cap of 3"),
                             std::runtime_error);
    }
}

TEST_CASE("constant-act detection") {
    const StateSpace space = twoStates();
    const std::map<std::string, Rat> u{{"c1", Rat(1)}, {"c2", Rat(0)}};
    const Credence flat = Credence::uniform(space);

    const GeneralizedFrame with(space, flat, {"c1", "c2"}, u,
                                {Act::constant(space, "c1"), Act::constant(space, "c2")},
                                {flat, flat}, {u, u});
    CHECK(checkConstantActs(with));

    const GeneralizedFrame without(space, flat, {"c1", "c2"}, u,
                                   {Act("mixed", space, {"c1", "c2"})}, {flat, flat}, {u, u});
    CHECK_FALSE(checkConstantActs(without));

    const std::map<std::string, Rat> flatU{{"c1", Rat(2)}, {"c2", Rat(2)}};
    const GeneralizedFrame indifferent(space, flat, {"c1", "c2"}, flatU,
                                       {Act::constant(space, "c1"), Act::constant(space, "c2")},
                                       {flat, flat}, {flatU, flatU});
    CHECK_FALSE(checkConstantActs(indifferent));
}
