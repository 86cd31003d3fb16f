#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "deleg/scenarios.hpp"
#include "test_support.hpp"

#include <random>

using namespace deleg;
using namespace deleg::testsupport;

namespace {

// Random scoring instance over a small composite space.
struct RandomInstance {
    StateSpace space;
    Credence pi;
    GambleDistribution mu;
};

RandomInstance randomInstance(std::mt19937_64& rng) {
    const size_t n = 2 + rng() % 3;
    std::vector<std::string> labels;
    for (size_t i = 0; i < n; ++i) labels.push_back("w" + std::to_string(i + 1));
    const StateSpace space{labels};
    const Credence pi = randomCredence(rng, space, 8);

    const size_t count = 1 + rng() % 3;
    std::vector<std::pair<Gamble, Rat>> support;
    for (size_t g = 0; g < count; ++g) {
        std::vector<Rat> payoffs;
        for (size_t i = 0; i < n; ++i) {
            payoffs.push_back(Rat(static_cast<long>(rng() % 21) - 10,
                                  1 + static_cast<long>(rng() % 4)));
        }
        support.push_back({Gamble("g" + std::to_string(g), space, payoffs),
                           Rat(1, count)});
    }
    return {space, pi, GambleDistribution(space, support)};
}

DecisionStrategy randomStrategy(std::mt19937_64& rng, const GambleDistribution& mu) {
    return DecisionStrategy::fromPredicate(
        mu, [&](size_t, const Gamble&) { return rng() % 2 == 0; });
}

}  // namespace

TEST_CASE("ideal set membership and error classification") {
    const StateSpace space({"w"});
    const Gamble pos("pos", space, {Rat(3)});
    const Gamble zero("zero", space, {Rat(0)});
    const Gamble neg("neg", space, {Rat(-5)});

    CHECK(idealAt(0, pos));
    CHECK(idealAt(0, zero));
    CHECK_FALSE(idealAt(0, neg));

    CHECK(errorAt(0, neg, true));    // accepted loser
    CHECK(errorAt(0, pos, false));   // rejected winner
    CHECK_FALSE(errorAt(0, neg, false));
    CHECK_FALSE(errorAt(0, pos, true));
}

TEST_CASE("losses and gains reproduce the boxed-payoff references") {
    // Always-open principal against the peeking, noise-shifted agent.
    const CompiledPeekScenario s = buildNoisyExpert(noisyExpertSpec());

    CHECK(loss(s.pi, s.muSelf, s.principal) == Rat(20, 12));
    CHECK(loss(s.pi, s.muDelegate, s.agent) == Rat(21, 12));

    // The all-reject strategy on all-negative gambles has no errors at all.
    const StateSpace space({"w1", "w2"});
    const GambleDistribution allNeg(
        space, {{Gamble("g", space, {Rat(-1), Rat(-2)}), Rat(1)}});
    CHECK(loss(Credence::uniform(space), allNeg, DecisionStrategy::rejectAll(allNeg)) == 0);
    CHECK(gain(Credence::uniform(space), allNeg, DecisionStrategy::rejectAll(allNeg),
               ScoreConvention::Strict) == 0);
}

TEST_CASE("gain under both conventions") {
    const CompiledReachScenario reach = buildReachScenario(reachSpec());
    CHECK(gain(reach.pi, reach.muSelf, reach.principal, ScoreConvention::Strict) == Rat(8, 3));

    const CompiledPeekScenario misaligned = buildMisalignedExpert(misalignedExpertSpec());
    CHECK(gain(misaligned.pi, misaligned.muDelegate, misaligned.agent,
               ScoreConvention::Credit) == Rat(1250, 12));
}

TEST_CASE("score combines loss and gain with a full trace") {
    const CompiledPeekScenario noisy = buildNoisyExpert(noisyExpertSpec());
    const ScoreReport alice = score(noisy.pi, noisy.muSelf, noisy.principal,
                                    ScoreConvention::Credit);
    CHECK(alice.score == -2);

    const CompiledReachScenario reach = buildReachScenario(reachSpec());
    const ScoreReport bob = score(reach.pi, reach.muDelegate, reach.agent,
                                  ScoreConvention::Strict);
    CHECK(bob.score == Rat(-47, 30));

    const GambleDistribution empty;
    const ScoreReport zero = score(Credence::uniform(twoStates()), empty,
                                   DecisionStrategy(), ScoreConvention::Credit);
    CHECK(zero.loss == 0);
    CHECK(zero.gain == 0);
    CHECK(zero.score == 0);
    CHECK(zero.trace.empty());
}

TEST_CASE("shared-distribution criterion compares losses") {
    const CompiledPeekScenario noisy = buildNoisyExpert(noisyExpertSpec());
    const SharedVerdict v = delegationCriterionShared(noisy.pi, noisy.muSelf, noisy.principal,
                                                      noisy.agent, ScoreConvention::Credit);
    CHECK_FALSE(v.delegate_);
    CHECK(v.principalLoss == Rat(20, 12));
    CHECK(v.agentLoss == Rat(21, 12));

    // Identical strategies tie, and a tie delegates.
    const SharedVerdict tie = delegationCriterionShared(noisy.pi, noisy.muSelf, noisy.principal,
                                                        noisy.principal, ScoreConvention::Credit);
    CHECK(tie.delegate_);

    // The per-state oracle has an empty error set.
    const DecisionStrategy oracle = DecisionStrategy::idealOracle(noisy.muSelf);
    const SharedVerdict best = delegationCriterionShared(noisy.pi, noisy.muSelf, noisy.principal,
                                                         oracle, ScoreConvention::Credit);
    CHECK(best.delegate_);
    CHECK(best.agentLoss == 0);
}

TEST_CASE("reach criterion on the three reference scenarios") {
    const CompiledReachScenario reach = buildReachScenario(reachSpec());
    const ReachVerdict reachVerdict =
        delegationCriterionReach(reach.pi, reach.muSelf, reach.muDelegate, reach.principal,
                                 reach.agent, ScoreConvention::Strict);
    CHECK(reachVerdict.delegate_);
    CHECK(reachVerdict.principal.score == Rat(-1, 9));
    CHECK(reachVerdict.agent.score == Rat(-47, 30));

    const CompiledPeekScenario noisy = buildNoisyExpert(noisyExpertSpec());
    const ReachVerdict noisyVerdict =
        delegationCriterionReach(noisy.pi, noisy.muSelf, noisy.muDelegate, noisy.principal,
                                 noisy.agent, ScoreConvention::Credit);
    CHECK_FALSE(noisyVerdict.delegate_);

    const CompiledPeekScenario misaligned = buildMisalignedExpert(misalignedExpertSpec());
    const ReachVerdict misalignedVerdict =
        delegationCriterionReach(misaligned.pi, misaligned.muSelf, misaligned.muDelegate,
                                 misaligned.principal, misaligned.agent, ScoreConvention::Credit);
    CHECK(misalignedVerdict.delegate_);
}

TEST_CASE("agent ranking sorts ascending with stable ties") {
    const CompiledReachScenario reach = buildReachScenario(reachSpec());
    const std::vector<AgentCandidate> candidates{
        {"alice", reach.muSelf, reach.principal},
        {"bob", reach.muDelegate, reach.agent},
        {"alice-twin", reach.muSelf, reach.principal},
    };
    const auto ranked = compareAgents(reach.pi, candidates, ScoreConvention::Strict);
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].name == "bob");
    CHECK(ranked[1].name == "alice");
    CHECK(ranked[2].name == "alice-twin");

    const auto solo = compareAgents(reach.pi, {{"alice", reach.muSelf, reach.principal}},
                                    ScoreConvention::Strict);
    CHECK(solo.front().name == "alice");
}

TEST_CASE("every cell lands in exactly one bucket and the conventions nest") {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 1000; ++round) {
        const RandomInstance inst = randomInstance(rng);
        const DecisionStrategy d = randomStrategy(rng, inst.mu);

        const ScoreReport strict = score(inst.pi, inst.mu, d, ScoreConvention::Strict);
        const ScoreReport credit = score(inst.pi, inst.mu, d, ScoreConvention::Credit);

        CHECK(strict.score == strict.loss - strict.gain);
        CHECK(credit.score == credit.loss - credit.gain);
        CHECK(strict.loss == credit.loss);
        CHECK(credit.gain >= strict.gain);
        CHECK(credit.score <= strict.score);

        // Total mass decomposition: loss + strict gain + neutral = sum of
        // pi * mu * |payoff| over all cells.
        Rat total = 0, neutral = 0;
        for (const TraceRow& row : strict.trace) {
            total += row.weight * row.magnitude;
            if (row.cls == TraceClass::Neutral) neutral += row.weight * row.magnitude;
        }
        CHECK(strict.loss + strict.gain + neutral == total);
        CHECK(credit.gain == strict.gain + neutral);

        // For plain gambles the engine's classification matches errorAt.
        for (const TraceRow& row : strict.trace) {
            const Gamble* gamble = nullptr;
            for (const auto& [g, w] : inst.mu.support()) {
                if (g.label == row.gamble) gamble = &g;
            }
            REQUIRE(gamble != nullptr);
            const bool isError = errorAt(row.state, *gamble, row.accepted);
            CHECK(isError == (row.cls == TraceClass::Loss));
        }
    }
}

TEST_CASE("the ideal oracle has zero loss and is never outscored") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 1000; ++round) {
        const RandomInstance inst = randomInstance(rng);
        const DecisionStrategy oracle = DecisionStrategy::idealOracle(inst.mu);
        const DecisionStrategy other = randomStrategy(rng, inst.mu);

        for (const ScoreConvention conv : {ScoreConvention::Strict, ScoreConvention::Credit}) {
            const ScoreReport best = score(inst.pi, inst.mu, oracle, conv);
            const ScoreReport sample = score(inst.pi, inst.mu, other, conv);
            CHECK(best.loss == 0);
            CHECK(best.gain >= sample.gain);
            CHECK(best.score <= sample.score);
        }
    }
}

TEST_CASE("scaling payoffs scales scores and preserves verdicts") {
    std::mt19937_64 rng(29);
    for (int round = 0; round < 1000; ++round) {
        const RandomInstance inst = randomInstance(rng);
        const DecisionStrategy dP = randomStrategy(rng, inst.mu);
        const DecisionStrategy dA = randomStrategy(rng, inst.mu);
        const Rat lambda(1 + static_cast<long>(rng() % 7), 1 + static_cast<long>(rng() % 3));

        std::vector<std::pair<Gamble, Rat>> scaledSupport;
        for (const auto& [g, w] : inst.mu.support()) {
            std::vector<Rat> payoffs = g.payoffs;
            for (Rat& p : payoffs) p *= lambda;
            scaledSupport.push_back({Gamble(g.label, g.space, payoffs), w});
        }
        const GambleDistribution scaled(inst.space, scaledSupport);

        const ScoreConvention conv =
            rng() % 2 == 0 ? ScoreConvention::Strict : ScoreConvention::Credit;
        const ScoreReport base = score(inst.pi, inst.mu, dP, conv);
        const ScoreReport scaledReport = score(inst.pi, scaled, dP, conv);
        CHECK(scaledReport.loss == lambda * base.loss);
        CHECK(scaledReport.gain == lambda * base.gain);
        CHECK(scaledReport.score == lambda * base.score);

        const ReachVerdict before =
            delegationCriterionReach(inst.pi, inst.mu, inst.mu, dP, dA, conv);
        const ReachVerdict after =
            delegationCriterionReach(inst.pi, scaled, scaled, dP, dA, conv);
        CHECK(before.delegate_ == after.delegate_);

        const SharedVerdict sharedBefore =
            delegationCriterionShared(inst.pi, inst.mu, dP, dA, conv);
        const SharedVerdict sharedAfter =
            delegationCriterionShared(inst.pi, scaled, dP, dA, conv);
        CHECK(sharedBefore.delegate_ == sharedAfter.delegate_);
    }
}

TEST_CASE("trace rows sum back to the reported loss and gain") {
    std::mt19937_64 rng(37);
    for (int round = 0; round < 200; ++round) {
        const RandomInstance inst = randomInstance(rng);
        const DecisionStrategy d = randomStrategy(rng, inst.mu);
        const ScoreReport r = score(inst.pi, inst.mu, d, ScoreConvention::Credit);
        Rat lossSum = 0, gainSum = 0;
        for (const TraceRow& row : r.trace) {
            if (row.cls == TraceClass::Loss) lossSum += row.weight * row.magnitude;
            if (row.cls == TraceClass::Gain || row.cls == TraceClass::Neutral) {
                gainSum += row.weight * row.magnitude;
            }
        }
        CHECK(lossSum == r.loss);
        CHECK(gainSum == r.gain);
    }
}

TEST_CASE("strategies must cover the support") {
    const StateSpace space({"w"});
    const GambleDistribution mu(space, {{Gamble("g", space, {Rat(1)}), Rat(1)}});
    DecisionStrategy d;  // no rows
    CHECK_THROWS_AS(score(Credence::uniform(space), mu, d, ScoreConvention::Strict),
                    std::out_of_range);
}
