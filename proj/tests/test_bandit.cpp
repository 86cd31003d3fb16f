#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "deleg/scenarios.hpp"

#include <algorithm>
#include <cmath>

using namespace deleg;

namespace {

BanditConfig reachConfig(long horizon, uint64_t seed) {
    return banditConfigForScenario("reach", horizon, seed);
}

}  // namespace

TEST_CASE("analytic arm means for the named scenarios") {
    const BanditConfig reach = reachConfig(100, 1);
    REQUIRE(reach.arms.size() == 2);
    CHECK(analyticArmMean(reach.arms[0]) == Rat(2, 3));
    CHECK(analyticArmMean(reach.arms[1]) == Rat(19, 10));

    const BanditConfig noisy = banditConfigForScenario("noisy-expert", 100, 1);
    CHECK(analyticArmMean(noisy.arms[0]) == 2);
    CHECK(analyticArmMean(noisy.arms[1]) == Rat(23, 12));
    CHECK(noisy.outcomeSum.value() == 6);

    const BanditConfig misaligned = banditConfigForScenario("misaligned-expert", 100, 1);
    CHECK(analyticArmMean(misaligned.arms[0]) == 0);
    CHECK(analyticArmMean(misaligned.arms[1]) == Rat(-25, 12));

    const ArmSpec alwaysReject{"null", ArmKind::Self,
                               {{"s", Rat(1, 2), Rat(0)}, {"t", Rat(1, 2), Rat(0)}}};
    CHECK(analyticArmMean(alwaysReject) == 0);
}

TEST_CASE("ucb selection") {
    // Round-robin initialization.
    CHECK(ucbSelect({0, 0}, {0.0, 0.0}, 0, ExplorationForm::LogSquared) == 0);
    CHECK(ucbSelect({1, 0}, {0.5, 0.0}, 1, ExplorationForm::LogSquared) == 1);

    // Equal means: the rarely pulled arm has the larger radius.
    CHECK(ucbSelect({10, 1}, {1.0, 1.0}, 100, ExplorationForm::LogSquared) == 1);
    CHECK(ucbSelect({10, 1}, {1.0, 1.0}, 100, ExplorationForm::Textbook) == 1);

    // Equal counts: the mean decides.
    CHECK(ucbSelect({500, 500}, {2.0, 1.9}, 1000, ExplorationForm::LogSquared) == 0);

    // Ties go to the lowest index.
    CHECK(ucbSelect({5, 5}, {1.0, 1.0}, 50, ExplorationForm::LogSquared) == 0);
}

TEST_CASE("run validation") {
    BanditConfig cfg = reachConfig(1, 1);
    CHECK_THROWS_AS(runBandit(cfg), std::invalid_argument);  // horizon < arms

    BanditConfig oneArm = reachConfig(10, 1);
    oneArm.arms.pop_back();
    CHECK_THROWS_AS(runBandit(oneArm), std::invalid_argument);
}

TEST_CASE("a horizon equal to the arm count pulls each arm once") {
    const BanditResult r = runBandit(reachConfig(2, 7));
    CHECK(r.counts == std::vector<long>{1, 1});
    CHECK(r.log[0].arm == 0);
    CHECK(r.log[1].arm == 1);
}

TEST_CASE("identical seeds reproduce the log bit for bit") {
    const BanditResult a = runBandit(reachConfig(5000, 123));
    const BanditResult b = runBandit(reachConfig(5000, 123));
    REQUIRE(a.log.size() == b.log.size());
    for (size_t i = 0; i < a.log.size(); ++i) {
        CHECK(a.log[i].t == b.log[i].t);
        CHECK(a.log[i].arm == b.log[i].arm);
        CHECK(a.log[i].state == b.log[i].state);
        CHECK(a.log[i].reward == b.log[i].reward);
    }
    CHECK(a.means == b.means);
    CHECK(a.regret == b.regret);

    const BanditResult c = runBandit(reachConfig(5000, 124));
    bool differs = false;
    for (size_t i = 0; i < c.log.size() && !differs; ++i) {
        differs = c.log[i].arm != a.log[i].arm || c.log[i].reward != a.log[i].reward;
    }
    CHECK(differs);
}

TEST_CASE("reported means and regret are consistent with the log") {
    const BanditResult r = runBandit(reachConfig(20000, 5));

    std::vector<Rat> sums(r.counts.size(), Rat(0));
    std::vector<long> counts(r.counts.size(), 0);
    Rat total = 0;
    for (const BanditStep& s : r.log) {
        sums[s.arm] += s.reward;
        counts[s.arm] += 1;
        total += s.reward;
    }
    CHECK(counts == r.counts);
    CHECK(total == r.totalReward);

    Rat best = r.analyticMeans[0];
    for (const Rat& m : r.analyticMeans) best = std::max(best, m);
    CHECK(r.regret == Rat(20000) * best - total);

    for (size_t a = 0; a < r.counts.size(); ++a) {
        REQUIRE(r.counts[a] > 0);
        const Rat exact = sums[a] / r.counts[a];
        CHECK(exact == r.exactMeans[a]);
        CHECK(std::abs(toDouble(exact) - r.means[a]) < 1e-9);
    }
}

TEST_CASE("deterministic arms lock on when the gap dominates the exploration bonus") {
    // Zero-variance arms make the means exact after one pull. With a gap of 4
    // the radius stays below it for this horizon, so after the round-robin
    // start the better arm is pulled every time.
    const ArmSpec low{"low", ArmKind::Self, {{"s", Rat(1), Rat(1)}}};
    const ArmSpec high{"high", ArmKind::Delegate, {{"s", Rat(1), Rat(5)}}};
    BanditConfig cfg;
    cfg.arms = {low, high};
    cfg.horizon = 200;
    cfg.seed = 9;
    const BanditResult r = runBandit(cfg);
    for (const BanditStep& s : r.log) {
        if (s.t >= 2 * 2) CHECK(s.arm == 1);
    }
    CHECK(r.preferredArm == 1);
    CHECK(r.regret == Rat(4));  // only the single initialization pull of arm 0

    // With a gap of 1 the growing radius forces the inferior arm to be
    // revisited; that is UCB working as designed, not a defect.
    BanditConfig narrow = cfg;
    narrow.arms[1].support[0].reward = Rat(2);
    const BanditResult n = runBandit(narrow);
    long lateLowPulls = 0;
    for (const BanditStep& s : n.log) {
        if (s.t >= 4 && s.arm == 0) ++lateLowPulls;
    }
    CHECK(lateLowPulls > 0);
    CHECK(n.preferredArm == 1);
}

TEST_CASE("legacy regret mirrors the outcome-sum bookkeeping") {
    BanditConfig cfg = banditConfigForScenario("noisy-expert", 100, 3);
    REQUIRE(cfg.outcomeSum.has_value());
    const BanditResult r = runBandit(cfg);
    REQUIRE(r.legacyRegret.has_value());
    Rat lastPerArm[2] = {Rat(0), Rat(0)};
    for (const BanditStep& s : r.log) lastPerArm[s.arm] = s.reward;
    CHECK(*r.legacyRegret == Rat(6) - std::max(lastPerArm[0], lastPerArm[1]));
}

TEST_CASE("convergence experiment identifies the better reach arm in most trials") {
    // Realized reach rewards have a per-pull sd near 6, so the self arm's
    // log-many pulls leave a noisy estimate; measured convergence sits near
    // 0.8 for this horizon. Assert a clear majority, not certainty.
    const ConvergenceSummary s = convergenceExperiment(reachConfig(2000, 1), 20);
    CHECK(s.trials == 20);
    CHECK(s.bestArm == 1);
    CHECK_FALSE(s.analyticTie);
    CHECK(s.converged >= 13);
    CHECK(s.meanRegret >= 0);
    CHECK(s.perTrial.size() == 20);
    CHECK(s.perTrial[0].seed == 1);
    CHECK(s.perTrial[19].seed == 20);
}

TEST_CASE("identical arms are flagged as an analytic tie") {
    const ArmSpec arm{"a", ArmKind::Self, {{"s", Rat(1), Rat(1)}}};
    ArmSpec twin = arm;
    twin.name = "b";
    BanditConfig cfg;
    cfg.arms = {arm, twin};
    cfg.horizon = 50;
    cfg.seed = 2;
    const ConvergenceSummary s = convergenceExperiment(cfg, 5);
    CHECK(s.analyticTie);
    CHECK(s.converged == 5);  // any preference matches a tied optimum
}

TEST_CASE("empirical error against the analytic mean shrinks with the horizon") {
    // Median over 30 seeds of |empirical - analytic| per arm, at increasing
    // horizons; medians must not increase end to end.
    const std::vector<long> horizons = {1000, 10000, 100000};
    std::vector<std::vector<double>> medians(2);
    for (long T : horizons) {
        std::vector<std::vector<double>> errors(2);
        for (uint64_t seed = 0; seed < 30; ++seed) {
            const BanditResult r = runBandit(reachConfig(T, 1000 + seed));
            for (size_t a = 0; a < 2; ++a) {
                errors[a].push_back(
                    std::abs(r.means[a] - toDouble(r.analyticMeans[a])));
            }
        }
        for (size_t a = 0; a < 2; ++a) {
            std::sort(errors[a].begin(), errors[a].end());
            medians[a].push_back(errors[a][15]);
        }
    }
    for (size_t a = 0; a < 2; ++a) {
        CHECK(medians[a].back() <= medians[a].front());
    }
}

TEST_CASE("noise shift overrides rebuild the delegate arm") {
    const BanditConfig symmetric = banditConfigForScenario(
        "noisy-expert", 100, 1, ExplorationForm::LogSquared,
        std::optional<std::vector<Rat>>({Rat(2), Rat(-2)}));
    CHECK(analyticArmMean(symmetric.arms[0]) == 2);

    const CompiledPeekScenario s = buildNoisyExpert([] {
        PeekAgentSpec spec = noisyExpertSpec();
        spec.noiseStates = {{"n1", Rat(2), Rat(1, 2)}, {"n2", Rat(-2), Rat(1, 2)}};
        return spec;
    }());
    // The per-state expected utilities change with the shifts even though the
    // open/not-open pattern (and hence the arm mean 23/12) happens to match
    // the default +4/-3 parameterization at these outcomes.
    CHECK(s.meta[0].agentEu == Rat(7, 2));
    CHECK(s.meta[1].agentEu == Rat(-1, 2));
    Rat expected = 0;
    for (size_t i = 0; i < s.space.size(); ++i) {
        if (s.meta[i].agentOpens) expected += s.pi.at(i) * s.meta[i].trueOutcome;
    }
    CHECK(analyticArmMean(symmetric.arms[1]) == expected);
    CHECK(expected == Rat(23, 12));
}
