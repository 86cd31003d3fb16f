#pragma once

#include "deleg/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace deleg {

enum class ArmKind { Self, Delegate };

std::string toString(ArmKind k);

/// One outcome of pulling an arm: a sampled environment state and the exact
/// reward the arm's decision rule earns there.
struct ArmOutcome {
    std::string state;
    Rat weight;  // positive; weights sum to 1 per arm
    Rat reward;
};

struct ArmSpec {
    std::string name;
    ArmKind kind = ArmKind::Self;
    std::vector<ArmOutcome> support;
};

/// Exploration radius variant: LogSquared is sqrt(2 ln(1 + t (ln t)^2) / n),
/// Textbook is sqrt(2 ln t / n).
enum class ExplorationForm { LogSquared, Textbook };

std::string toString(ExplorationForm f);
ExplorationForm explorationFromString(const std::string& s);

struct BanditConfig {
    std::vector<ArmSpec> arms;  // at least 2
    long horizon = 0;           // at least |arms|
    uint64_t seed = 0;
    ExplorationForm exploration = ExplorationForm::LogSquared;
    /// When set, the result carries the legacy summary quantity
    /// outcomeSum - max(last observed reward per arm) alongside true regret.
    std::optional<Rat> outcomeSum;
};

struct BanditStep {
    long t;
    int arm;
    std::string state;
    Rat reward;
};

struct BanditResult {
    std::vector<long> counts;
    std::vector<double> means;      // incremental means driving UCB
    std::vector<Rat> exactMeans;    // recomputed from the log
    std::vector<Rat> analyticMeans;
    Rat totalReward;
    Rat regret;  // horizon * best analytic mean - total reward
    int preferredArm;  // argmax of empirical means, lowest index on ties
    bool preferredTie;
    std::optional<Rat> legacyRegret;
    std::vector<BanditStep> log;
};

/// Exact expected per-pull reward of an arm.
Rat analyticArmMean(const ArmSpec& arm);

/// Round-robin through the first |arms| steps, then argmax of mean + radius;
/// ties go to the lowest index. The only floating-point decision in the library.
int ucbSelect(const std::vector<long>& counts, const std::vector<double>& means, long t,
              ExplorationForm form);

/// Seeded, reproducible run: per step, pick an arm, sample that arm's
/// environment, collect the realized reward.
BanditResult runBandit(const BanditConfig& cfg);

struct TrialBrief {
    uint64_t seed;
    int preferredArm;
    std::vector<double> means;
    double regret;
};

struct ConvergenceSummary {
    int trials = 0;
    int converged = 0;       // trials whose preferred arm is analytically best
    bool analyticTie = false;
    int bestArm = 0;
    double meanRegret = 0;
    double stdRegret = 0;
    double meanArmDiff = 0;  // mean of (last arm mean - first arm mean)
    double stdArmDiff = 0;
    std::vector<TrialBrief> perTrial;
};

/// Independent trials with seeds cfg.seed + 0 .. trials-1.
ConvergenceSummary convergenceExperiment(const BanditConfig& cfg, int trials);

}  // namespace deleg
