#include "deleg/bandit.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace deleg {

std::string toString(ArmKind k) { return k == ArmKind::Self ? "self" : "delegate"; }

std::string toString(ExplorationForm f) {
    return f == ExplorationForm::LogSquared ? "log-squared" : "textbook";
}

ExplorationForm explorationFromString(const std::string& s) {
    if (s == "log-squared") return ExplorationForm::LogSquared;
    if (s == "textbook") return ExplorationForm::Textbook;
    throw std::invalid_argument("unknown exploration form: " + s);
}

Rat analyticArmMean(const ArmSpec& arm) {
    Rat total = 0;
    for (const ArmOutcome& o : arm.support) total += o.weight * o.reward;
    return total;
}

int ucbSelect(const std::vector<long>& counts, const std::vector<double>& means, long t,
              ExplorationForm form) {
    const size_t arms = counts.size();
    if (t < static_cast<long>(arms)) return static_cast<int>(t);
    int best = 0;
    double bestValue = -std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < arms; ++a) {
        const double lt = std::log(static_cast<double>(t));
        const double numer = form == ExplorationForm::LogSquared
                                 ? std::log(1.0 + static_cast<double>(t) * lt * lt)
                                 : lt;
        const double ucb = means[a] + std::sqrt(2.0 * numer / static_cast<double>(counts[a]));
        if (ucb > bestValue) {
            bestValue = ucb;
            best = static_cast<int>(a);
        }
    }
    return best;
}

namespace {

// Exact categorical sampler over rational weights: weights are brought to a
// common integer denominator and a debiased uniform draw in [0, den) picks the
// entry. Stable across platforms because mt19937_64's output sequence is
// pinned by the standard.
class ArmSampler {
public:
    explicit ArmSampler(const ArmSpec& arm) {
        BigInt den = 1;
        Rat total = 0;
        for (const ArmOutcome& o : arm.support) {
            if (o.weight <= 0) throw std::invalid_argument("arm weights must be positive");
            den = lcm(den, denominator(o.weight));
            total += o.weight;
        }
        if (total != 1) throw std::invalid_argument("arm weights must sum to 1");
        den_ = den.convert_to<uint64_t>();
        BigInt acc = 0;
        for (const ArmOutcome& o : arm.support) {
            acc += numerator(o.weight) * (den / denominator(o.weight));
            cumulative_.push_back(acc.convert_to<uint64_t>());
        }
    }

    size_t sample(std::mt19937_64& rng) const {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % den_;
        uint64_t draw = rng();
        while (draw >= limit) draw = rng();
        const uint64_t r = draw % den_;
        size_t lo = 0, hi = cumulative_.size() - 1;
        while (lo < hi) {
            const size_t mid = (lo + hi) / 2;
            if (r < cumulative_[mid]) hi = mid; else lo = mid + 1;
        }
        return lo;
    }

private:
    uint64_t den_ = 1;
    std::vector<uint64_t> cumulative_;
};

}  // namespace

BanditResult runBandit(const BanditConfig& cfg) {
    const size_t arms = cfg.arms.size();
    if (arms < 2) throw std::invalid_argument("bandit needs at least two arms");
    if (cfg.horizon < static_cast<long>(arms)) {
        throw std::invalid_argument("horizon must cover one pull per arm");
    }
    for (const ArmSpec& a : cfg.arms) {
        if (a.support.empty()) throw std::invalid_argument("arm has empty support");
    }

    std::vector<ArmSampler> samplers;
    samplers.reserve(arms);
    for (const ArmSpec& a : cfg.arms) samplers.emplace_back(a);

    BanditResult result;
    result.counts.assign(arms, 0);
    result.means.assign(arms, 0.0);
    result.totalReward = 0;
    result.log.reserve(static_cast<size_t>(cfg.horizon));
    for (const ArmSpec& a : cfg.arms) result.analyticMeans.push_back(analyticArmMean(a));

    std::mt19937_64 rng(cfg.seed);
    std::vector<Rat> sums(arms, Rat(0));
    std::vector<Rat> lastReward(arms, Rat(0));

    for (long t = 0; t < cfg.horizon; ++t) {
        const int arm = ucbSelect(result.counts, result.means, t, cfg.exploration);
        const size_t idx = samplers[arm].sample(rng);
        const ArmOutcome& outcome = cfg.arms[arm].support[idx];

        result.counts[arm] += 1;
        const double n = static_cast<double>(result.counts[arm]);
        result.means[arm] =
            ((n - 1.0) / n) * result.means[arm] + (1.0 / n) * toDouble(outcome.reward);
        sums[arm] += outcome.reward;
        lastReward[arm] = outcome.reward;
        result.totalReward += outcome.reward;
        result.log.push_back({t, arm, outcome.state, outcome.reward});
    }

    for (size_t a = 0; a < arms; ++a) {
        result.exactMeans.push_back(result.counts[a] > 0 ? sums[a] / result.counts[a] : Rat(0));
    }
    Rat bestMean = result.analyticMeans[0];
    for (const Rat& m : result.analyticMeans) bestMean = std::max(bestMean, m);
    result.regret = Rat(cfg.horizon) * bestMean - result.totalReward;

    result.preferredArm = 0;
    result.preferredTie = false;
    for (size_t a = 1; a < arms; ++a) {
        if (result.means[a] > result.means[result.preferredArm]) {
            result.preferredArm = static_cast<int>(a);
        }
    }
    for (size_t a = 0; a < arms; ++a) {
        if (static_cast<int>(a) != result.preferredArm &&
            result.means[a] == result.means[result.preferredArm]) {
            result.preferredTie = true;
        }
    }
    if (cfg.outcomeSum) {
        Rat maxLast = lastReward[0];
        for (const Rat& r : lastReward) maxLast = std::max(maxLast, r);
        result.legacyRegret = *cfg.outcomeSum - maxLast;
    }
    return result;
}

ConvergenceSummary convergenceExperiment(const BanditConfig& cfg, int trials) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");

    ConvergenceSummary summary;
    summary.trials = trials;

    std::vector<Rat> analytic;
    for (const ArmSpec& a : cfg.arms) analytic.push_back(analyticArmMean(a));
    Rat best = analytic[0];
    summary.bestArm = 0;
    for (size_t a = 1; a < analytic.size(); ++a) {
        if (analytic[a] > best) {
            best = analytic[a];
            summary.bestArm = static_cast<int>(a);
        }
    }
    for (size_t a = 0; a < analytic.size(); ++a) {
        if (static_cast<int>(a) != summary.bestArm && analytic[a] == best) {
            summary.analyticTie = true;
        }
    }

    std::vector<double> regrets, armDiffs;
    for (int i = 0; i < trials; ++i) {
        BanditConfig trialCfg = cfg;
        trialCfg.seed = cfg.seed + static_cast<uint64_t>(i);
        const BanditResult r = runBandit(trialCfg);
        const bool ok = summary.analyticTie
                            ? analytic[r.preferredArm] == best
                            : r.preferredArm == summary.bestArm;
        if (ok) summary.converged += 1;
        regrets.push_back(toDouble(r.regret));
        armDiffs.push_back(r.means.back() - r.means.front());
        summary.perTrial.push_back({trialCfg.seed, r.preferredArm, r.means,
                                    toDouble(r.regret)});
    }

    auto meanOf = [](const std::vector<double>& xs) {
        double s = 0;
        for (double x : xs) s += x;
        return s / static_cast<double>(xs.size());
    };
    auto stdOf = [&](const std::vector<double>& xs, double mean) {
        double s = 0;
        for (double x : xs) s += (x - mean) * (x - mean);
        return std::sqrt(s / static_cast<double>(xs.size()));
    };
    summary.meanRegret = meanOf(regrets);
    summary.stdRegret = stdOf(regrets, summary.meanRegret);
    summary.meanArmDiff = meanOf(armDiffs);
    summary.stdArmDiff = stdOf(armDiffs, summary.meanArmDiff);
    return summary;
}

}  // namespace deleg
