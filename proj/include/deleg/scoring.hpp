#pragma once

#include "deleg/frames.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace deleg {

/// Whether correctly rejected losing gambles earn gain credit.
enum class ScoreConvention { Strict, Credit };

std::string toString(ScoreConvention c);
ScoreConvention scoreConventionFromString(const std::string& s);

/// Accept/reject option with a state-indexed payoff vector; rejecting pays 0.
/// `acceptedPayoffs`, when present, is what accepting actually delivers
/// (e.g. net of a delegation fee) while `payoffs` stays the reference used to
/// classify rejections. They coincide for ordinary gambles.
struct Gamble {
    std::string label;
    StateSpace space;
    std::vector<Rat> payoffs;
    std::optional<std::vector<Rat>> acceptedPayoffs;

    Gamble(std::string label, StateSpace space, std::vector<Rat> payoffs,
           std::optional<std::vector<Rat>> acceptedPayoffs = std::nullopt);

    const Rat& payoffAt(size_t state) const { return payoffs.at(state); }
    const Rat& acceptedPayoffAt(size_t state) const {
        return acceptedPayoffs ? acceptedPayoffs->at(state) : payoffs.at(state);
    }
};

/// Finite-support distribution over gambles on a shared state space.
/// Weights are positive and sum to 1; the empty distribution is allowed and
/// scores to zero everywhere.
class GambleDistribution {
public:
    GambleDistribution() = default;
    GambleDistribution(StateSpace space, std::vector<std::pair<Gamble, Rat>> support);

    const StateSpace& space() const { return space_; }
    const std::vector<std::pair<Gamble, Rat>>& support() const { return support_; }
    bool empty() const { return support_.empty(); }

private:
    StateSpace space_;
    std::vector<std::pair<Gamble, Rat>> support_;
};

/// Extensional accept/reject rule over (state, gamble label).
class DecisionStrategy {
public:
    DecisionStrategy() = default;

    void setRow(const std::string& gambleLabel, std::vector<char> accepts);
    bool accepts(size_t state, const std::string& gambleLabel) const;
    bool hasRow(const std::string& gambleLabel) const;
    const std::map<std::string, std::vector<char>>& rows() const { return rows_; }

    /// Rule applied pointwise over a distribution's support.
    static DecisionStrategy fromPredicate(
        const GambleDistribution& mu,
        const std::function<bool(size_t state, const Gamble&)>& accept);

    /// Accepts exactly the gambles with non-negative payoff at each state.
    static DecisionStrategy idealOracle(const GambleDistribution& mu);

    static DecisionStrategy acceptAll(const GambleDistribution& mu);
    static DecisionStrategy rejectAll(const GambleDistribution& mu);

private:
    std::map<std::string, std::vector<char>> rows_;
};

/// Membership of the state's ideal set: should the gamble be accepted at w?
bool idealAt(size_t state, const Gamble& g);

/// Accepted losers and rejected winners.
bool errorAt(size_t state, const Gamble& g, bool accepted);

enum class TraceClass { Loss, Gain, Neutral };

std::string toString(TraceClass c);

struct TraceRow {
    size_t state;
    std::string stateLabel;
    std::string gamble;
    bool accepted;
    TraceClass cls;   // Neutral = correct rejection (credits under Credit)
    Rat magnitude;    // |payoff| used for scoring at this cell
    Rat value;        // realized payoff (0 when rejected)
    Rat weight;       // pi(state) * mu(gamble)
};

struct ScoreReport {
    Rat loss;
    Rat gain;   // under `convention`
    Rat score;  // loss - gain
    ScoreConvention convention;
    std::vector<TraceRow> trace;

    Rat strictGain() const;
    Rat creditGain() const;
};

Rat loss(const Credence& pi, const GambleDistribution& mu, const DecisionStrategy& d);
Rat gain(const Credence& pi, const GambleDistribution& mu, const DecisionStrategy& d,
         ScoreConvention conv);
ScoreReport score(const Credence& pi, const GambleDistribution& mu, const DecisionStrategy& d,
                  ScoreConvention conv);

struct SharedVerdict {
    bool delegate_;
    Rat principalLoss;
    Rat agentLoss;
};

/// Shared-distribution criterion: delegate when the agent's expected loss is
/// no worse than the principal's.
SharedVerdict delegationCriterionShared(const Credence& pi, const GambleDistribution& mu,
                                        const DecisionStrategy& dPrincipal,
                                        const DecisionStrategy& dAgent, ScoreConvention conv);

struct ReachVerdict {
    bool delegate_;
    ScoreReport principal;  // scored against muSelf
    ScoreReport agent;      // scored against muDelegate
    Rat margin;             // principal score - agent score
};

/// Differing-reach criterion: delegate when the agent's net score over its own
/// distribution is no worse than the principal's over hers.
ReachVerdict delegationCriterionReach(const Credence& pi, const GambleDistribution& muSelf,
                                      const GambleDistribution& muDelegate,
                                      const DecisionStrategy& dPrincipal,
                                      const DecisionStrategy& dAgent, ScoreConvention conv);

struct AgentCandidate {
    std::string name;
    GambleDistribution mu;
    DecisionStrategy strategy;
};

struct RankedCandidate {
    size_t index;  // position in the input sequence
    std::string name;
    ScoreReport report;
};

/// Candidates sorted by ascending score; ties keep input order.
std::vector<RankedCandidate> compareAgents(const Credence& pi,
                                           const std::vector<AgentCandidate>& candidates,
                                           ScoreConvention conv);

}  // namespace deleg
