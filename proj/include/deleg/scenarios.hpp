#pragma once

#include "deleg/bandit.hpp"
#include "deleg/scoring.hpp"

#include <optional>
#include <string>
#include <vector>

namespace deleg {

struct NoiseState {
    std::string tag;
    Rat shift;   // added to the agent's utility of every outcome
    Rat weight;  // probability of this noise state
};

enum class AgentUtilityKind { Identity, AdditiveShift, SignedSqrt };

std::string toString(AgentUtilityKind k);
AgentUtilityKind agentUtilityFromString(const std::string& s);

/// A boxed-payoff scenario: the principal opens on her unconditional mean; the
/// agent peeks at `peekCount` other outcomes, updates to a uniform belief over
/// the rest, applies its own utility transform plus the noise shift, and opens
/// on the sign of its expected utility. The fee is charged to the principal on
/// opened boxes only.
struct PeekAgentSpec {
    std::vector<Rat> outcomes;            // distinct, uniformly likely
    int peekCount = 1;
    std::vector<NoiseState> noiseStates;  // weights sum to 1
    AgentUtilityKind agentUtility = AgentUtilityKind::Identity;
    Rat fee = 0;
    bool acceptOnTie = true;              // agent's rule at expected utility 0
};

struct PeekStateMeta {
    std::string stateLabel;
    Rat trueOutcome;
    std::vector<Rat> peeked;
    std::string noiseTag;
    std::vector<Rat> belief;  // remaining outcomes, ascending
    Rat agentEu;
    bool agentOpens;
    bool principalOpens;
};

struct CompiledPeekScenario {
    StateSpace space;  // one state per (outcome, peeked set, noise) combination
    Credence pi;
    GambleDistribution muSelf;
    GambleDistribution muDelegate;  // fee-adjusted accepted payoffs
    DecisionStrategy principal;
    DecisionStrategy agent;
    std::vector<PeekStateMeta> meta;
};

CompiledPeekScenario buildNoisyExpert(const PeekAgentSpec& spec);
CompiledPeekScenario buildMisalignedExpert(const PeekAgentSpec& spec);

enum class BoxAvailability { Both, DelegateOnly };

struct ReachBox {
    std::string label;
    std::vector<Rat> outcomes;  // uniform within the box
    BoxAvailability availability = BoxAvailability::Both;
};

struct ReachScenarioSpec {
    std::vector<ReachBox> boxes;
    bool openOnTie = true;  // rule is open iff E[outcome] >= 0
};

struct ReachBoxMeta {
    std::string label;
    std::vector<Rat> outcomes;
    Rat expectedValue;
    bool opens;
    bool delegateOnly;
    Rat loss;        // per-box expected loss under the rule
    Rat strictGain;  // per-box expected strict gain
};

struct CompiledReachScenario {
    StateSpace space;  // shared outcome slots; each box repeats its outcomes
    Credence pi;
    GambleDistribution muSelf;
    GambleDistribution muDelegate;
    DecisionStrategy principal;
    DecisionStrategy agent;
    std::vector<ReachBoxMeta> meta;
};

CompiledReachScenario buildReachScenario(const ReachScenarioSpec& spec);

/// A reference value recorded with a scenario that disagrees with the
/// row-derived computation; the rows are authoritative.
struct Discrepancy {
    std::string field;
    Rat stated;
    Rat derived;
    std::string note;
};

struct ScenarioResult {
    std::string name;
    ScoreConvention convention;
    ScoreReport principalReport;
    ScoreReport agentReport;
    bool delegateVerdict;
    Rat margin;  // principal score - agent score
    std::vector<PeekStateMeta> peekTable;   // populated for peek scenarios
    std::vector<ReachBoxMeta> reachTable;   // populated for the reach scenario
    std::vector<Discrepancy> discrepancies;
};

/// Canonical scenario specs by name.
PeekAgentSpec noisyExpertSpec();
PeekAgentSpec misalignedExpertSpec();
ReachScenarioSpec reachSpec();

/// Compiles and scores one of {noisy-expert, misaligned-expert, reach} under
/// its declared convention. Unknown names raise std::invalid_argument.
ScenarioResult runScenario(const std::string& name);

/// Scores a compiled peek scenario under an explicit convention.
ScenarioResult scorePeekScenario(const std::string& name, const CompiledPeekScenario& compiled,
                                 ScoreConvention conv);

/// Bandit arms for a named scenario: arm 0 acts directly, arm 1 delegates.
/// The optional noise override replaces the scenario's noise shifts
/// (equal-weight) before compiling.
BanditConfig banditConfigForScenario(const std::string& name, long horizon, uint64_t seed,
                                     ExplorationForm exploration = ExplorationForm::LogSquared,
                                     const std::optional<std::vector<Rat>>& noiseShifts = {});

/// sign(x) * sqrt(|x|), defined only for perfect-square rationals.
Rat signedSqrt(const Rat& x);

}  // namespace deleg
