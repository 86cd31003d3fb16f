#pragma once

#include "deleg/rational.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace deleg {

/// Ordered finite set of state labels. Cheap to copy; compares by labels.
class StateSpace {
public:
    StateSpace();
    explicit StateSpace(std::vector<std::string> labels);

    size_t size() const { return labels_->size(); }
    const std::vector<std::string>& labels() const { return *labels_; }
    const std::string& label(size_t i) const { return labels_->at(i); }
    size_t index(const std::string& label) const;
    bool contains(const std::string& label) const;

    bool operator==(const StateSpace& other) const;
    bool operator!=(const StateSpace& other) const { return !(*this == other); }

private:
    std::shared_ptr<const std::vector<std::string>> labels_;
    std::shared_ptr<const std::map<std::string, size_t>> index_;
};

/// Exact probability distribution over a StateSpace. Weights must sum to 1.
class Credence {
public:
    Credence(StateSpace space, std::vector<Rat> weights);

    static Credence uniform(const StateSpace& space);
    static Credence pointMass(const StateSpace& space, size_t state);

    const StateSpace& space() const { return space_; }
    const Rat& at(size_t i) const { return weights_.at(i); }
    const Rat& at(const std::string& label) const { return weights_.at(space_.index(label)); }
    const std::vector<Rat>& weights() const { return weights_; }

    /// Total mass of a set of state indices.
    Rat mass(const std::vector<size_t>& states) const;

    bool operator==(const Credence& other) const;

private:
    StateSpace space_;
    std::vector<Rat> weights_;
};

/// A payoff vector over states (utility units).
struct OptionRV {
    std::string label;
    StateSpace space;
    std::vector<Rat> payoffs;

    OptionRV(std::string label, StateSpace space, std::vector<Rat> payoffs);
    static OptionRV constant(const StateSpace& space, const Rat& value, std::string label = "const");

    const Rat& at(size_t i) const { return payoffs.at(i); }
};

/// Non-empty ordered set of options, pairwise distinct as payoff vectors.
/// The order doubles as the tie-break preference for the expert strategy.
class DecisionProblemRV {
public:
    explicit DecisionProblemRV(std::vector<OptionRV> options);

    const std::vector<OptionRV>& options() const { return options_; }
    size_t size() const { return options_.size(); }
    const StateSpace& space() const { return options_.front().space; }

private:
    std::vector<OptionRV> options_;
};

/// Principal prior plus one agent credence per state.
struct ProbabilityFrame {
    StateSpace space;
    Credence pi;
    std::vector<Credence> agent;  // agent[i] = P at state i

    ProbabilityFrame(StateSpace space, Credence pi, std::vector<Credence> agent);

    const Credence& agentAt(size_t state) const { return agent.at(state); }
};

/// The option the agent would pick at each state.
struct ExpertStrategy {
    StateSpace space;
    std::vector<OptionRV> choice;  // choice[i] = option picked at state i

    const OptionRV& at(size_t state) const { return choice.at(state); }
};

/// A map from states to consequence labels.
struct Act {
    std::string label;
    StateSpace space;
    std::vector<std::string> outcomes;  // outcomes[i] = consequence at state i

    Act(std::string label, StateSpace space, std::vector<std::string> outcomes);
    static Act constant(const StateSpace& space, const std::string& consequence,
                        std::string label = "");

    const std::string& at(size_t i) const { return outcomes.at(i); }
    bool sameOutcomes(const Act& other) const { return outcomes == other.outcomes; }
    bool isConstant() const;
};

/// Principal beliefs/utilities plus a per-state agent profile (P, V).
/// Agent behavior is argmax of expected V under P; argmax ties are broken by
/// `tieBreak` (explicit act-label priority) and then by problem order.
struct GeneralizedFrame {
    StateSpace space;
    Credence pi;
    std::vector<std::string> consequences;
    std::map<std::string, Rat> utility;                      // principal u
    std::vector<Act> acts;
    std::vector<Credence> agentBeliefs;                      // P at each state
    std::vector<std::map<std::string, Rat>> agentUtilities;  // V at each state
    std::vector<std::string> tieBreak;                       // optional priority list

    GeneralizedFrame(StateSpace space, Credence pi, std::vector<std::string> consequences,
                     std::map<std::string, Rat> utility, std::vector<Act> acts,
                     std::vector<Credence> agentBeliefs,
                     std::vector<std::map<std::string, Rat>> agentUtilities,
                     std::vector<std::string> tieBreak = {});

    const Act& actByLabel(const std::string& label) const;
    /// Same frame with a different act set (beliefs/utilities unchanged).
    GeneralizedFrame withActs(std::vector<Act> newActs) const;
};

struct ClarityViolation {
    size_t state;       // omega
    size_t other;       // omega' outside [omega]
    Rat mass;           // P_omega(omega') > 0
};

struct ClarityReport {
    bool clear = true;
    std::vector<ClarityViolation> violations;
};

// --- operations ------------------------------------------------------------

/// Sum over states of c(w) * x(w). Throws std::domain_error on space mismatch.
Rat expectation(const Credence& c, const OptionRV& x);

/// At each state, the option maximizing the agent's expectation there;
/// ties go to the earliest option in the problem.
ExpertStrategy expertStrategy(const ProbabilityFrame& f, const DecisionProblemRV& d);

/// E_pi of the payoff delivered by following the strategy state by state.
Rat delegationValue(const ProbabilityFrame& f, const ExpertStrategy& s);

/// The option u . a induced by evaluating an act through a utility map.
OptionRV inducedOption(const GeneralizedFrame& g, const Act& a,
                       const std::map<std::string, Rat>& utility);

/// Agent's expected value of an act at a state: E_{P_w}(V_w . a).
Rat agentActValue(const GeneralizedFrame& g, size_t state, const Act& a);

/// Indices (into `problem`) of all acts maximizing the agent's value at `state`.
std::vector<size_t> agentArgmax(const GeneralizedFrame& g, size_t state,
                                const std::vector<Act>& problem);

/// The act the agent picks at `state` from a non-empty problem, after tie-break.
const Act& agentChoice(const GeneralizedFrame& g, size_t state,
                       const std::vector<Act>& problem);

/// Partition of states by exact equality of the (P, V) pair.
std::vector<std::vector<size_t>> cells(const GeneralizedFrame& g);

/// Clarity: every P_w vanishes outside w's own cell.
ClarityReport checkClarity(const GeneralizedFrame& g);

}  // namespace deleg
