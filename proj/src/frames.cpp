#include "deleg/frames.hpp"

#include <algorithm>
#include <stdexcept>

namespace deleg {

namespace {

void requireSameSpace(const StateSpace& a, const StateSpace& b, const char* what) {
    if (a != b) throw std::domain_error(std::string("state-space mismatch in ") + what);
}

}  // namespace

StateSpace::StateSpace() : StateSpace(std::vector<std::string>{}) {}

StateSpace::StateSpace(std::vector<std::string> labels) {
    auto index = std::make_shared<std::map<std::string, size_t>>();
    for (size_t i = 0; i < labels.size(); ++i) {
        if (!index->emplace(labels[i], i).second) {
            throw std::invalid_argument("duplicate state label: " + labels[i]);
        }
    }
    labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
    index_ = std::move(index);
}

size_t StateSpace::index(const std::string& label) const {
    auto it = index_->find(label);
    if (it == index_->end()) throw std::out_of_range("unknown state: " + label);
    return it->second;
}

bool StateSpace::contains(const std::string& label) const {
    return index_->count(label) != 0;
}

bool StateSpace::operator==(const StateSpace& other) const {
    return labels_ == other.labels_ || *labels_ == *other.labels_;
}

Credence::Credence(StateSpace space, std::vector<Rat> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
    if (space_.size() == 0) throw std::invalid_argument("credence over empty state space");
    if (weights_.size() != space_.size()) {
        throw std::invalid_argument("credence must assign a weight to every state");
    }
    Rat total = 0;
    for (const Rat& w : weights_) {
        if (w < 0 || w > 1) throw std::invalid_argument("credence weight outside [0,1]");
        total += w;
    }
    if (total != 1) {
        throw std::invalid_argument("credence weights must sum to exactly 1");
    }
}

Credence Credence::uniform(const StateSpace& space) {
    if (space.size() == 0) throw std::invalid_argument("uniform credence over empty space");
    return Credence(space, std::vector<Rat>(space.size(), Rat(1, space.size())));
}

Credence Credence::pointMass(const StateSpace& space, size_t state) {
    std::vector<Rat> w(space.size(), 0);
    w.at(state) = 1;
    return Credence(space, std::move(w));
}

Rat Credence::mass(const std::vector<size_t>& states) const {
    Rat total = 0;
    for (size_t i : states) total += weights_.at(i);
    return total;
}

bool Credence::operator==(const Credence& other) const {
    return space_ == other.space_ && weights_ == other.weights_;
}

OptionRV::OptionRV(std::string label_, StateSpace space_, std::vector<Rat> payoffs_)
    : label(std::move(label_)), space(std::move(space_)), payoffs(std::move(payoffs_)) {
    if (payoffs.size() != space.size()) {
        throw std::invalid_argument("option must assign a payoff to every state");
    }
}

OptionRV OptionRV::constant(const StateSpace& space, const Rat& value, std::string label) {
    return OptionRV(std::move(label), space, std::vector<Rat>(space.size(), value));
}

DecisionProblemRV::DecisionProblemRV(std::vector<OptionRV> options)
    : options_(std::move(options)) {
    if (options_.empty()) throw std::invalid_argument("decision problem must be non-empty");
    for (size_t i = 1; i < options_.size(); ++i) {
        requireSameSpace(options_[i].space, options_[0].space, "decision problem");
    }
    for (size_t i = 0; i < options_.size(); ++i) {
        for (size_t j = i + 1; j < options_.size(); ++j) {
            if (options_[i].payoffs == options_[j].payoffs) {
                throw std::invalid_argument("options must be pairwise distinct as payoff vectors");
            }
        }
    }
}

ProbabilityFrame::ProbabilityFrame(StateSpace space_, Credence pi_, std::vector<Credence> agent_)
    : space(std::move(space_)), pi(std::move(pi_)), agent(std::move(agent_)) {
    requireSameSpace(pi.space(), space, "probability frame prior");
    if (agent.size() != space.size()) {
        throw std::invalid_argument("frame needs exactly one agent credence per state");
    }
    for (const Credence& c : agent) requireSameSpace(c.space(), space, "agent credence");
}

Act::Act(std::string label_, StateSpace space_, std::vector<std::string> outcomes_)
    : label(std::move(label_)), space(std::move(space_)), outcomes(std::move(outcomes_)) {
    if (outcomes.size() != space.size()) {
        throw std::invalid_argument("act must assign a consequence to every state");
    }
}

Act Act::constant(const StateSpace& space, const std::string& consequence, std::string label) {
    if (label.empty()) label = "const:" + consequence;
    return Act(std::move(label), space, std::vector<std::string>(space.size(), consequence));
}

bool Act::isConstant() const {
    return std::all_of(outcomes.begin(), outcomes.end(),
                       [&](const std::string& c) { return c == outcomes.front(); });
}

GeneralizedFrame::GeneralizedFrame(StateSpace space_, Credence pi_,
                                   std::vector<std::string> consequences_,
                                   std::map<std::string, Rat> utility_, std::vector<Act> acts_,
                                   std::vector<Credence> agentBeliefs_,
                                   std::vector<std::map<std::string, Rat>> agentUtilities_,
                                   std::vector<std::string> tieBreak_)
    : space(std::move(space_)),
      pi(std::move(pi_)),
      consequences(std::move(consequences_)),
      utility(std::move(utility_)),
      acts(std::move(acts_)),
      agentBeliefs(std::move(agentBeliefs_)),
      agentUtilities(std::move(agentUtilities_)),
      tieBreak(std::move(tieBreak_)) {
    requireSameSpace(pi.space(), space, "generalized frame prior");
    if (agentBeliefs.size() != space.size() || agentUtilities.size() != space.size()) {
        throw std::invalid_argument("agent beliefs/utilities must be total over states");
    }
    for (const Credence& c : agentBeliefs) requireSameSpace(c.space(), space, "agent belief");
    for (const std::string& c : consequences) {
        if (!utility.count(c)) {
            throw std::invalid_argument("principal utility missing consequence: " + c);
        }
        for (const auto& v : agentUtilities) {
            if (!v.count(c)) {
                throw std::invalid_argument("agent utility missing consequence: " + c);
            }
        }
    }
    for (const Act& a : acts) {
        requireSameSpace(a.space, space, "act");
        for (const std::string& c : a.outcomes) {
            if (std::find(consequences.begin(), consequences.end(), c) == consequences.end()) {
                throw std::invalid_argument("act \"" + a.label +
                                            "\" maps to unknown consequence: " + c);
            }
        }
    }
}

const Act& GeneralizedFrame::actByLabel(const std::string& label) const {
    for (const Act& a : acts) {
        if (a.label == label) return a;
    }
    throw std::out_of_range("unknown act: " + label);
}

GeneralizedFrame GeneralizedFrame::withActs(std::vector<Act> newActs) const {
    return GeneralizedFrame(space, pi, consequences, utility, std::move(newActs), agentBeliefs,
                            agentUtilities, tieBreak);
}

Rat expectation(const Credence& c, const OptionRV& x) {
    requireSameSpace(c.space(), x.space, "expectation");
    Rat total = 0;
    for (size_t i = 0; i < x.payoffs.size(); ++i) total += c.at(i) * x.payoffs[i];
    return total;
}

ExpertStrategy expertStrategy(const ProbabilityFrame& f, const DecisionProblemRV& d) {
    requireSameSpace(d.space(), f.space, "expert strategy");
    ExpertStrategy s{f.space, {}};
    s.choice.reserve(f.space.size());
    for (size_t w = 0; w < f.space.size(); ++w) {
        size_t best = 0;
        Rat bestValue = expectation(f.agent[w], d.options()[0]);
        for (size_t k = 1; k < d.size(); ++k) {
            Rat v = expectation(f.agent[w], d.options()[k]);
            if (v > bestValue) {
                best = k;
                bestValue = std::move(v);
            }
        }
        s.choice.push_back(d.options()[best]);
    }
    return s;
}

Rat delegationValue(const ProbabilityFrame& f, const ExpertStrategy& s) {
    requireSameSpace(s.space, f.space, "delegation value");
    Rat total = 0;
    for (size_t w = 0; w < f.space.size(); ++w) total += f.pi.at(w) * s.choice.at(w).at(w);
    return total;
}

OptionRV inducedOption(const GeneralizedFrame& g, const Act& a,
                       const std::map<std::string, Rat>& utility) {
    requireSameSpace(a.space, g.space, "induced option");
    std::vector<Rat> payoffs;
    payoffs.reserve(a.outcomes.size());
    for (const std::string& c : a.outcomes) {
        auto it = utility.find(c);
        if (it == utility.end()) {
            throw std::domain_error("utility map missing consequence: " + c);
        }
        payoffs.push_back(it->second);
    }
    return OptionRV("u(" + a.label + ")", g.space, std::move(payoffs));
}

Rat agentActValue(const GeneralizedFrame& g, size_t state, const Act& a) {
    const Credence& p = g.agentBeliefs.at(state);
    const auto& v = g.agentUtilities.at(state);
    Rat total = 0;
    for (size_t i = 0; i < g.space.size(); ++i) {
        if (p.at(i) == 0) continue;
        total += p.at(i) * v.at(a.at(i));
    }
    return total;
}

std::vector<size_t> agentArgmax(const GeneralizedFrame& g, size_t state,
                                const std::vector<Act>& problem) {
    if (problem.empty()) throw std::invalid_argument("agent choice over empty problem");
    std::vector<Rat> values;
    values.reserve(problem.size());
    for (const Act& a : problem) values.push_back(agentActValue(g, state, a));
    const Rat best = *std::max_element(values.begin(), values.end());
    std::vector<size_t> argmax;
    for (size_t k = 0; k < problem.size(); ++k) {
        if (values[k] == best) argmax.push_back(k);
    }
    return argmax;
}

const Act& agentChoice(const GeneralizedFrame& g, size_t state,
                       const std::vector<Act>& problem) {
    const std::vector<size_t> argmax = agentArgmax(g, state, problem);
    if (argmax.size() == 1 || g.tieBreak.empty()) return problem[argmax.front()];
    // Explicit priority list first; unlisted acts fall back to problem order.
    size_t bestRank = g.tieBreak.size();
    size_t best = argmax.front();
    for (size_t k : argmax) {
        auto it = std::find(g.tieBreak.begin(), g.tieBreak.end(), problem[k].label);
        const size_t rank = static_cast<size_t>(it - g.tieBreak.begin());
        if (rank < bestRank) {
            bestRank = rank;
            best = k;
        }
    }
    return problem[best];
}

std::vector<std::vector<size_t>> cells(const GeneralizedFrame& g) {
    std::vector<std::vector<size_t>> result;
    std::vector<long> assigned(g.space.size(), -1);
    for (size_t w = 0; w < g.space.size(); ++w) {
        if (assigned[w] >= 0) continue;
        std::vector<size_t> cell{w};
        assigned[w] = static_cast<long>(result.size());
        for (size_t v = w + 1; v < g.space.size(); ++v) {
            if (assigned[v] >= 0) continue;
            if (g.agentBeliefs[w] == g.agentBeliefs[v] &&
                g.agentUtilities[w] == g.agentUtilities[v]) {
                cell.push_back(v);
                assigned[v] = static_cast<long>(result.size());
            }
        }
        result.push_back(std::move(cell));
    }
    return result;
}

ClarityReport checkClarity(const GeneralizedFrame& g) {
    ClarityReport report;
    const auto partition = cells(g);
    std::vector<size_t> cellOf(g.space.size(), 0);
    for (size_t c = 0; c < partition.size(); ++c) {
        for (size_t w : partition[c]) cellOf[w] = c;
    }
    for (size_t w = 0; w < g.space.size(); ++w) {
        for (size_t v = 0; v < g.space.size(); ++v) {
            if (cellOf[v] != cellOf[w] && g.agentBeliefs[w].at(v) != 0) {
                report.clear = false;
                report.violations.push_back({w, v, g.agentBeliefs[w].at(v)});
            }
        }
    }
    return report;
}

}  // namespace deleg
