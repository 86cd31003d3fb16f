#include "deleg/scoring.hpp"

#include <algorithm>
#include <stdexcept>

namespace deleg {

std::string toString(ScoreConvention c) {
    return c == ScoreConvention::Strict ? "strict" : "credit";
}

ScoreConvention scoreConventionFromString(const std::string& s) {
    if (s == "strict") return ScoreConvention::Strict;
    if (s == "credit") return ScoreConvention::Credit;
    throw std::invalid_argument("unknown score convention: " + s);
}

std::string toString(TraceClass c) {
    switch (c) {
        case TraceClass::Loss: return "loss";
        case TraceClass::Gain: return "gain";
        default: return "neutral";
    }
}

Gamble::Gamble(std::string label_, StateSpace space_, std::vector<Rat> payoffs_,
               std::optional<std::vector<Rat>> acceptedPayoffs_)
    : label(std::move(label_)),
      space(std::move(space_)),
      payoffs(std::move(payoffs_)),
      acceptedPayoffs(std::move(acceptedPayoffs_)) {
    if (payoffs.size() != space.size()) {
        throw std::invalid_argument("gamble must assign a payoff to every state");
    }
    if (acceptedPayoffs && acceptedPayoffs->size() != space.size()) {
        throw std::invalid_argument("accepted payoffs must cover every state");
    }
}

GambleDistribution::GambleDistribution(StateSpace space,
                                       std::vector<std::pair<Gamble, Rat>> support)
    : space_(std::move(space)), support_(std::move(support)) {
    Rat total = 0;
    for (const auto& [g, w] : support_) {
        if (g.space != space_) throw std::domain_error("gamble over a different state space");
        if (w <= 0) throw std::invalid_argument("gamble weights must be positive");
        total += w;
    }
    if (!support_.empty() && total != 1) {
        throw std::invalid_argument("gamble weights must sum to exactly 1");
    }
    for (size_t i = 0; i < support_.size(); ++i) {
        for (size_t j = i + 1; j < support_.size(); ++j) {
            if (support_[i].first.label == support_[j].first.label) {
                throw std::invalid_argument("duplicate gamble label: " + support_[i].first.label);
            }
        }
    }
}

void DecisionStrategy::setRow(const std::string& gambleLabel, std::vector<char> accepts) {
    rows_[gambleLabel] = std::move(accepts);
}

bool DecisionStrategy::accepts(size_t state, const std::string& gambleLabel) const {
    auto it = rows_.find(gambleLabel);
    if (it == rows_.end()) throw std::out_of_range("strategy has no rule for " + gambleLabel);
    return it->second.at(state) != 0;
}

bool DecisionStrategy::hasRow(const std::string& gambleLabel) const {
    return rows_.count(gambleLabel) != 0;
}

DecisionStrategy DecisionStrategy::fromPredicate(
    const GambleDistribution& mu,
    const std::function<bool(size_t state, const Gamble&)>& accept) {
    DecisionStrategy d;
    for (const auto& [g, w] : mu.support()) {
        std::vector<char> row(mu.space().size(), 0);
        for (size_t s = 0; s < mu.space().size(); ++s) row[s] = accept(s, g) ? 1 : 0;
        d.setRow(g.label, std::move(row));
    }
    return d;
}

DecisionStrategy DecisionStrategy::idealOracle(const GambleDistribution& mu) {
    return fromPredicate(mu, [](size_t s, const Gamble& g) { return idealAt(s, g); });
}

DecisionStrategy DecisionStrategy::acceptAll(const GambleDistribution& mu) {
    return fromPredicate(mu, [](size_t, const Gamble&) { return true; });
}

DecisionStrategy DecisionStrategy::rejectAll(const GambleDistribution& mu) {
    return fromPredicate(mu, [](size_t, const Gamble&) { return false; });
}

bool idealAt(size_t state, const Gamble& g) { return g.payoffAt(state) >= 0; }

bool errorAt(size_t state, const Gamble& g, bool accepted) {
    return accepted != idealAt(state, g);
}

Rat ScoreReport::strictGain() const {
    Rat total = 0;
    for (const TraceRow& row : trace) {
        if (row.cls == TraceClass::Gain) total += row.weight * row.magnitude;
    }
    return total;
}

Rat ScoreReport::creditGain() const {
    Rat total = strictGain();
    for (const TraceRow& row : trace) {
        if (row.cls == TraceClass::Neutral) total += row.weight * row.magnitude;
    }
    return total;
}

ScoreReport score(const Credence& pi, const GambleDistribution& mu, const DecisionStrategy& d,
                  ScoreConvention conv) {
    if (!mu.empty() && pi.space() != mu.space()) {
        throw std::domain_error("state-space mismatch in score");
    }
    ScoreReport report{Rat(0), Rat(0), Rat(0), conv, {}};
    for (const auto& [g, muWeight] : mu.support()) {
        for (size_t s = 0; s < pi.space().size(); ++s) {
            const bool accepted = d.accepts(s, g.label);
            TraceRow row;
            row.state = s;
            row.stateLabel = pi.space().label(s);
            row.gamble = g.label;
            row.accepted = accepted;
            row.weight = pi.at(s) * muWeight;
            if (accepted) {
                // Accepted cells are judged by what accepting delivers.
                const Rat& v = g.acceptedPayoffAt(s);
                row.value = v;
                row.magnitude = abs(v);
                row.cls = v >= 0 ? TraceClass::Gain : TraceClass::Loss;
            } else {
                // Rejected cells are judged against the reference payoff.
                const Rat& v = g.payoffAt(s);
                row.value = 0;
                row.magnitude = abs(v);
                row.cls = v >= 0 ? TraceClass::Loss : TraceClass::Neutral;
            }
            report.trace.push_back(std::move(row));
        }
    }
    report.loss = 0;
    for (const TraceRow& row : report.trace) {
        if (row.cls == TraceClass::Loss) report.loss += row.weight * row.magnitude;
    }
    report.gain = conv == ScoreConvention::Strict ? report.strictGain() : report.creditGain();
    report.score = report.loss - report.gain;
    return report;
}

Rat loss(const Credence& pi, const GambleDistribution& mu, const DecisionStrategy& d) {
    return score(pi, mu, d, ScoreConvention::Strict).loss;
}

Rat gain(const Credence& pi, const GambleDistribution& mu, const DecisionStrategy& d,
         ScoreConvention conv) {
    return score(pi, mu, d, conv).gain;
}

SharedVerdict delegationCriterionShared(const Credence& pi, const GambleDistribution& mu,
                                        const DecisionStrategy& dPrincipal,
                                        const DecisionStrategy& dAgent, ScoreConvention conv) {
    (void)conv;  // losses are convention-independent
    SharedVerdict v{false, loss(pi, mu, dPrincipal), loss(pi, mu, dAgent)};
    v.delegate_ = v.agentLoss <= v.principalLoss;
    return v;
}

ReachVerdict delegationCriterionReach(const Credence& pi, const GambleDistribution& muSelf,
                                      const GambleDistribution& muDelegate,
                                      const DecisionStrategy& dPrincipal,
                                      const DecisionStrategy& dAgent, ScoreConvention conv) {
    ReachVerdict v{false, score(pi, muSelf, dPrincipal, conv), score(pi, muDelegate, dAgent, conv),
                   Rat(0)};
    v.margin = v.principal.score - v.agent.score;
    v.delegate_ = v.agent.score <= v.principal.score;
    return v;
}

std::vector<RankedCandidate> compareAgents(const Credence& pi,
                                           const std::vector<AgentCandidate>& candidates,
                                           ScoreConvention conv) {
    if (candidates.empty()) throw std::invalid_argument("need at least one candidate");
    std::vector<RankedCandidate> ranked;
    ranked.reserve(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i) {
        ranked.push_back({i, candidates[i].name, score(pi, candidates[i].mu,
                                                       candidates[i].strategy, conv)});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedCandidate& a, const RankedCandidate& b) {
                         return a.report.score < b.report.score;
                     });
    return ranked;
}

}  // namespace deleg
