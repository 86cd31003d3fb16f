#pragma once

#include "deleg/frames.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace deleg {

struct TrustWitness {
    OptionRV x;                 // the payoff variable the agent over-endorses
    Rat threshold;              // t
    Rat slack;                  // by how much the conditional expectation falls short
    std::vector<size_t> event;  // S = { w : E_w(x) >= t }, with pi(S) > 0
};

struct TrustVerdict {
    bool holds = false;
    bool decisive = false;  // true for the exact LP decision, false for sampling
    std::optional<TrustWitness> witness;
};

/// Exact decision of total trust: E_pi[X | E(X) >= t] >= t for every X, t with
/// pi-positive conditioning event. One small LP per nonempty event candidate
/// S (that's 2^|states| of them), with |X| <= 1, |t| <= 1 box normalization;
/// the system is positively homogeneous, so the box loses no generality.
TrustVerdict checkTotalTrust(const ProbabilityFrame& f);

/// Monte Carlo falsifier: integer payoff vectors in [-payoffBound, payoffBound],
/// thresholds swept over {E_w(X)}. Sound when it reports a violation,
/// inconclusive otherwise (holds=true, decisive=false).
TrustVerdict falsifyTotalTrustRandomized(const ProbabilityFrame& f, long trials, uint64_t seed,
                                         long payoffBound = 8);

/// Re-derives the event from (x, t) and checks the violation inequalities.
bool verifyTrustWitness(const ProbabilityFrame& f, const OptionRV& x, const Rat& t);

struct ValuingWitness {
    size_t problemIndex;
    std::string option;  // label of the option/act delegation loses to
    Rat margin;          // E_pi[option] - delegation value, > 0
};

struct ValuingVerdict {
    bool holds = false;
    Rat minMargin;  // min over (problem, option) of delegation - option value
    std::optional<ValuingWitness> witness;
};

/// Does delegation weakly beat every option of every problem in the family?
ValuingVerdict checkValuingOverFamily(const ProbabilityFrame& f,
                                      const std::vector<DecisionProblemRV>& family);

/// Generalized-frame form: problems are ordered act lists; the agent picks by
/// (P_w, V_w) with frame tie-break, the principal scores by u.
ValuingVerdict checkValuingOverFamily(const GeneralizedFrame& g,
                                      const std::vector<std::vector<Act>>& family);

Rat delegationValueGeneralized(const GeneralizedFrame& g, const std::vector<Act>& problem);

struct CellWitness {
    std::vector<size_t> cell;
    Act a, b;
    Rat principalA, principalB;  // E_pi(u . act | cell), strictly ordered A > B
    Rat agentA, agentB;          // E_w(V_w . act), with agentA <= agentB
};

struct EventWitness {
    std::vector<size_t> cell;
    std::vector<size_t> eventX, eventY;
    Rat agentX, agentY;          // P_w masses, strictly ordered X > Y
    Rat principalX, principalY;  // pi(. | cell) masses, with X < Y
};

struct AlignmentVerdict {
    bool holds = false;
    std::optional<CellWitness> cellWitness;
    std::optional<EventWitness> eventWitness;
    std::vector<std::vector<size_t>> skippedCells;  // pi-null cells, not checkable
};

/// The posterior-alignment condition on a clear frame: inside every pi-positive
/// cell, (i) the principal's strict conditional preference over acts implies the
/// agent's strict preference, and (ii) the agent's strict comparative credence
/// over events implies weak agreement of the principal's conditional credence.
/// Events range over the full power set unless singletonEventsOnly is set
/// (required above 12 states).
AlignmentVerdict checkPosteriorAlignment(const GeneralizedFrame& g,
                                         bool singletonEventsOnly = false);

struct CounterexampleProblem {
    GeneralizedFrame frame;      // original frame with spliced acts appended
    std::vector<Act> problem;    // ordered so agent ties resolve against the principal
    Act preferred;               // the act delegation loses to (a*)
    Rat margin;                  // E_pi(u(a*)) - delegation value, > 0
};

/// Builds the two-act problem {b*, a*} that turns a cell witness into a valuing
/// failure: a* follows the witness's a on the cell and a baseline act elsewhere,
/// b* likewise with b. The baseline defaults to a constant zero-utility act when
/// one exists, else the first constant act, else the first act.
CounterexampleProblem constructValuingCounterexample(const GeneralizedFrame& g,
                                                     const CellWitness& w);

/// Splice: a on X, fallback elsewhere.
Act spliceActs(const Act& a, const std::vector<size_t>& onStates, const Act& fallback,
               std::string label = "");

struct RichnessReport {
    bool closed = true;
    std::vector<Act> missing;  // splices absent from the act set (distinct outcomes)
};

/// Is the act set closed under splicing along each event?
RichnessReport checkRichnessClosure(const std::vector<Act>& acts,
                                    const std::vector<std::vector<size_t>>& events);

/// Fixpoint of splice-closure; throws when the set would exceed `cap` acts.
std::vector<Act> richnessClose(std::vector<Act> acts,
                               const std::vector<std::vector<size_t>>& events, size_t cap);

/// Two constant acts whose consequences the principal strictly ranks.
bool checkConstantActs(const GeneralizedFrame& g);

}  // namespace deleg
