#include "deleg/deference.hpp"

#include "deleg/simplex.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace deleg {

namespace {

std::vector<size_t> maskToStates(uint32_t mask) {
    std::vector<size_t> states;
    for (size_t i = 0; mask; ++i, mask >>= 1) {
        if (mask & 1u) states.push_back(i);
    }
    return states;
}

std::string uniqueLabel(std::string base, const std::vector<Act>& acts) {
    auto taken = [&](const std::string& l) {
        return std::any_of(acts.begin(), acts.end(), [&](const Act& a) { return a.label == l; });
    };
    while (taken(base)) base += "'";
    return base;
}

}  // namespace

// --- total trust -------------------------------------------------------------

// One feasibility program per candidate event S. In shifted coordinates
// X' = X + 1, t' = t + 1, s' = s + 4 (all >= 0) the constraints read
//   t' - E_w(X')            <= 0   for w in S      (E(X) >= t on S)
//   E_w(X') - t' + s'       <= 4   for w not in S  (E(X) <= t - s off S)
//   sum_S pi(w) X'_w - t' pi(S) + s' <= 4          (conditional mean below t by s)
// with X' <= 2, t' <= 2, s' <= 8, maximizing s'. A violation for S exists
// exactly when the optimum has s = s' - 4 > 0.
TrustVerdict checkTotalTrust(const ProbabilityFrame& f) {
    const size_t n = f.space.size();
    if (n > 16) {
        throw std::invalid_argument(
            "checkTotalTrust enumerates 2^|states| events; use the randomized "
            "falsifier beyond 16 states");
    }

    TrustVerdict verdict;
    verdict.decisive = true;
    verdict.holds = true;
    Rat bestSlack = 0;

    const size_t varT = n;      // index of t'
    const size_t varS = n + 1;  // index of s'

    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        Rat piS = 0;
        for (size_t w = 0; w < n; ++w) {
            if (mask & (1u << w)) piS += f.pi.at(w);
        }
        if (piS == 0) continue;  // conditional expectation undefined

        LinearProgram lp;
        lp.c.assign(n + 2, Rat(0));
        lp.c[varS] = 1;

        auto addRow = [&](std::vector<Rat> row, Rat rhs) {
            lp.A.push_back(std::move(row));
            lp.b.push_back(std::move(rhs));
        };

        std::vector<Rat> violation(n + 2, Rat(0));
        for (size_t w = 0; w < n; ++w) {
            std::vector<Rat> row(n + 2, Rat(0));
            const Credence& p = f.agent[w];
            if (mask & (1u << w)) {
                for (size_t k = 0; k < n; ++k) row[k] = -p.at(k);
                row[varT] = 1;
                addRow(std::move(row), Rat(0));
                violation[w] += f.pi.at(w);
            } else {
                for (size_t k = 0; k < n; ++k) row[k] = p.at(k);
                row[varT] = -1;
                row[varS] = 1;
                addRow(std::move(row), Rat(4));
            }
        }
        violation[varT] = -piS;
        violation[varS] = 1;
        addRow(std::move(violation), Rat(4));

        for (size_t k = 0; k < n; ++k) {
            std::vector<Rat> row(n + 2, Rat(0));
            row[k] = 1;
            addRow(std::move(row), Rat(2));
        }
        std::vector<Rat> rowT(n + 2, Rat(0));
        rowT[varT] = 1;
        addRow(std::move(rowT), Rat(2));
        std::vector<Rat> rowS(n + 2, Rat(0));
        rowS[varS] = 1;
        addRow(std::move(rowS), Rat(8));

        const LpSolution sol = solveLp(lp);
        if (sol.status != LpStatus::Optimal) {
            throw std::logic_error("trust feasibility program must be bounded and feasible");
        }
        const Rat slack = sol.objective - 4;
        if (slack > bestSlack) {
            bestSlack = slack;
            std::vector<Rat> payoffs(n);
            for (size_t k = 0; k < n; ++k) payoffs[k] = sol.x[k] - 1;
            verdict.holds = false;
            verdict.witness = TrustWitness{OptionRV("witness", f.space, std::move(payoffs)),
                                           sol.x[varT] - 1, slack, maskToStates(mask)};
        }
    }
    return verdict;
}

bool verifyTrustWitness(const ProbabilityFrame& f, const OptionRV& x, const Rat& t) {
    std::vector<Rat> agentExp(f.space.size());
    for (size_t w = 0; w < f.space.size(); ++w) agentExp[w] = expectation(f.agent[w], x);
    Rat piS = 0;
    Rat shortfall = 0;
    for (size_t w = 0; w < f.space.size(); ++w) {
        if (agentExp[w] >= t) {
            piS += f.pi.at(w);
            shortfall += f.pi.at(w) * (x.at(w) - t);
        }
    }
    return piS > 0 && shortfall < 0;
}

namespace {

struct ScaledFrame {
    // Credences premultiplied by common denominators so the search loop is
    // pure integer arithmetic: agent[w][k] = P_w(k) * agentDen, pi[w] = pi(w) * piDen.
    std::vector<std::vector<int64_t>> agent;
    std::vector<int64_t> pi;
    BigInt agentDen;
};

// int64 is safe when payoffs stay small; the bound check is conservative.
std::optional<ScaledFrame> tryScaleFrame(const ProbabilityFrame& f, long payoffBound) {
    BigInt aDen = 1, pDen = 1;
    for (const Credence& c : f.agent) {
        for (const Rat& w : c.weights()) aDen = lcm(aDen, denominator(w));
    }
    for (const Rat& w : f.pi.weights()) pDen = lcm(pDen, denominator(w));

    const size_t n = f.space.size();
    const BigInt worst = pDen * aDen * payoffBound * 4 * BigInt(n);
    if (worst > BigInt(int64_t{1} << 62)) return std::nullopt;

    ScaledFrame s;
    s.agentDen = aDen;
    s.agent.resize(n);
    s.pi.resize(n);
    for (size_t w = 0; w < n; ++w) {
        s.pi[w] = static_cast<int64_t>(numerator(f.pi.at(w)) * (pDen / denominator(f.pi.at(w))));
        s.agent[w].resize(n);
        for (size_t k = 0; k < n; ++k) {
            const Rat& p = f.agent[w].at(k);
            s.agent[w][k] = static_cast<int64_t>(numerator(p) * (aDen / denominator(p)));
        }
    }
    return s;
}

}  // namespace

TrustVerdict falsifyTotalTrustRandomized(const ProbabilityFrame& f, long trials, uint64_t seed,
                                         long payoffBound) {
    if (trials < 1) throw std::invalid_argument("falsifier needs at least one trial");
    if (payoffBound < 1) throw std::invalid_argument("payoff bound must be positive");

    const size_t n = f.space.size();
    std::mt19937_64 rng(seed);
    const uint64_t span = static_cast<uint64_t>(2 * payoffBound + 1);

    const auto scaled = tryScaleFrame(f, payoffBound);

    std::vector<long> x(n);
    std::vector<int64_t> expFast(n);
    std::vector<Rat> expExact(n);

    for (long trial = 0; trial < trials; ++trial) {
        for (size_t k = 0; k < n; ++k) {
            x[k] = static_cast<long>(rng() % span) - payoffBound;
        }

        auto makeWitness = [&](const Rat& t) {
            std::vector<Rat> payoffs(n);
            for (size_t k = 0; k < n; ++k) payoffs[k] = x[k];
            OptionRV xv("witness", f.space, std::move(payoffs));
            Rat piS = 0, shortfall = 0;
            std::vector<size_t> event;
            for (size_t w = 0; w < n; ++w) {
                if (expectation(f.agent[w], xv) >= t) {
                    event.push_back(w);
                    piS += f.pi.at(w);
                    shortfall += f.pi.at(w) * (xv.at(w) - t);
                }
            }
            TrustVerdict v;
            v.holds = false;
            v.decisive = true;  // the violation itself is exact
            v.witness = TrustWitness{std::move(xv), t, -shortfall, std::move(event)};
            return v;
        };

        if (scaled) {
            for (size_t w = 0; w < n; ++w) {
                int64_t acc = 0;
                for (size_t k = 0; k < n; ++k) acc += scaled->agent[w][k] * x[k];
                expFast[w] = acc;
            }
            for (size_t cand = 0; cand < n; ++cand) {
                const int64_t t = expFast[cand];
                int64_t piS = 0, shortfall = 0;
                for (size_t w = 0; w < n; ++w) {
                    if (expFast[w] >= t) {
                        piS += scaled->pi[w];
                        const int64_t denScaled =
                            static_cast<int64_t>(x[w] * scaled->agentDen.convert_to<int64_t>());
                        shortfall += scaled->pi[w] * (denScaled - t);
                    }
                }
                if (piS > 0 && shortfall < 0) {
                    return makeWitness(Rat(BigInt(t), scaled->agentDen));
                }
            }
        } else {
            for (size_t w = 0; w < n; ++w) {
                Rat acc = 0;
                for (size_t k = 0; k < n; ++k) acc += f.agent[w].at(k) * x[k];
                expExact[w] = std::move(acc);
            }
            for (size_t cand = 0; cand < n; ++cand) {
                const Rat& t = expExact[cand];
                Rat piS = 0, shortfall = 0;
                for (size_t w = 0; w < n; ++w) {
                    if (expExact[w] >= t) {
                        piS += f.pi.at(w);
                        shortfall += f.pi.at(w) * (Rat(x[w]) - t);
                    }
                }
                if (piS > 0 && shortfall < 0) return makeWitness(t);
            }
        }
    }

    TrustVerdict v;
    v.holds = true;
    v.decisive = false;
    return v;
}

// --- valuing ------------------------------------------------------------------

ValuingVerdict checkValuingOverFamily(const ProbabilityFrame& f,
                                      const std::vector<DecisionProblemRV>& family) {
    if (family.empty()) throw std::invalid_argument("valuing needs a non-empty family");
    ValuingVerdict verdict;
    verdict.holds = true;
    bool first = true;
    for (size_t p = 0; p < family.size(); ++p) {
        const ExpertStrategy s = expertStrategy(f, family[p]);
        const Rat dv = delegationValue(f, s);
        for (const OptionRV& o : family[p].options()) {
            const Rat margin = dv - expectation(f.pi, o);
            if (first || margin < verdict.minMargin) {
                verdict.minMargin = margin;
                first = false;
            }
            if (margin < 0 && verdict.holds) {
                verdict.holds = false;
                verdict.witness = ValuingWitness{p, o.label, -margin};
            }
        }
    }
    return verdict;
}

Rat delegationValueGeneralized(const GeneralizedFrame& g, const std::vector<Act>& problem) {
    Rat total = 0;
    for (size_t w = 0; w < g.space.size(); ++w) {
        if (g.pi.at(w) == 0) continue;
        const Act& pick = agentChoice(g, w, problem);
        total += g.pi.at(w) * g.utility.at(pick.at(w));
    }
    return total;
}

ValuingVerdict checkValuingOverFamily(const GeneralizedFrame& g,
                                      const std::vector<std::vector<Act>>& family) {
    if (family.empty()) throw std::invalid_argument("valuing needs a non-empty family");
    ValuingVerdict verdict;
    verdict.holds = true;
    bool first = true;
    for (size_t p = 0; p < family.size(); ++p) {
        if (family[p].empty()) throw std::invalid_argument("valuing problem must be non-empty");
        const Rat dv = delegationValueGeneralized(g, family[p]);
        for (const Act& a : family[p]) {
            const Rat margin = dv - expectation(g.pi, inducedOption(g, a, g.utility));
            if (first || margin < verdict.minMargin) {
                verdict.minMargin = margin;
                first = false;
            }
            if (margin < 0 && verdict.holds) {
                verdict.holds = false;
                verdict.witness = ValuingWitness{p, a.label, -margin};
            }
        }
    }
    return verdict;
}

// --- posterior alignment --------------------------------------------------------

AlignmentVerdict checkPosteriorAlignment(const GeneralizedFrame& g, bool singletonEventsOnly) {
    const ClarityReport clarity = checkClarity(g);
    if (!clarity.clear) {
        throw std::invalid_argument("posterior alignment requires a clear frame");
    }
    const size_t n = g.space.size();
    if (n > 12 && !singletonEventsOnly) {
        throw std::invalid_argument(
            "full event enumeration is limited to 12 states; restrict to singleton events");
    }

    AlignmentVerdict verdict;
    const auto partition = cells(g);

    for (const auto& cell : partition) {
        const Rat cellMass = g.pi.mass(cell);
        if (cellMass == 0) {
            verdict.skippedCells.push_back(cell);
            continue;
        }
        const size_t rep = cell.front();

        // (i) conditional act preferences. Comparing pi-weighted numerators is
        // exact; the common cell mass cancels.
        if (!verdict.cellWitness) {
            std::vector<Rat> principalNum(g.acts.size(), Rat(0));
            std::vector<Rat> agentVal(g.acts.size());
            for (size_t k = 0; k < g.acts.size(); ++k) {
                for (size_t w : cell) principalNum[k] += g.pi.at(w) * g.utility.at(g.acts[k].at(w));
                agentVal[k] = agentActValue(g, rep, g.acts[k]);
            }
            for (size_t i = 0; i < g.acts.size() && !verdict.cellWitness; ++i) {
                for (size_t j = 0; j < g.acts.size(); ++j) {
                    if (i == j) continue;
                    if (principalNum[i] > principalNum[j] && !(agentVal[i] > agentVal[j])) {
                        verdict.cellWitness =
                            CellWitness{cell,
                                        g.acts[i],
                                        g.acts[j],
                                        principalNum[i] / cellMass,
                                        principalNum[j] / cellMass,
                                        agentVal[i],
                                        agentVal[j]};
                        break;
                    }
                }
            }
        }

        // (ii) comparative credence over events. Clarity makes both sides
        // depend only on the event's intersection with the cell, so events
        // are enumerated inside the cell.
        if (!verdict.eventWitness) {
            const size_t cn = cell.size();
            struct CellEvent {
                std::vector<size_t> states;
                Rat pMass;
                Rat piNum;
            };
            std::vector<CellEvent> events;
            if (singletonEventsOnly || cn > 12) {
                events.push_back({{}, Rat(0), Rat(0)});
                for (size_t w : cell) {
                    events.push_back({{w}, g.agentBeliefs[rep].at(w), g.pi.at(w)});
                }
            } else {
                events.resize(size_t{1} << cn, {{}, Rat(0), Rat(0)});
                for (uint32_t m = 1; m < (1u << cn); ++m) {
                    const uint32_t low = m & (~m + 1);
                    const size_t idx = static_cast<size_t>(__builtin_ctz(m));
                    events[m].pMass = events[m ^ low].pMass + g.agentBeliefs[rep].at(cell[idx]);
                    events[m].piNum = events[m ^ low].piNum + g.pi.at(cell[idx]);
                    events[m].states = events[m ^ low].states;
                    events[m].states.push_back(cell[idx]);
                }
            }
            for (const CellEvent& ex : events) {
                if (verdict.eventWitness) break;
                for (const CellEvent& ey : events) {
                    if (ex.pMass > ey.pMass && ex.piNum < ey.piNum) {
                        verdict.eventWitness =
                            EventWitness{cell,     ex.states, ey.states,
                                         ex.pMass, ey.pMass,  ex.piNum / cellMass,
                                         ey.piNum / cellMass};
                        break;
                    }
                }
            }
        }
    }
    verdict.holds = !verdict.cellWitness && !verdict.eventWitness;
    return verdict;
}

// --- counterexample construction -------------------------------------------------

Act spliceActs(const Act& a, const std::vector<size_t>& onStates, const Act& fallback,
               std::string label) {
    if (a.space != fallback.space) throw std::domain_error("splice needs a shared state space");
    std::vector<std::string> outcomes = fallback.outcomes;
    for (size_t w : onStates) outcomes.at(w) = a.at(w);
    if (label.empty()) label = a.label + "^" + fallback.label;
    return Act(std::move(label), a.space, std::move(outcomes));
}

namespace {

const Act& pickBaseline(const GeneralizedFrame& g) {
    for (const Act& a : g.acts) {
        if (a.isConstant() && g.utility.at(a.outcomes.front()) == 0) return a;
    }
    for (const Act& a : g.acts) {
        if (a.isConstant()) return a;
    }
    return g.acts.front();
}

// Reuses an act with the same outcome vector when one exists, otherwise
// appends the splice under a fresh label.
const Act& internAct(std::vector<Act>& acts, Act candidate) {
    for (const Act& a : acts) {
        if (a.sameOutcomes(candidate)) return a;
    }
    candidate.label = uniqueLabel(candidate.label, acts);
    acts.push_back(std::move(candidate));
    return acts.back();
}

}  // namespace

CounterexampleProblem constructValuingCounterexample(const GeneralizedFrame& g,
                                                     const CellWitness& w) {
    if (g.acts.empty()) throw std::invalid_argument("counterexample needs a baseline act");
    const Act baseline = pickBaseline(g);

    std::vector<Act> acts = g.acts;
    const Act aStar = internAct(acts, spliceActs(w.a, w.cell, baseline));
    const Act bStar = internAct(acts, spliceActs(w.b, w.cell, baseline));
    GeneralizedFrame extended = g.withActs(std::move(acts));

    // b* leads so an indifferent agent still settles on it; the witness only
    // guarantees a weak agent preference for b.
    std::vector<Act> problem{bStar, aStar};
    const Rat preferredValue = expectation(extended.pi, inducedOption(extended, aStar,
                                                                      extended.utility));
    const Rat margin = preferredValue - delegationValueGeneralized(extended, problem);
    const Rat expected = (w.principalA - w.principalB) * extended.pi.mass(w.cell);
    if (margin != expected) {
        throw std::logic_error("counterexample margin disagrees with the cell witness");
    }
    return CounterexampleProblem{std::move(extended), std::move(problem), aStar, margin};
}

// --- richness and constant acts ----------------------------------------------------

RichnessReport checkRichnessClosure(const std::vector<Act>& acts,
                                    const std::vector<std::vector<size_t>>& events) {
    RichnessReport report;
    std::set<std::vector<std::string>> present, reported;
    for (const Act& a : acts) present.insert(a.outcomes);
    for (const Act& a : acts) {
        for (const Act& b : acts) {
            for (const auto& event : events) {
                Act splice = spliceActs(a, event, b);
                if (!present.count(splice.outcomes) && reported.insert(splice.outcomes).second) {
                    report.closed = false;
                    report.missing.push_back(std::move(splice));
                }
            }
        }
    }
    return report;
}

std::vector<Act> richnessClose(std::vector<Act> acts,
                               const std::vector<std::vector<size_t>>& events, size_t cap) {
    std::set<std::vector<std::string>> present;
    for (const Act& a : acts) present.insert(a.outcomes);
    bool grew = true;
    while (grew) {
        grew = false;
        const size_t frozen = acts.size();
        for (size_t i = 0; i < frozen; ++i) {
            for (size_t j = 0; j < frozen; ++j) {
                for (const auto& event : events) {
                    Act splice = spliceActs(acts[i], event, acts[j]);
                    if (present.count(splice.outcomes)) continue;
                    if (acts.size() + 1 > cap) {
                        throw std::runtime_error("richness closure exceeded cap of " +
                                                 std::to_string(cap) + " acts");
                    }
                    splice.label = uniqueLabel(splice.label, acts);
                    present.insert(splice.outcomes);
                    acts.push_back(std::move(splice));
                    grew = true;
                }
            }
        }
    }
    return acts;
}

bool checkConstantActs(const GeneralizedFrame& g) {
    bool any = false;
    Rat lo = 0, hi = 0;
    for (const Act& a : g.acts) {
        if (!a.isConstant()) continue;
        const Rat& u = g.utility.at(a.outcomes.front());
        if (!any) {
            lo = hi = u;
            any = true;
        } else {
            lo = std::min(lo, u);
            hi = std::max(hi, u);
        }
    }
    return any && hi > lo;
}

}  // namespace deleg
