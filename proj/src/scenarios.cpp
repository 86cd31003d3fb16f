#include "deleg/scenarios.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace deleg {

std::string toString(AgentUtilityKind k) {
    switch (k) {
        case AgentUtilityKind::Identity: return "identity";
        case AgentUtilityKind::AdditiveShift: return "additive-shift";
        default: return "signed-sqrt";
    }
}

AgentUtilityKind agentUtilityFromString(const std::string& s) {
    if (s == "identity") return AgentUtilityKind::Identity;
    if (s == "additive-shift") return AgentUtilityKind::AdditiveShift;
    if (s == "signed-sqrt") return AgentUtilityKind::SignedSqrt;
    throw std::invalid_argument("unknown agent utility: " + s);
}

Rat signedSqrt(const Rat& x) {
    if (x == 0) return 0;
    const BigInt p = abs(numerator(x));
    const BigInt q = denominator(x);
    const BigInt sp = sqrt(p);
    const BigInt sq = sqrt(q);
    if (sp * sp != p || sq * sq != q) {
        throw std::invalid_argument("signed-sqrt utility needs perfect-square payoffs, got " +
                                    toString(x));
    }
    const Rat root(sp, sq);
    return x < 0 ? -root : root;
}

namespace {

std::vector<std::vector<size_t>> kSubsets(size_t n, size_t k) {
    std::vector<std::vector<size_t>> out;
    std::vector<size_t> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    if (k == 0) {
        out.push_back({});
        return out;
    }
    if (k > n) throw std::invalid_argument("subset size exceeds set size");
    while (true) {
        out.push_back(pick);
        size_t i = k;
        while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    return out;
}

Rat agentBaseUtility(AgentUtilityKind kind, const Rat& x) {
    return kind == AgentUtilityKind::SignedSqrt ? signedSqrt(x) : x;
}

CompiledPeekScenario compilePeek(const PeekAgentSpec& spec) {
    const size_t n = spec.outcomes.size();
    if (n == 0) throw std::invalid_argument("peek scenario needs outcomes");
    if (std::set<Rat>(spec.outcomes.begin(), spec.outcomes.end()).size() != n) {
        throw std::invalid_argument("peek scenario outcomes must be distinct");
    }
    if (spec.peekCount < 0 || static_cast<size_t>(spec.peekCount) >= n) {
        throw std::invalid_argument("peek count must be smaller than the outcome count");
    }
    std::vector<NoiseState> noise = spec.noiseStates;
    if (noise.empty()) noise.push_back({"", Rat(0), Rat(1)});
    Rat noiseTotal = 0;
    for (const NoiseState& s : noise) {
        if (s.weight <= 0) throw std::invalid_argument("noise weights must be positive");
        noiseTotal += s.weight;
    }
    if (noiseTotal != 1) throw std::invalid_argument("noise weights must sum to 1");

    Rat outcomeMean = 0;
    for (const Rat& x : spec.outcomes) outcomeMean += x;
    outcomeMean /= Rat(n);
    const bool principalOpens = outcomeMean >= 0;

    std::vector<std::string> labels;
    std::vector<Rat> weights;
    std::vector<Rat> basePayoffs;
    std::vector<PeekStateMeta> meta;

    for (size_t wi = 0; wi < n; ++wi) {
        std::vector<size_t> others;
        for (size_t j = 0; j < n; ++j) {
            if (j != wi) others.push_back(j);
        }
        const auto peeks = kSubsets(others.size(), static_cast<size_t>(spec.peekCount));
        for (const auto& pick : peeks) {
            std::vector<Rat> peeked;
            std::set<size_t> peekedIdx;
            for (size_t p : pick) {
                peeked.push_back(spec.outcomes[others[p]]);
                peekedIdx.insert(others[p]);
            }
            std::vector<Rat> belief;
            for (size_t j = 0; j < n; ++j) {
                if (!peekedIdx.count(j)) belief.push_back(spec.outcomes[j]);
            }
            std::sort(belief.begin(), belief.end());

            for (const NoiseState& ns : noise) {
                std::string label = toString(spec.outcomes[wi]);
                if (!peeked.empty()) {
                    label += "|peek:";
                    for (size_t i = 0; i < peeked.size(); ++i) {
                        if (i) label += ",";
                        label += toString(peeked[i]);
                    }
                }
                if (!ns.tag.empty()) label += "|" + ns.tag;

                Rat eu = 0;
                for (const Rat& x : belief) eu += agentBaseUtility(spec.agentUtility, x) + ns.shift;
                eu /= Rat(belief.size());
                const bool opens = eu > 0 || (eu == 0 && spec.acceptOnTie);

                labels.push_back(label);
                weights.push_back(Rat(1, n) * Rat(1, peeks.size()) * ns.weight);
                basePayoffs.push_back(spec.outcomes[wi]);
                meta.push_back({label, spec.outcomes[wi], peeked, ns.tag, belief, eu, opens,
                                principalOpens});
            }
        }
    }

    const StateSpace space(labels);
    CompiledPeekScenario out{space, Credence(space, weights), {}, {}, {}, {}, std::move(meta)};

    Gamble selfBox("box", space, basePayoffs);
    out.muSelf = GambleDistribution(space, {{selfBox, Rat(1)}});
    if (spec.fee == 0) {
        out.muDelegate = out.muSelf;
    } else {
        std::vector<Rat> netted = basePayoffs;
        for (Rat& v : netted) v -= spec.fee;
        out.muDelegate =
            GambleDistribution(space, {{Gamble("box", space, basePayoffs, netted), Rat(1)}});
    }

    std::vector<char> principalRow(space.size(), principalOpens ? 1 : 0);
    std::vector<char> agentRow(space.size(), 0);
    for (size_t s = 0; s < space.size(); ++s) agentRow[s] = out.meta[s].agentOpens ? 1 : 0;
    out.principal.setRow("box", std::move(principalRow));
    out.agent.setRow("box", std::move(agentRow));
    return out;
}

}  // namespace

CompiledPeekScenario buildNoisyExpert(const PeekAgentSpec& spec) { return compilePeek(spec); }

CompiledPeekScenario buildMisalignedExpert(const PeekAgentSpec& spec) {
    if (spec.agentUtility != AgentUtilityKind::SignedSqrt) {
        throw std::invalid_argument("misaligned-expert scenarios use the signed-sqrt utility");
    }
    return compilePeek(spec);
}

CompiledReachScenario buildReachScenario(const ReachScenarioSpec& spec) {
    if (spec.boxes.empty()) throw std::invalid_argument("reach scenario needs boxes");
    size_t slots = 1;
    size_t bothCount = 0;
    std::set<std::string> seen;
    for (const ReachBox& b : spec.boxes) {
        if (b.outcomes.empty()) throw std::invalid_argument("box outcome list must be non-empty");
        if (!seen.insert(b.label).second) {
            throw std::invalid_argument("duplicate box label: " + b.label);
        }
        slots = std::lcm(slots, b.outcomes.size());
        if (b.availability == BoxAvailability::Both) ++bothCount;
    }
    if (bothCount == 0) {
        throw std::invalid_argument("at least one box must be available to both parties");
    }

    std::vector<std::string> labels;
    labels.reserve(slots);
    for (size_t j = 0; j < slots; ++j) labels.push_back("s" + std::to_string(j + 1));
    const StateSpace space(labels);
    const Credence pi = Credence::uniform(space);

    std::vector<std::pair<Gamble, Rat>> selfSupport, delegateSupport;
    DecisionStrategy principal, agent;
    std::vector<ReachBoxMeta> meta;

    for (const ReachBox& b : spec.boxes) {
        const size_t len = b.outcomes.size();
        std::vector<Rat> payoffs(slots);
        for (size_t j = 0; j < slots; ++j) payoffs[j] = b.outcomes[j * len / slots];

        Rat ev = 0;
        for (const Rat& x : b.outcomes) ev += x;
        ev /= Rat(len);
        const bool opens = ev > 0 || (ev == 0 && spec.openOnTie);

        Rat lossAcc = 0, gainAcc = 0;
        for (const Rat& x : b.outcomes) {
            if (opens && x < 0) lossAcc += -x;
            if (!opens && x >= 0) lossAcc += x;
            if (opens && x >= 0) gainAcc += x;
        }
        lossAcc /= Rat(len);
        gainAcc /= Rat(len);
        meta.push_back({b.label, b.outcomes, ev, opens,
                        b.availability == BoxAvailability::DelegateOnly, lossAcc, gainAcc});

        Gamble gamble(b.label, space, payoffs);
        delegateSupport.push_back({gamble, Rat(1, spec.boxes.size())});
        agent.setRow(b.label, std::vector<char>(slots, opens ? 1 : 0));
        if (b.availability == BoxAvailability::Both) {
            selfSupport.push_back({gamble, Rat(1, bothCount)});
            principal.setRow(b.label, std::vector<char>(slots, opens ? 1 : 0));
        }
    }

    return CompiledReachScenario{space,
                                 pi,
                                 GambleDistribution(space, std::move(selfSupport)),
                                 GambleDistribution(space, std::move(delegateSupport)),
                                 std::move(principal),
                                 std::move(agent),
                                 std::move(meta)};
}

PeekAgentSpec noisyExpertSpec() {
    PeekAgentSpec spec;
    spec.outcomes = {Rat(-5), Rat(3), Rat(8)};
    spec.peekCount = 1;
    spec.noiseStates = {{"n1", Rat(4), Rat(1, 2)}, {"n2", Rat(-3), Rat(1, 2)}};
    spec.agentUtility = AgentUtilityKind::AdditiveShift;
    spec.fee = 0;
    spec.acceptOnTie = true;
    return spec;
}

PeekAgentSpec misalignedExpertSpec() {
    PeekAgentSpec spec;
    spec.outcomes = {Rat(-400), Rat(25), Rat(100), Rat(225)};
    spec.peekCount = 1;
    spec.noiseStates = {{"", Rat(0), Rat(1)}};
    spec.agentUtility = AgentUtilityKind::SignedSqrt;
    spec.fee = 50;
    spec.acceptOnTie = false;  // expected utility 0 stays closed
    return spec;
}

ReachScenarioSpec reachSpec() {
    ReachScenarioSpec spec;
    spec.boxes = {
        {"A1", {Rat(-6), Rat(3), Rat(9)}, BoxAvailability::Both},
        {"A2", {Rat(-8), Rat(-4), Rat(12)}, BoxAvailability::Both},
        {"A3", {Rat(-10), Rat(2), Rat(3)}, BoxAvailability::Both},
        {"A4", {Rat(1), Rat(2), Rat(3), Rat(4)}, BoxAvailability::DelegateOnly},
        {"A5", {Rat(5), Rat(5), Rat(5)}, BoxAvailability::DelegateOnly},
    };
    spec.openOnTie = true;
    return spec;
}

ScenarioResult scorePeekScenario(const std::string& name, const CompiledPeekScenario& compiled,
                                 ScoreConvention conv) {
    const ReachVerdict v = delegationCriterionReach(compiled.pi, compiled.muSelf,
                                                    compiled.muDelegate, compiled.principal,
                                                    compiled.agent, conv);
    ScenarioResult result{name, conv,     v.principal, v.agent, v.delegate_,
                          v.margin, compiled.meta, {},      {}};
    return result;
}

namespace {

// The misaligned-expert reference accounting scores the non-delegating
// principal over the four raw outcomes, crediting the avoided -400 at
// magnitude 100 rather than the uniform-convention 400. Reproduction targets
// that accounting; the difference is flagged on the result.
ScoreReport misalignedPrincipalReference(const PeekAgentSpec& spec) {
    ScoreReport report{Rat(0), Rat(0), Rat(0), ScoreConvention::Credit, {}};
    const Rat weight(1, spec.outcomes.size());
    for (size_t i = 0; i < spec.outcomes.size(); ++i) {
        const Rat& x = spec.outcomes[i];
        TraceRow row;
        row.state = i;
        row.stateLabel = toString(x);
        row.gamble = "box";
        row.accepted = false;
        row.value = 0;
        row.weight = weight;
        if (x >= 0) {
            row.cls = TraceClass::Loss;
            row.magnitude = x;
        } else {
            row.cls = TraceClass::Neutral;
            row.magnitude = -x / Rat(spec.outcomes.size());
        }
        report.trace.push_back(std::move(row));
    }
    for (const TraceRow& row : report.trace) {
        if (row.cls == TraceClass::Loss) report.loss += row.weight * row.magnitude;
    }
    report.gain = report.creditGain();
    report.score = report.loss - report.gain;
    return report;
}

}  // namespace

ScenarioResult runScenario(const std::string& name) {
    if (name == "noisy-expert") {
        ScenarioResult result = scorePeekScenario(name, buildNoisyExpert(noisyExpertSpec()),
                                                  ScoreConvention::Credit);
        result.discrepancies = {
            {"agent.gain", Rat(32, 12), result.agentReport.gain,
             "reference aggregate omits one +3 and one +8 gain row; row totals are authoritative"},
            {"agent.score", Rat(-11, 12), result.agentReport.score,
             "follows from the gain aggregate; row totals are authoritative"},
        };
        return result;
    }
    if (name == "misaligned-expert") {
        const PeekAgentSpec spec = misalignedExpertSpec();
        const CompiledPeekScenario compiled = buildMisalignedExpert(spec);
        const ScoreReport agentReport =
            score(compiled.pi, compiled.muDelegate, compiled.agent, ScoreConvention::Credit);
        const ScoreReport principalReport = misalignedPrincipalReference(spec);
        const ScoreReport uniformPrincipal =
            score(compiled.pi, compiled.muSelf, compiled.principal, ScoreConvention::Credit);
        ScenarioResult result{name,
                              ScoreConvention::Credit,
                              principalReport,
                              agentReport,
                              agentReport.score <= principalReport.score,
                              principalReport.score - agentReport.score,
                              compiled.meta,
                              {},
                              {}};
        result.discrepancies = {
            {"principal.score", Rat(-150, 12), principalReport.score,
             "summary value disagrees with the reference accounting; the accounting is "
             "authoritative"},
            {"agent.score", Rat(-700, 12), agentReport.score,
             "summary value disagrees with the row table; the table is authoritative"},
            {"principal.gain", uniformPrincipal.gain, principalReport.gain,
             "the reference accounting credits the avoided -400 at magnitude 100; the uniform "
             "credit convention would credit 400"},
        };
        return result;
    }
    if (name == "reach") {
        const CompiledReachScenario compiled = buildReachScenario(reachSpec());
        const ReachVerdict v =
            delegationCriterionReach(compiled.pi, compiled.muSelf, compiled.muDelegate,
                                     compiled.principal, compiled.agent, ScoreConvention::Strict);
        return ScenarioResult{name,     ScoreConvention::Strict, v.principal, v.agent,
                              v.delegate_, v.margin, {}, compiled.meta, {}};
    }
    throw std::invalid_argument("unknown scenario: " + name +
                                " (expected noisy-expert, misaligned-expert or reach)");
}

namespace {

void appendPeekArms(BanditConfig& cfg, const PeekAgentSpec& spec,
                    const CompiledPeekScenario& compiled) {
    ArmSpec self{"self", ArmKind::Self, {}};
    const size_t n = spec.outcomes.size();
    Rat mean = 0;
    for (const Rat& x : spec.outcomes) mean += x;
    const bool principalOpens = mean >= 0;
    for (const Rat& x : spec.outcomes) {
        self.support.push_back({toString(x), Rat(1, n), principalOpens ? x : Rat(0)});
    }

    ArmSpec delegate{"delegate", ArmKind::Delegate, {}};
    for (size_t s = 0; s < compiled.space.size(); ++s) {
        const PeekStateMeta& m = compiled.meta[s];
        Rat reward = 0;
        if (m.agentOpens) reward = m.trueOutcome - spec.fee;
        delegate.support.push_back({m.stateLabel, compiled.pi.at(s), reward});
    }
    cfg.arms = {std::move(self), std::move(delegate)};

    Rat outcomeSum = 0;
    for (const Rat& x : spec.outcomes) outcomeSum += x;
    cfg.outcomeSum = outcomeSum;
}

}  // namespace

BanditConfig banditConfigForScenario(const std::string& name, long horizon, uint64_t seed,
                                     ExplorationForm exploration,
                                     const std::optional<std::vector<Rat>>& noiseShifts) {
    BanditConfig cfg;
    cfg.horizon = horizon;
    cfg.seed = seed;
    cfg.exploration = exploration;

    auto overrideNoise = [&](PeekAgentSpec spec) {
        if (noiseShifts) {
            spec.noiseStates.clear();
            for (size_t i = 0; i < noiseShifts->size(); ++i) {
                spec.noiseStates.push_back({"n" + std::to_string(i + 1), (*noiseShifts)[i],
                                            Rat(1, noiseShifts->size())});
            }
        }
        return spec;
    };

    if (name == "noisy-expert") {
        const PeekAgentSpec spec = overrideNoise(noisyExpertSpec());
        appendPeekArms(cfg, spec, buildNoisyExpert(spec));
        return cfg;
    }
    if (name == "misaligned-expert") {
        const PeekAgentSpec spec = overrideNoise(misalignedExpertSpec());
        appendPeekArms(cfg, spec, buildMisalignedExpert(spec));
        return cfg;
    }
    if (name == "reach") {
        if (noiseShifts) {
            throw std::invalid_argument("the reach scenario has no noise parameter");
        }
        const CompiledReachScenario compiled = buildReachScenario(reachSpec());
        ArmSpec self{"self", ArmKind::Self, {}};
        ArmSpec delegate{"delegate", ArmKind::Delegate, {}};
        size_t bothCount = 0;
        for (const ReachBoxMeta& m : compiled.meta) {
            if (!m.delegateOnly) ++bothCount;
        }
        for (const ReachBoxMeta& m : compiled.meta) {
            // Group equal outcomes inside a box so the support stays compact.
            std::map<Rat, size_t> counts;
            for (const Rat& x : m.outcomes) counts[x] += 1;
            for (const auto& [value, count] : counts) {
                const Rat withinBox(count, m.outcomes.size());
                const Rat reward = m.opens ? value : Rat(0);
                const std::string label = m.label + ":" + toString(value);
                delegate.support.push_back(
                    {label, withinBox * Rat(1, compiled.meta.size()), reward});
                if (!m.delegateOnly) {
                    self.support.push_back({label, withinBox * Rat(1, bothCount), reward});
                }
            }
        }
        cfg.arms = {std::move(self), std::move(delegate)};
        return cfg;
    }
    throw std::invalid_argument("unknown scenario: " + name);
}

}  // namespace deleg
