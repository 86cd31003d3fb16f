#include "deleg/report.hpp"

#include <iomanip>
#include <sstream>

namespace deleg::report {

std::string digest(const std::string& bytes) {
    uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << std::setfill('0') << std::setw(16) << hash;
    return out.str();
}

ordered_json ratJson(const Rat& r, int digits) {
    ordered_json j;
    j["exact"] = toString(r);
    j["decimal"] = toDecimalString(r, digits);
    return j;
}

namespace {

std::string stateListText(const std::vector<size_t>& states, const StateSpace& space) {
    std::string out = "{";
    for (size_t i = 0; i < states.size(); ++i) {
        if (i) out += ", ";
        out += space.label(states[i]);
    }
    return out + "}";
}

ordered_json stateListJson(const std::vector<size_t>& states, const StateSpace& space) {
    ordered_json out = ordered_json::array();
    for (size_t s : states) out.push_back(space.label(s));
    return out;
}

}  // namespace

ordered_json scoreReportJson(const ScoreReport& r, bool includeTrace) {
    ordered_json j;
    j["convention"] = toString(r.convention);
    j["loss"] = ratJson(r.loss);
    j["gain"] = ratJson(r.gain);
    j["score"] = ratJson(r.score);
    if (includeTrace) {
        ordered_json trace = ordered_json::array();
        for (const TraceRow& row : r.trace) {
            ordered_json rj;
            rj["state"] = row.stateLabel;
            rj["gamble"] = row.gamble;
            rj["action"] = row.accepted ? "accept" : "reject";
            rj["class"] = toString(row.cls);
            rj["magnitude"] = toString(row.magnitude);
            rj["value"] = toString(row.value);
            rj["weight"] = toString(row.weight);
            trace.push_back(rj);
        }
        j["trace"] = trace;
    }
    return j;
}

ordered_json trustVerdictJson(const TrustVerdict& v, const StateSpace& space) {
    ordered_json j;
    j["holds"] = v.holds;
    j["decisive"] = v.decisive;
    if (v.witness) {
        ordered_json w;
        ordered_json payoffs = ordered_json::object();
        for (size_t i = 0; i < space.size(); ++i) {
            payoffs[space.label(i)] = toString(v.witness->x.at(i));
        }
        w["payoffs"] = payoffs;
        w["threshold"] = toString(v.witness->threshold);
        w["slack"] = toString(v.witness->slack);
        w["event"] = stateListJson(v.witness->event, space);
        j["witness"] = w;
    }
    return j;
}

ordered_json valuingVerdictJson(const ValuingVerdict& v,
                                const std::vector<std::string>& problemNames) {
    ordered_json j;
    j["holds"] = v.holds;
    j["min_margin"] = ratJson(v.minMargin, 4);
    if (v.witness) {
        ordered_json w;
        w["problem"] = v.witness->problemIndex < problemNames.size()
                           ? problemNames[v.witness->problemIndex]
                           : "problem-" + std::to_string(v.witness->problemIndex);
        w["losing_to"] = v.witness->option;
        w["margin"] = ratJson(v.witness->margin, 4);
        j["witness"] = w;
    }
    return j;
}

ordered_json alignmentVerdictJson(const AlignmentVerdict& v, const StateSpace& space) {
    ordered_json j;
    j["holds"] = v.holds;
    if (v.cellWitness) {
        const CellWitness& w = *v.cellWitness;
        ordered_json cw;
        cw["cell"] = stateListJson(w.cell, space);
        cw["preferred_act"] = w.a.label;
        cw["dispreferred_act"] = w.b.label;
        cw["principal_conditional_values"] =
            ordered_json{{"preferred", toString(w.principalA)},
                         {"dispreferred", toString(w.principalB)}};
        cw["agent_values"] = ordered_json{{"preferred", toString(w.agentA)},
                                          {"dispreferred", toString(w.agentB)}};
        j["cell_witness"] = cw;
    }
    if (v.eventWitness) {
        const EventWitness& w = *v.eventWitness;
        ordered_json ew;
        ew["cell"] = stateListJson(w.cell, space);
        ew["event_x"] = stateListJson(w.eventX, space);
        ew["event_y"] = stateListJson(w.eventY, space);
        ew["agent"] = ordered_json{{"x", toString(w.agentX)}, {"y", toString(w.agentY)}};
        ew["principal_conditional"] =
            ordered_json{{"x", toString(w.principalX)}, {"y", toString(w.principalY)}};
        j["event_witness"] = ew;
    }
    if (!v.skippedCells.empty()) {
        ordered_json skipped = ordered_json::array();
        for (const auto& cell : v.skippedCells) skipped.push_back(stateListJson(cell, space));
        j["skipped_null_cells"] = skipped;
    }
    return j;
}

ordered_json scenarioResultJson(const ScenarioResult& r) {
    ordered_json j;
    j["scenario"] = r.name;
    j["convention"] = toString(r.convention);
    j["principal"] = scoreReportJson(r.principalReport, false);
    j["agent"] = scoreReportJson(r.agentReport, false);
    j["verdict"] = r.delegateVerdict ? "delegate" : "do-not-delegate";
    j["margin"] = ratJson(r.margin, 4);
    if (!r.peekTable.empty()) {
        ordered_json table = ordered_json::array();
        // Trace rows align with the composite states in order.
        for (size_t i = 0; i < r.peekTable.size(); ++i) {
            const PeekStateMeta& m = r.peekTable[i];
            const TraceRow& agentRow = r.agentReport.trace.at(i);
            ordered_json row;
            row["true_outcome"] = toString(m.trueOutcome);
            ordered_json peeked = ordered_json::array();
            for (const Rat& p : m.peeked) peeked.push_back(toString(p));
            row["peeked"] = peeked;
            if (!m.noiseTag.empty()) row["noise"] = m.noiseTag;
            ordered_json belief = ordered_json::array();
            for (const Rat& b : m.belief) belief.push_back(toString(b));
            row["belief"] = belief;
            row["agent_eu"] = toString(m.agentEu);
            row["action"] = m.agentOpens ? "open" : "not-open";
            row["outcome_value"] = toString(agentRow.value);
            row["outcome_class"] = toString(agentRow.cls);
            row["outcome_magnitude"] = toString(agentRow.magnitude);
            table.push_back(row);
        }
        j["agent_table"] = table;
    }
    if (!r.reachTable.empty()) {
        ordered_json table = ordered_json::array();
        for (const ReachBoxMeta& m : r.reachTable) {
            ordered_json row;
            row["box"] = m.label;
            ordered_json outcomes = ordered_json::array();
            for (const Rat& o : m.outcomes) outcomes.push_back(toString(o));
            row["outcomes"] = outcomes;
            row["expected_value"] = ratJson(m.expectedValue);
            row["decision"] = m.opens ? "open" : "not-open";
            row["available_to"] = m.delegateOnly ? "delegate-only" : "both";
            row["loss"] = ratJson(m.loss);
            row["gain"] = ratJson(m.strictGain);
            table.push_back(row);
        }
        j["box_table"] = table;
    }
    if (!r.discrepancies.empty()) {
        ordered_json list = ordered_json::array();
        for (const Discrepancy& d : r.discrepancies) {
            ordered_json dj;
            dj["field"] = d.field;
            dj["stated"] = toString(d.stated);
            dj["derived"] = toString(d.derived);
            dj["note"] = d.note;
            list.push_back(dj);
        }
        j["flagged_discrepancies"] = list;
    }
    return j;
}

ordered_json banditResultJson(const BanditResult& r, bool includeLog) {
    ordered_json j;
    ordered_json counts = ordered_json::array();
    for (long c : r.counts) counts.push_back(c);
    j["counts"] = counts;
    ordered_json means = ordered_json::array();
    for (double m : r.means) means.push_back(m);
    j["means"] = means;
    ordered_json exact = ordered_json::array();
    for (const Rat& m : r.exactMeans) exact.push_back(toString(m));
    j["exact_means"] = exact;
    ordered_json analytic = ordered_json::array();
    for (const Rat& m : r.analyticMeans) analytic.push_back(toString(m));
    j["analytic_means"] = analytic;
    j["total_reward"] = toString(r.totalReward);
    j["regret"] = ratJson(r.regret, 4);
    j["preferred_arm"] = r.preferredArm;
    j["preferred_tie"] = r.preferredTie;
    if (r.legacyRegret) j["legacy_regret"] = toString(*r.legacyRegret);
    if (includeLog) {
        ordered_json log = ordered_json::array();
        for (const BanditStep& s : r.log) {
            ordered_json sj;
            sj["t"] = s.t;
            sj["arm"] = s.arm;
            sj["state"] = s.state;
            sj["reward"] = toString(s.reward);
            log.push_back(sj);
        }
        j["log"] = log;
    }
    return j;
}

ordered_json convergenceSummaryJson(const ConvergenceSummary& s) {
    ordered_json j;
    j["trials"] = s.trials;
    j["converged"] = s.converged;
    j["analytic_tie"] = s.analyticTie;
    j["best_arm"] = s.bestArm;
    j["mean_regret"] = s.meanRegret;
    j["std_regret"] = s.stdRegret;
    j["mean_arm_diff"] = s.meanArmDiff;
    j["std_arm_diff"] = s.stdArmDiff;
    return j;
}

ordered_json envelope(const std::string& command, const std::string& inputsDigest,
                      ordered_json results) {
    ordered_json j;
    j["tool"] = "deleg";
    j["version"] = kToolVersion;
    j["command"] = command;
    j["inputs_digest"] = inputsDigest;
    j["results"] = std::move(results);
    return j;
}

namespace {

struct TextTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string render() const {
        std::vector<size_t> width(header.size(), 0);
        for (size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
        for (const auto& row : rows) {
            for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
        }
        std::ostringstream out;
        auto line = [&](const std::vector<std::string>& cells) {
            for (size_t c = 0; c < cells.size(); ++c) {
                out << std::left << std::setw(static_cast<int>(width[c]) + 2) << cells[c];
            }
            out << "\n";
        };
        line(header);
        size_t total = 0;
        for (size_t w : width) total += w + 2;
        out << std::string(total, '-') << "\n";
        for (const auto& row : rows) line(row);
        return out.str();
    }
};

std::string ratText(const Rat& r, int digits = 2) {
    const std::string exact = toString(r);
    if (denominator(r) == 1) return exact;
    return exact + " (" + toDecimalString(r, digits) + ")";
}

std::string joinRats(const std::vector<Rat>& values) {
    std::string out = "{";
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += toString(values[i]);
    }
    return out + "}";
}

}  // namespace

std::string scoreReportText(const ScoreReport& r, const std::string& heading) {
    std::ostringstream out;
    out << heading << ": loss " << ratText(r.loss) << ", gain " << ratText(r.gain) << ", score "
        << ratText(r.score) << " [" << toString(r.convention) << "]\n";
    return out.str();
}

std::string scenarioResultText(const ScenarioResult& r) {
    std::ostringstream out;
    out << "scenario: " << r.name << " (convention: " << toString(r.convention) << ")\n\n";
    if (!r.peekTable.empty()) {
        TextTable t;
        const bool hasNoise = !r.peekTable.front().noiseTag.empty();
        t.header = {"true", "peeked", "belief", "agent EU", "action", "outcome"};
        if (hasNoise) t.header.insert(t.header.begin() + 2, "noise");
        for (size_t i = 0; i < r.peekTable.size(); ++i) {
            const PeekStateMeta& m = r.peekTable[i];
            const TraceRow& agentRow = r.agentReport.trace.at(i);
            std::vector<std::string> row;
            row.push_back(toString(m.trueOutcome));
            row.push_back(joinRats(m.peeked));
            if (hasNoise) row.push_back(m.noiseTag);
            row.push_back(joinRats(m.belief));
            row.push_back(ratText(m.agentEu));
            row.push_back(m.agentOpens ? "Open" : "Not Open");
            row.push_back(toString(agentRow.value) + " (" +
                          (agentRow.cls == TraceClass::Loss
                               ? "Loss"
                               : agentRow.cls == TraceClass::Gain ? "Gain" : "Gain, avoided " +
                                     toString(agentRow.magnitude)) +
                          ")");
            t.rows.push_back(std::move(row));
        }
        out << t.render() << "\n";
    }
    if (!r.reachTable.empty()) {
        TextTable t;
        t.header = {"box", "outcomes", "E[outcome]", "decision", "available", "loss", "gain"};
        for (const ReachBoxMeta& m : r.reachTable) {
            t.rows.push_back({m.label, joinRats(m.outcomes), ratText(m.expectedValue),
                              m.opens ? "Open" : "Not Open",
                              m.delegateOnly ? "delegate-only" : "both", ratText(m.loss),
                              ratText(m.strictGain)});
        }
        out << t.render() << "\n";
    }
    out << scoreReportText(r.principalReport, "principal");
    out << scoreReportText(r.agentReport, "agent");
    out << "verdict: " << (r.delegateVerdict ? "delegate" : "do-not-delegate") << " (margin "
        << ratText(r.margin, 4) << ")\n";
    for (const Discrepancy& d : r.discrepancies) {
        out << "note: " << d.field << " recorded as " << toString(d.stated) << " but derives to "
            << toString(d.derived) << " -- " << d.note << "\n";
    }
    return out.str();
}

std::string banditResultText(const BanditResult& r) {
    std::ostringstream out;
    TextTable t;
    t.header = {"arm", "pulls", "mean", "exact mean", "analytic mean"};
    for (size_t a = 0; a < r.counts.size(); ++a) {
        std::ostringstream mean;
        mean << std::setprecision(6) << r.means[a];
        t.rows.push_back({std::to_string(a), std::to_string(r.counts[a]), mean.str(),
                          ratText(r.exactMeans[a], 4), ratText(r.analyticMeans[a], 4)});
    }
    out << t.render();
    out << "total reward: " << ratText(r.totalReward, 2) << "\n";
    out << "regret: " << ratText(r.regret, 4) << "\n";
    out << "preferred arm: " << r.preferredArm << (r.preferredTie ? " (tie)" : "") << "\n";
    if (r.legacyRegret) out << "legacy regret: " << ratText(*r.legacyRegret, 4) << "\n";
    return out.str();
}

std::string convergenceSummaryText(const ConvergenceSummary& s) {
    std::ostringstream out;
    out << "trials: " << s.trials << "\n";
    out << "converged to best arm: " << s.converged << "/" << s.trials
        << (s.analyticTie ? " (analytic tie)" : "") << "\n";
    out << "mean regret: " << s.meanRegret << "\n";
    out << "std regret: " << s.stdRegret << "\n";
    out << "mean arm difference: " << s.meanArmDiff << "\n";
    out << "std arm difference: " << s.stdArmDiff << "\n";
    return out.str();
}

std::string banditLogLines(const BanditResult& r) {
    std::ostringstream out;
    for (const BanditStep& s : r.log) {
        ordered_json j;
        j["t"] = s.t;
        j["arm"] = s.arm;
        j["state"] = s.state;
        j["reward"] = toString(s.reward);
        out << j.dump() << "\n";
    }
    return out.str();
}

}  // namespace deleg::report
