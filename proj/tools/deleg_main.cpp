#include "deleg/report.hpp"
#include "deleg/scenario_file.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using deleg::report::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConditionFails = 1;
constexpr int kExitUsage = 2;

struct OutputOptions {
    bool json = false;
    std::string outPath;
};

std::string readFileBytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw deleg::ScenarioFileError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string joinArgs(int argc, char** argv) {
    std::string out;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) out += " ";
        out += argv[i];
    }
    return out;
}

uint64_t defaultSeed() {
    if (const char* env = std::getenv("DELEG_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 0;
}

void emit(const ordered_json& reportJson, const std::string& text, const OutputOptions& opts) {
    if (opts.json) {
        std::cout << reportJson.dump(2) << "\n";
    } else {
        std::cout << text;
    }
    if (!opts.outPath.empty()) {
        std::ofstream out(opts.outPath, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write: " + opts.outPath);
        out << reportJson.dump(2) << "\n";
    }
}

std::vector<std::string> jsonDiffPaths(const ordered_json& a, const ordered_json& b,
                                       const std::string& path) {
    std::vector<std::string> diffs;
    if (a.type() != b.type()) {
        diffs.push_back(path + " (type)");
        return diffs;
    }
    if (a.is_object()) {
        for (const auto& [key, value] : a.items()) {
            if (!b.contains(key)) {
                diffs.push_back(path + "/" + key + " (missing)");
            } else {
                auto sub = jsonDiffPaths(value, b.at(key), path + "/" + key);
                diffs.insert(diffs.end(), sub.begin(), sub.end());
            }
        }
        for (const auto& [key, value] : b.items()) {
            if (!a.contains(key)) diffs.push_back(path + "/" + key + " (extra)");
        }
        return diffs;
    }
    if (a.is_array()) {
        if (a.size() != b.size()) {
            diffs.push_back(path + " (length " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
            return diffs;
        }
        for (size_t i = 0; i < a.size(); ++i) {
            auto sub = jsonDiffPaths(a[i], b[i], path + "/" + std::to_string(i));
            diffs.insert(diffs.end(), sub.begin(), sub.end());
        }
        return diffs;
    }
    if (a != b) diffs.push_back(path + " (" + a.dump() + " vs " + b.dump() + ")");
    return diffs;
}

int runScore(const std::string& path, const std::string& conventionFlag, const std::string& side,
             const std::string& command, const OutputOptions& opts) {
    const std::string bytes = readFileBytes(path);
    const deleg::ScenarioFile file = deleg::parseScenarioText(bytes, path);

    std::optional<deleg::ScoreConvention> conv;
    if (!conventionFlag.empty()) conv = deleg::scoreConventionFromString(conventionFlag);

    deleg::ReachVerdict verdict{false, {}, {}, deleg::Rat(0)};
    std::vector<deleg::ScenarioResult> scenarioResult;

    if (const auto* s = std::get_if<deleg::ScoringFile>(&file)) {
        if (!conv) conv = s->convention;
        if (!conv) {
            throw deleg::ScenarioFileError(
                "scenario omits a convention; pass --convention strict|credit");
        }
        verdict = deleg::delegationCriterionReach(s->pi, s->muSelf, s->muDelegate,
                                                  s->strategySelf, s->strategyDelegate, *conv);
    } else if (const auto* p = std::get_if<deleg::PeekScenarioFile>(&file)) {
        if (!conv) conv = p->convention;
        if (!conv) {
            throw deleg::ScenarioFileError(
                "scenario omits a convention; pass --convention strict|credit");
        }
        scenarioResult.push_back(
            deleg::scorePeekScenario(path, deleg::buildNoisyExpert(p->spec), *conv));
    } else if (const auto* r = std::get_if<deleg::ReachScenarioFile>(&file)) {
        if (!conv) conv = r->convention;
        if (!conv) {
            throw deleg::ScenarioFileError(
                "scenario omits a convention; pass --convention strict|credit");
        }
        const deleg::CompiledReachScenario compiled = deleg::buildReachScenario(r->spec);
        verdict = deleg::delegationCriterionReach(compiled.pi, compiled.muSelf,
                                                  compiled.muDelegate, compiled.principal,
                                                  compiled.agent, *conv);
        deleg::ScenarioResult result{path,        *conv,        verdict.principal,
                                     verdict.agent, verdict.delegate_, verdict.margin,
                                     {},          compiled.meta, {}};
        scenarioResult.push_back(std::move(result));
    } else {
        throw deleg::ScenarioFileError("score needs a scoring, peek-scenario or reach-scenario file");
    }

    ordered_json results;
    std::string text;
    if (!scenarioResult.empty()) {
        const deleg::ScenarioResult& r = scenarioResult.front();
        results = deleg::report::scenarioResultJson(r);
        text = deleg::report::scenarioResultText(r);
    } else {
        results["convention"] = deleg::toString(*conv);
        if (side == "self" || side == "both") {
            results["principal"] = deleg::report::scoreReportJson(verdict.principal);
            text += deleg::report::scoreReportText(verdict.principal, "principal");
        }
        if (side == "delegate" || side == "both") {
            results["agent"] = deleg::report::scoreReportJson(verdict.agent);
            text += deleg::report::scoreReportText(verdict.agent, "agent");
        }
        if (side == "both") {
            results["verdict"] = verdict.delegate_ ? "delegate" : "do-not-delegate";
            results["margin"] = deleg::report::ratJson(verdict.margin, 4);
            text += std::string("verdict: ") +
                    (verdict.delegate_ ? "delegate" : "do-not-delegate") + "\n";
        }
    }
    emit(deleg::report::envelope(command, deleg::report::digest(bytes), results), text, opts);
    return kExitOk;
}

int runCheckTrust(const std::string& path, long trials, uint64_t seed, long payoffBound,
                  const std::string& command, const OutputOptions& opts) {
    const std::string bytes = readFileBytes(path);
    const deleg::ScenarioFile file = deleg::parseScenarioText(bytes, path);
    const auto* f = std::get_if<deleg::FrameFile>(&file);
    if (!f) throw deleg::ScenarioFileError("check-trust needs a probability-frame file");

    const deleg::TrustVerdict lp = deleg::checkTotalTrust(f->frame);
    const deleg::TrustVerdict sampled =
        deleg::falsifyTotalTrustRandomized(f->frame, trials, seed, payoffBound);

    ordered_json results;
    results["total_trust"] = deleg::report::trustVerdictJson(lp, f->frame.space);
    results["randomized_falsifier"] = deleg::report::trustVerdictJson(sampled, f->frame.space);

    std::ostringstream text;
    text << "total trust: " << (lp.holds ? "holds" : "fails") << " (exact decision)\n";
    if (lp.witness) {
        text << "  witness: payoffs ";
        for (size_t i = 0; i < f->frame.space.size(); ++i) {
            if (i) text << ", ";
            text << f->frame.space.label(i) << "=" << deleg::toString(lp.witness->x.at(i));
        }
        text << "; threshold " << deleg::toString(lp.witness->threshold) << "; slack "
             << deleg::toString(lp.witness->slack) << "\n";
    }
    text << "randomized falsifier (" << trials << " trials): "
         << (sampled.holds ? "no violation found" : "violation found") << "\n";
    emit(deleg::report::envelope(command, deleg::report::digest(bytes), results), text.str(),
         opts);
    return lp.holds ? kExitOk : kExitConditionFails;
}

int runCheckValuing(const std::string& path, const std::string& family,
                    const std::string& command, const OutputOptions& opts) {
    const std::string bytes = readFileBytes(path);
    const deleg::ScenarioFile file = deleg::parseScenarioText(bytes, path);

    deleg::ValuingVerdict verdict;
    std::vector<std::string> problemNames;

    auto selectIndices = [&](const auto& fileRef) {
        std::vector<size_t> indices;
        if (!family.empty()) {
            auto it = fileRef.families.find(family);
            if (it == fileRef.families.end()) {
                throw deleg::ScenarioFileError("unknown family: " + family);
            }
            indices = it->second;
        } else {
            indices.resize(fileRef.problems.size());
            for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;
        }
        if (indices.empty()) {
            throw deleg::ScenarioFileError("no decision problems to check valuing over");
        }
        return indices;
    };

    if (const auto* f = std::get_if<deleg::FrameFile>(&file)) {
        std::vector<deleg::DecisionProblemRV> problems;
        for (size_t idx : selectIndices(*f)) {
            problems.push_back(f->problems[idx]);
            problemNames.push_back(f->problemNames[idx]);
        }
        verdict = deleg::checkValuingOverFamily(f->frame, problems);
    } else if (const auto* g = std::get_if<deleg::GeneralizedFile>(&file)) {
        std::vector<std::vector<deleg::Act>> problems;
        for (size_t idx : selectIndices(*g)) {
            problems.push_back(g->problems[idx]);
            problemNames.push_back(g->problemNames[idx]);
        }
        verdict = deleg::checkValuingOverFamily(g->frame, problems);
    } else {
        throw deleg::ScenarioFileError("check-valuing needs a frame file with problems");
    }

    ordered_json results;
    results["valuing"] = deleg::report::valuingVerdictJson(verdict, problemNames);
    std::ostringstream text;
    text << "valuing over " << problemNames.size() << " problem(s): "
         << (verdict.holds ? "holds" : "fails") << " (min margin "
         << deleg::toString(verdict.minMargin) << ")\n";
    if (verdict.witness) {
        text << "  delegation loses to " << verdict.witness->option << " in problem "
             << problemNames[verdict.witness->problemIndex] << " by "
             << deleg::toString(verdict.witness->margin) << "\n";
    }
    emit(deleg::report::envelope(command, deleg::report::digest(bytes), results), text.str(),
         opts);
    return verdict.holds ? kExitOk : kExitConditionFails;
}

int runCheckAlignment(const std::string& path, bool singletonEvents, const std::string& command,
                      const OutputOptions& opts) {
    const std::string bytes = readFileBytes(path);
    const deleg::ScenarioFile file = deleg::parseScenarioText(bytes, path);
    const auto* g = std::get_if<deleg::GeneralizedFile>(&file);
    if (!g) throw deleg::ScenarioFileError("check-alignment needs a generalized-frame file");

    const deleg::AlignmentVerdict verdict =
        deleg::checkPosteriorAlignment(g->frame, singletonEvents);

    ordered_json results;
    results["posterior_alignment"] =
        deleg::report::alignmentVerdictJson(verdict, g->frame.space);

    std::ostringstream text;
    text << "posterior alignment: " << (verdict.holds ? "holds" : "fails") << "\n";

    if (verdict.cellWitness) {
        const deleg::CounterexampleProblem counterexample =
            deleg::constructValuingCounterexample(g->frame, *verdict.cellWitness);
        const deleg::ValuingVerdict recheck =
            deleg::checkValuingOverFamily(counterexample.frame, {counterexample.problem});
        ordered_json cj;
        ordered_json problem = ordered_json::array();
        for (const deleg::Act& a : counterexample.problem) problem.push_back(a.label);
        cj["problem"] = problem;
        cj["delegation_loses_to"] = counterexample.preferred.label;
        cj["margin"] = deleg::report::ratJson(counterexample.margin, 4);
        cj["breaks_valuing"] = !recheck.holds;
        results["constructed_counterexample"] = cj;
        text << "constructed counterexample {" << counterexample.problem[0].label << ", "
             << counterexample.problem[1].label << "}: delegation loses "
             << deleg::toString(counterexample.margin) << " against "
             << counterexample.preferred.label << "\n";
    }
    emit(deleg::report::envelope(command, deleg::report::digest(bytes), results), text.str(),
         opts);
    return verdict.holds ? kExitOk : kExitConditionFails;
}

int runReproduce(const std::string& name, bool golden, const std::string& goldenDir,
                 const std::string& command, const OutputOptions& opts) {
    const deleg::ScenarioResult result = deleg::runScenario(name);
    const ordered_json results = deleg::report::scenarioResultJson(result);
    emit(deleg::report::envelope(command, deleg::report::digest(name), results),
         deleg::report::scenarioResultText(result), opts);

    if (golden) {
        const std::string goldenPath = goldenDir + "/" + name + ".json";
        const ordered_json expected = ordered_json::parse(readFileBytes(goldenPath));
        const auto diffs = jsonDiffPaths(expected, results, "");
        if (!diffs.empty()) {
            std::cerr << "golden mismatch against " << goldenPath << ":\n";
            for (const std::string& d : diffs) std::cerr << "  " << d << "\n";
            return kExitConditionFails;
        }
        std::cout << "golden match: " << goldenPath << "\n";
    }
    return kExitOk;
}

int runBanditCmd(const std::string& target, std::optional<long> horizon,
                 std::optional<uint64_t> seed, std::optional<int> trials,
                 const std::string& noiseShifts, const std::string& exploration,
                 const std::string& command, const OutputOptions& opts,
                 const std::string& logPath) {
    deleg::BanditFile banditFile;
    std::string digestInput = target;

    const bool isNamed = target == "reach" || target == "noisy-expert" ||
                         target == "misaligned-expert";
    if (isNamed) {
        banditFile.scenario = target;
        banditFile.config.horizon = 10000;
    } else {
        digestInput = readFileBytes(target);
        const deleg::ScenarioFile file = deleg::parseScenarioText(digestInput, target);
        const auto* b = std::get_if<deleg::BanditFile>(&file);
        if (!b) throw deleg::ScenarioFileError("bandit needs a bandit file or a scenario name");
        banditFile = *b;
    }

    if (horizon) banditFile.config.horizon = *horizon;
    if (seed) {
        banditFile.config.seed = *seed;
    } else if (!banditFile.seedSpecified) {
        banditFile.config.seed = defaultSeed();
    }
    if (trials) banditFile.trials = *trials;
    if (!exploration.empty()) {
        banditFile.config.exploration = deleg::explorationFromString(exploration);
    }
    if (!noiseShifts.empty()) {
        std::vector<deleg::Rat> shifts;
        std::stringstream ss(noiseShifts);
        std::string item;
        while (std::getline(ss, item, ',')) shifts.push_back(deleg::parseRational(item));
        banditFile.noiseShifts = std::move(shifts);
    }

    deleg::BanditConfig cfg = banditFile.config;
    if (banditFile.scenario) {
        cfg = deleg::banditConfigForScenario(*banditFile.scenario, banditFile.config.horizon,
                                             banditFile.config.seed,
                                             banditFile.config.exploration,
                                             banditFile.noiseShifts);
    } else if (banditFile.noiseShifts) {
        throw deleg::ScenarioFileError("noise shifts only apply to named scenarios");
    }

    ordered_json results;
    std::string text;
    if (banditFile.trials > 1) {
        const deleg::ConvergenceSummary summary =
            deleg::convergenceExperiment(cfg, banditFile.trials);
        results = deleg::report::convergenceSummaryJson(summary);
        text = deleg::report::convergenceSummaryText(summary);
    } else {
        const deleg::BanditResult result = deleg::runBandit(cfg);
        results = deleg::report::banditResultJson(result, false);
        text = deleg::report::banditResultText(result);
        if (!logPath.empty()) {
            std::ofstream log(logPath, std::ios::binary);
            if (!log) throw std::runtime_error("cannot write: " + logPath);
            log << deleg::report::banditLogLines(result);
        }
    }
    emit(deleg::report::envelope(command, deleg::report::digest(digestInput), results), text,
         opts);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"delegation calculus: frames, deference checks, decision scoring, bandit"};
    app.require_subcommand(1);

    const std::string command = joinArgs(argc, argv);

    // score
    auto* score = app.add_subcommand("score", "score a scenario file and report the verdict");
    std::string scoreFile, scoreConvention, scoreSide = "both";
    OutputOptions scoreOut;
    score->add_option("file", scoreFile, "scenario file")->required();
    score->add_option("--convention", scoreConvention, "strict|credit")
        ->check(CLI::IsMember({"strict", "credit"}));
    score->add_option("--side", scoreSide, "self|delegate|both")
        ->check(CLI::IsMember({"self", "delegate", "both"}));
    score->add_flag("--json", scoreOut.json, "emit the machine-readable report");
    score->add_option("--out", scoreOut.outPath, "also write the report to a file");

    // check-trust
    auto* trust = app.add_subcommand("check-trust", "decide total trust on a probability frame");
    std::string trustFile;
    long trustTrials = 1000;
    long trustBound = 8;
    std::optional<uint64_t> trustSeed;
    OutputOptions trustOut;
    trust->add_option("file", trustFile, "probability-frame file")->required();
    trust->add_option("--trials", trustTrials, "randomized falsifier trials");
    trust->add_option("--seed", trustSeed, "falsifier seed (default: DELEG_SEED or 0)");
    trust->add_option("--payoff-bound", trustBound, "falsifier integer payoff bound");
    trust->add_flag("--json", trustOut.json, "emit the machine-readable report");
    trust->add_option("--out", trustOut.outPath, "also write the report to a file");

    // check-valuing
    auto* valuing = app.add_subcommand("check-valuing",
                                       "check that delegation beats every listed option");
    std::string valuingFile, valuingFamily;
    OutputOptions valuingOut;
    valuing->add_option("file", valuingFile, "frame file with problems")->required();
    valuing->add_option("--family", valuingFamily, "named problem family (default: all)");
    valuing->add_flag("--json", valuingOut.json, "emit the machine-readable report");
    valuing->add_option("--out", valuingOut.outPath, "also write the report to a file");

    // check-alignment
    auto* alignment = app.add_subcommand("check-alignment",
                                         "check the posterior-alignment condition");
    std::string alignmentFile;
    bool singletonEvents = false;
    OutputOptions alignmentOut;
    alignment->add_option("file", alignmentFile, "generalized-frame file")->required();
    alignment->add_flag("--singleton-events", singletonEvents,
                        "restrict event pairs to singletons");
    alignment->add_flag("--json", alignmentOut.json, "emit the machine-readable report");
    alignment->add_option("--out", alignmentOut.outPath, "also write the report to a file");

    // reproduce
    auto* reproduce = app.add_subcommand("reproduce", "rebuild a bundled reference scenario");
    std::string reproduceName, goldenDir = "golden";
    bool golden = false;
    OutputOptions reproduceOut;
    reproduce->add_option("name", reproduceName, "noisy-expert|misaligned-expert|reach")
        ->required();
    reproduce->add_flag("--golden", golden, "compare against the stored golden report");
    reproduce->add_option("--golden-dir", goldenDir, "directory of golden reports");
    reproduce->add_flag("--json", reproduceOut.json, "emit the machine-readable report");
    reproduce->add_option("--out", reproduceOut.outPath, "also write the report to a file");

    // bandit
    auto* bandit = app.add_subcommand("bandit", "run the delegation bandit");
    std::string banditTarget, banditNoise, banditExploration, banditLog;
    std::optional<long> banditHorizon;
    std::optional<uint64_t> banditSeed;
    std::optional<int> banditTrials;
    OutputOptions banditOut;
    bandit->add_option("target", banditTarget, "bandit file or scenario name")->required();
    bandit->add_option("--horizon", banditHorizon, "steps per run");
    bandit->add_option("--seed", banditSeed, "master seed (default: DELEG_SEED or 0)");
    bandit->add_option("--trials", banditTrials, "independent trials (summary mode when > 1)");
    bandit->add_option("--noise-shifts", banditNoise,
                       "comma-separated shifts overriding the scenario's noise, e.g. \"2,-2\"");
    bandit->add_option("--exploration", banditExploration, "log-squared|textbook")
        ->check(CLI::IsMember({"log-squared", "textbook"}));
    bandit->add_option("--log", banditLog, "write the per-step log (JSON lines)");
    bandit->add_flag("--json", banditOut.json, "emit the machine-readable report");
    bandit->add_option("--out", banditOut.outPath, "also write the report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (score->parsed()) {
            return runScore(scoreFile, scoreConvention, scoreSide, command, scoreOut);
        }
        if (trust->parsed()) {
            return runCheckTrust(trustFile, trustTrials, trustSeed.value_or(defaultSeed()),
                                 trustBound, command, trustOut);
        }
        if (valuing->parsed()) {
            return runCheckValuing(valuingFile, valuingFamily, command, valuingOut);
        }
        if (alignment->parsed()) {
            return runCheckAlignment(alignmentFile, singletonEvents, command, alignmentOut);
        }
        if (reproduce->parsed()) {
            return runReproduce(reproduceName, golden, goldenDir, command, reproduceOut);
        }
        if (bandit->parsed()) {
            return runBanditCmd(banditTarget, banditHorizon, banditSeed, banditTrials,
                                banditNoise, banditExploration, command, banditOut, banditLog);
        }
    } catch (const deleg::ScenarioFileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
