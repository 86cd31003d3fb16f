#pragma once

#include "deleg/bandit.hpp"
#include "deleg/deference.hpp"
#include "deleg/frames.hpp"
#include "deleg/scenarios.hpp"
#include "deleg/scoring.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace deleg {

/// Raised for malformed scenario files; the message carries file position or
/// JSON context. The CLI maps it to exit code 2.
struct ScenarioFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FrameFile {
    ProbabilityFrame frame;
    std::vector<std::string> problemNames;
    std::vector<DecisionProblemRV> problems;
    std::map<std::string, std::vector<size_t>> families;  // name -> problem indices
};

struct GeneralizedFile {
    GeneralizedFrame frame;
    std::vector<std::string> problemNames;
    std::vector<std::vector<Act>> problems;
    std::map<std::string, std::vector<size_t>> families;
};

struct ScoringFile {
    StateSpace space;
    Credence pi;
    GambleDistribution muSelf;
    GambleDistribution muDelegate;
    DecisionStrategy strategySelf;
    DecisionStrategy strategyDelegate;
    std::optional<ScoreConvention> convention;
};

struct PeekScenarioFile {
    PeekAgentSpec spec;
    std::optional<ScoreConvention> convention;
};

struct ReachScenarioFile {
    ReachScenarioSpec spec;
    std::optional<ScoreConvention> convention;
};

struct BanditFile {
    std::optional<std::string> scenario;  // named scenario instead of explicit arms
    std::optional<std::vector<Rat>> noiseShifts;
    BanditConfig config;                  // arms empty when `scenario` is set
    bool seedSpecified = false;           // whether the file pinned a seed
    int trials = 1;
};

using ScenarioFile = std::variant<FrameFile, GeneralizedFile, ScoringFile, PeekScenarioFile,
                                  ReachScenarioFile, BanditFile>;

/// Parses a UTF-8 JSON scenario document. Probabilities and payoffs must be
/// integers or "p/q" strings; decimal literals are rejected.
ScenarioFile parseScenarioFile(const std::string& path);
ScenarioFile parseScenarioText(const std::string& text, const std::string& originName);

/// Serializes back to the canonical JSON form (used by round-trip tests).
std::string scenarioToJsonText(const ScenarioFile& file);

}  // namespace deleg
