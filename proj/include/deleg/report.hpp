#pragma once

#include "deleg/bandit.hpp"
#include "deleg/deference.hpp"
#include "deleg/scenarios.hpp"
#include "deleg/scoring.hpp"

#include <json.hpp>

#include <string>

namespace deleg::report {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a 64-bit, hex encoded. Stable across platforms; used to tag report
/// inputs so identical invocations produce identical bytes.
std::string digest(const std::string& bytes);

/// {"exact": "-47/30", "decimal": "-1.57"}
ordered_json ratJson(const Rat& r, int digits = 2);

ordered_json scoreReportJson(const ScoreReport& r, bool includeTrace = true);
ordered_json trustVerdictJson(const TrustVerdict& v, const StateSpace& space);
ordered_json valuingVerdictJson(const ValuingVerdict& v,
                                const std::vector<std::string>& problemNames);
ordered_json alignmentVerdictJson(const AlignmentVerdict& v, const StateSpace& space);
ordered_json scenarioResultJson(const ScenarioResult& r);
ordered_json banditResultJson(const BanditResult& r, bool includeLog);
ordered_json convergenceSummaryJson(const ConvergenceSummary& s);

/// Wraps command results in the stable report envelope.
ordered_json envelope(const std::string& command, const std::string& inputsDigest,
                      ordered_json results);

std::string scenarioResultText(const ScenarioResult& r);
std::string scoreReportText(const ScoreReport& r, const std::string& heading);
std::string banditResultText(const BanditResult& r);
std::string convergenceSummaryText(const ConvergenceSummary& s);

/// One line per step: {"t":..,"arm":..,"state":..,"reward":..}
std::string banditLogLines(const BanditResult& r);

}  // namespace deleg::report
