#include "deleg/scenario_file.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace deleg {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& context, const std::string& message) {
    throw ScenarioFileError(context + ": " + message);
}

Rat ratField(const ordered_json& v, const std::string& context) {
    if (v.is_number_integer()) return Rat(static_cast<long long>(v.get<int64_t>()));
    if (v.is_string()) {
        auto r = tryParseRational(v.get<std::string>());
        if (!r) fail(context, "not an exact rational: \"" + v.get<std::string>() + "\"");
        return *r;
    }
    if (v.is_number_float()) {
        fail(context, "decimal literals are not exact; write an integer or \"p/q\"");
    }
    fail(context, "expected an integer or \"p/q\" string");
}

const ordered_json& field(const ordered_json& j, const std::string& key,
                          const std::string& context) {
    auto it = j.find(key);
    if (it == j.end()) fail(context, "missing field \"" + key + "\"");
    return *it;
}

StateSpace parseStates(const ordered_json& j, const std::string& context) {
    const ordered_json& states = field(j, "states", context);
    if (!states.is_array() || states.empty()) fail(context, "\"states\" must be a non-empty array");
    std::vector<std::string> labels;
    for (const auto& s : states) {
        if (!s.is_string()) fail(context, "state labels must be strings");
        labels.push_back(s.get<std::string>());
    }
    return StateSpace(std::move(labels));
}

Credence parseCredence(const ordered_json& j, const StateSpace& space,
                       const std::string& context) {
    if (!j.is_object()) fail(context, "expected an object of state -> rational");
    std::vector<Rat> weights(space.size(), Rat(0));
    for (const auto& [key, value] : j.items()) {
        if (!space.contains(key)) fail(context, "unknown state \"" + key + "\"");
        weights[space.index(key)] = ratField(value, context + "." + key);
    }
    try {
        return Credence(space, std::move(weights));
    } catch (const std::exception& e) {
        fail(context, e.what());
    }
}

std::vector<Rat> parsePayoffs(const ordered_json& j, const StateSpace& space,
                              const std::string& context) {
    if (!j.is_object()) fail(context, "expected an object of state -> rational");
    std::vector<Rat> payoffs(space.size(), Rat(0));
    std::vector<bool> seen(space.size(), false);
    for (const auto& [key, value] : j.items()) {
        if (!space.contains(key)) fail(context, "unknown state \"" + key + "\"");
        payoffs[space.index(key)] = ratField(value, context + "." + key);
        seen[space.index(key)] = true;
    }
    for (size_t i = 0; i < space.size(); ++i) {
        if (!seen[i]) fail(context, "missing payoff for state \"" + space.label(i) + "\"");
    }
    return payoffs;
}

void parseProblemsAndFamilies(const ordered_json& j, size_t problemCount,
                              const std::vector<std::string>& names,
                              std::map<std::string, std::vector<size_t>>& families,
                              const std::string& context) {
    (void)problemCount;
    if (!j.contains("families")) return;
    for (const auto& [famName, list] : j.at("families").items()) {
        if (!list.is_array()) fail(context, "family \"" + famName + "\" must list problem names");
        std::vector<size_t> indices;
        for (const auto& entry : list) {
            const std::string want = entry.get<std::string>();
            auto it = std::find(names.begin(), names.end(), want);
            if (it == names.end()) {
                fail(context, "family \"" + famName + "\" names unknown problem \"" + want + "\"");
            }
            indices.push_back(static_cast<size_t>(it - names.begin()));
        }
        families[famName] = std::move(indices);
    }
}

FrameFile parseFrameFile(const ordered_json& j) {
    const std::string ctx = "probability-frame";
    const StateSpace space = parseStates(j, ctx);
    Credence pi = parseCredence(field(j, "pi", ctx), space, ctx + ".pi");
    const ordered_json& agentObj = field(j, "agent", ctx);
    std::vector<Credence> agent;
    for (size_t i = 0; i < space.size(); ++i) {
        const std::string& label = space.label(i);
        if (!agentObj.contains(label)) fail(ctx, "agent credence missing for state " + label);
        agent.push_back(parseCredence(agentObj.at(label), space, ctx + ".agent." + label));
    }
    FrameFile out{ProbabilityFrame(space, std::move(pi), std::move(agent)), {}, {}, {}};
    if (j.contains("problems")) {
        for (const auto& p : j.at("problems")) {
            const std::string name = p.contains("name")
                                         ? p.at("name").get<std::string>()
                                         : "problem-" + std::to_string(out.problems.size());
            std::vector<OptionRV> options;
            for (const auto& o : field(p, "options", ctx)) {
                const std::string label = field(o, "label", ctx).get<std::string>();
                options.emplace_back(label, space,
                                     parsePayoffs(field(o, "payoffs", ctx), space,
                                                  ctx + ".option." + label));
            }
            out.problemNames.push_back(name);
            out.problems.emplace_back(std::move(options));
        }
    }
    parseProblemsAndFamilies(j, out.problems.size(), out.problemNames, out.families, ctx);
    return out;
}

GeneralizedFile parseGeneralizedFile(const ordered_json& j) {
    const std::string ctx = "generalized-frame";
    const StateSpace space = parseStates(j, ctx);
    Credence pi = parseCredence(field(j, "pi", ctx), space, ctx + ".pi");

    std::vector<std::string> consequences;
    for (const auto& c : field(j, "consequences", ctx)) {
        consequences.push_back(c.get<std::string>());
    }
    std::map<std::string, Rat> utility;
    for (const auto& [k, v] : field(j, "utility", ctx).items()) {
        utility[k] = ratField(v, ctx + ".utility." + k);
    }

    std::vector<Act> acts;
    for (const auto& a : field(j, "acts", ctx)) {
        const std::string label = field(a, "label", ctx).get<std::string>();
        const ordered_json& outcomesObj = field(a, "outcomes", ctx);
        std::vector<std::string> outcomes(space.size());
        for (size_t i = 0; i < space.size(); ++i) {
            const std::string& state = space.label(i);
            if (!outcomesObj.contains(state)) {
                fail(ctx, "act \"" + label + "\" missing state " + state);
            }
            outcomes[i] = outcomesObj.at(state).get<std::string>();
        }
        acts.emplace_back(label, space, std::move(outcomes));
    }

    const ordered_json& beliefsObj = field(j, "agent_beliefs", ctx);
    const ordered_json& utilitiesObj = field(j, "agent_utilities", ctx);
    std::vector<Credence> beliefs;
    std::vector<std::map<std::string, Rat>> utilities;
    for (size_t i = 0; i < space.size(); ++i) {
        const std::string& label = space.label(i);
        if (!beliefsObj.contains(label)) fail(ctx, "agent_beliefs missing state " + label);
        beliefs.push_back(parseCredence(beliefsObj.at(label), space,
                                        ctx + ".agent_beliefs." + label));
        if (!utilitiesObj.contains(label)) fail(ctx, "agent_utilities missing state " + label);
        std::map<std::string, Rat> v;
        for (const auto& [k, val] : utilitiesObj.at(label).items()) {
            v[k] = ratField(val, ctx + ".agent_utilities." + label + "." + k);
        }
        utilities.push_back(std::move(v));
    }

    std::vector<std::string> tieBreak;
    if (j.contains("tie_break")) {
        for (const auto& t : j.at("tie_break")) tieBreak.push_back(t.get<std::string>());
    }

    GeneralizedFile out{GeneralizedFrame(space, std::move(pi), std::move(consequences),
                                         std::move(utility), std::move(acts), std::move(beliefs),
                                         std::move(utilities), std::move(tieBreak)),
                        {}, {}, {}};
    if (j.contains("problems")) {
        for (const auto& p : j.at("problems")) {
            const std::string name = p.contains("name")
                                         ? p.at("name").get<std::string>()
                                         : "problem-" + std::to_string(out.problems.size());
            std::vector<Act> problem;
            for (const auto& actLabel : field(p, "acts", ctx)) {
                problem.push_back(out.frame.actByLabel(actLabel.get<std::string>()));
            }
            if (problem.empty()) fail(ctx, "problem \"" + name + "\" has no acts");
            out.problemNames.push_back(name);
            out.problems.push_back(std::move(problem));
        }
    }
    parseProblemsAndFamilies(j, out.problems.size(), out.problemNames, out.families, ctx);
    return out;
}

ScoringFile parseScoringFile(const ordered_json& j) {
    const std::string ctx = "scoring";
    const StateSpace space = parseStates(j, ctx);
    Credence pi = parseCredence(field(j, "pi", ctx), space, ctx + ".pi");

    std::map<std::string, Gamble> gambleByLabel;
    std::vector<std::string> gambleOrder;
    for (const auto& g : field(j, "gambles", ctx)) {
        const std::string label = field(g, "label", ctx).get<std::string>();
        std::optional<std::vector<Rat>> accepted;
        if (g.contains("accepted_payoffs")) {
            accepted = parsePayoffs(g.at("accepted_payoffs"), space,
                                    ctx + "." + label + ".accepted_payoffs");
        }
        gambleByLabel.emplace(
            label, Gamble(label, space,
                          parsePayoffs(field(g, "payoffs", ctx), space,
                                       ctx + "." + label + ".payoffs"),
                          std::move(accepted)));
        gambleOrder.push_back(label);
    }

    auto parseMu = [&](const char* key) {
        std::vector<std::pair<Gamble, Rat>> support;
        if (!j.contains(key)) fail(ctx, std::string("missing field \"") + key + "\"");
        for (const auto& [label, weight] : j.at(key).items()) {
            auto it = gambleByLabel.find(label);
            if (it == gambleByLabel.end()) fail(ctx, "unknown gamble \"" + label + "\"");
            support.push_back({it->second, ratField(weight, ctx + "." + key + "." + label)});
        }
        return GambleDistribution(space, std::move(support));
    };

    auto parseStrategy = [&](const char* key) {
        DecisionStrategy d;
        if (!j.contains(key)) fail(ctx, std::string("missing field \"") + key + "\"");
        for (const auto& [label, row] : j.at(key).items()) {
            if (!gambleByLabel.count(label)) fail(ctx, "unknown gamble \"" + label + "\"");
            std::vector<char> accepts(space.size(), 0);
            if (row.is_string()) {
                const std::string shorthand = row.get<std::string>();
                if (shorthand == "accept-all") {
                    std::fill(accepts.begin(), accepts.end(), 1);
                } else if (shorthand != "reject-all") {
                    fail(ctx, "strategy shorthand must be accept-all or reject-all");
                }
            } else {
                for (const auto& [state, v] : row.items()) {
                    if (!space.contains(state)) fail(ctx, "unknown state \"" + state + "\"");
                    if (!v.is_boolean()) fail(ctx, "strategy entries must be booleans");
                    accepts[space.index(state)] = v.get<bool>() ? 1 : 0;
                }
            }
            d.setRow(label, std::move(accepts));
        }
        return d;
    };

    ScoringFile out{space,
                    std::move(pi),
                    parseMu("mu_self"),
                    parseMu("mu_delegate"),
                    parseStrategy("strategy_self"),
                    parseStrategy("strategy_delegate"),
                    std::nullopt};
    if (j.contains("convention")) {
        out.convention = scoreConventionFromString(j.at("convention").get<std::string>());
    }
    return out;
}

PeekScenarioFile parsePeekScenarioFile(const ordered_json& j) {
    const std::string ctx = "peek-scenario";
    PeekScenarioFile out;
    for (const auto& v : field(j, "outcomes", ctx)) {
        out.spec.outcomes.push_back(ratField(v, ctx + ".outcomes"));
    }
    out.spec.peekCount = field(j, "peek_count", ctx).get<int>();
    if (j.contains("noise_states")) {
        for (const auto& n : j.at("noise_states")) {
            out.spec.noiseStates.push_back({field(n, "tag", ctx).get<std::string>(),
                                            ratField(field(n, "shift", ctx), ctx + ".shift"),
                                            ratField(field(n, "weight", ctx), ctx + ".weight")});
        }
    }
    out.spec.agentUtility =
        agentUtilityFromString(field(j, "agent_utility", ctx).get<std::string>());
    if (j.contains("fee")) out.spec.fee = ratField(j.at("fee"), ctx + ".fee");
    if (j.contains("accept_on_tie")) out.spec.acceptOnTie = j.at("accept_on_tie").get<bool>();
    if (j.contains("convention")) {
        out.convention = scoreConventionFromString(j.at("convention").get<std::string>());
    }
    return out;
}

ReachScenarioFile parseReachScenarioFile(const ordered_json& j) {
    const std::string ctx = "reach-scenario";
    ReachScenarioFile out;
    for (const auto& b : field(j, "boxes", ctx)) {
        ReachBox box;
        box.label = field(b, "label", ctx).get<std::string>();
        for (const auto& v : field(b, "outcomes", ctx)) {
            box.outcomes.push_back(ratField(v, ctx + "." + box.label));
        }
        const std::string avail = field(b, "available_to", ctx).get<std::string>();
        if (avail == "both") {
            box.availability = BoxAvailability::Both;
        } else if (avail == "delegate-only") {
            box.availability = BoxAvailability::DelegateOnly;
        } else {
            fail(ctx, "available_to must be \"both\" or \"delegate-only\"");
        }
        out.spec.boxes.push_back(std::move(box));
    }
    if (j.contains("open_on_tie")) out.spec.openOnTie = j.at("open_on_tie").get<bool>();
    if (j.contains("convention")) {
        out.convention = scoreConventionFromString(j.at("convention").get<std::string>());
    }
    return out;
}

BanditFile parseBanditFile(const ordered_json& j) {
    const std::string ctx = "bandit";
    BanditFile out;
    out.config.horizon = field(j, "horizon", ctx).get<long>();
    if (j.contains("seed")) {
        out.config.seed = j.at("seed").get<uint64_t>();
        out.seedSpecified = true;
    }
    if (j.contains("exploration")) {
        out.config.exploration = explorationFromString(j.at("exploration").get<std::string>());
    }
    if (j.contains("trials")) out.trials = j.at("trials").get<int>();
    if (j.contains("scenario")) {
        out.scenario = j.at("scenario").get<std::string>();
        if (j.contains("noise_shifts")) {
            std::vector<Rat> shifts;
            for (const auto& v : j.at("noise_shifts")) {
                shifts.push_back(ratField(v, ctx + ".noise_shifts"));
            }
            out.noiseShifts = std::move(shifts);
        }
        return out;
    }
    if (!j.contains("arms")) fail(ctx, "needs either \"scenario\" or explicit \"arms\"");
    for (const auto& a : j.at("arms")) {
        ArmSpec arm;
        arm.name = field(a, "name", ctx).get<std::string>();
        const std::string kind = field(a, "kind", ctx).get<std::string>();
        if (kind == "self") {
            arm.kind = ArmKind::Self;
        } else if (kind == "delegate") {
            arm.kind = ArmKind::Delegate;
        } else {
            fail(ctx, "arm kind must be \"self\" or \"delegate\"");
        }
        for (const auto& o : field(a, "support", ctx)) {
            arm.support.push_back({field(o, "state", ctx).get<std::string>(),
                                   ratField(field(o, "weight", ctx), ctx + ".weight"),
                                   ratField(field(o, "reward", ctx), ctx + ".reward")});
        }
        out.config.arms.push_back(std::move(arm));
    }
    if (j.contains("outcome_sum")) {
        out.config.outcomeSum = ratField(j.at("outcome_sum"), ctx + ".outcome_sum");
    }
    return out;
}

std::pair<size_t, size_t> lineColumn(const std::string& text, size_t byteOffset) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < byteOffset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

ScenarioFile parseScenarioText(const std::string& text, const std::string& originName) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = lineColumn(text, e.byte);
        throw ScenarioFileError(originName + ":" + std::to_string(line) + ":" +
                                std::to_string(col) + ": " + e.what());
    }
    try {
        if (!j.is_object()) throw ScenarioFileError("scenario file must be a JSON object");
        const int version = j.contains("version") ? j.at("version").get<int>() : 1;
        if (version != 1) throw ScenarioFileError("unsupported scenario file version");
        const std::string kind = field(j, "kind", "scenario").get<std::string>();
        if (kind == "probability-frame") return parseFrameFile(j);
        if (kind == "generalized-frame") return parseGeneralizedFile(j);
        if (kind == "scoring") return parseScoringFile(j);
        if (kind == "peek-scenario") return parsePeekScenarioFile(j);
        if (kind == "reach-scenario") return parseReachScenarioFile(j);
        if (kind == "bandit") return parseBanditFile(j);
        throw ScenarioFileError("unknown scenario kind: " + kind);
    } catch (const ScenarioFileError&) {
        throw;
    } catch (const std::exception& e) {
        throw ScenarioFileError(originName + ": " + e.what());
    }
}

ScenarioFile parseScenarioFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioFileError("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parseScenarioText(buffer.str(), path);
}

namespace {

ordered_json credenceJson(const Credence& c) {
    ordered_json out = ordered_json::object();
    for (size_t i = 0; i < c.space().size(); ++i) out[c.space().label(i)] = toString(c.at(i));
    return out;
}

ordered_json payoffsJson(const StateSpace& space, const std::vector<Rat>& payoffs) {
    ordered_json out = ordered_json::object();
    for (size_t i = 0; i < space.size(); ++i) out[space.label(i)] = toString(payoffs[i]);
    return out;
}

}  // namespace

std::string scenarioToJsonText(const ScenarioFile& file) {
    ordered_json j;
    j["version"] = 1;
    if (const auto* f = std::get_if<FrameFile>(&file)) {
        j["kind"] = "probability-frame";
        j["states"] = f->frame.space.labels();
        j["pi"] = credenceJson(f->frame.pi);
        ordered_json agent = ordered_json::object();
        for (size_t i = 0; i < f->frame.space.size(); ++i) {
            agent[f->frame.space.label(i)] = credenceJson(f->frame.agent[i]);
        }
        j["agent"] = agent;
        if (!f->problems.empty()) {
            ordered_json problems = ordered_json::array();
            for (size_t p = 0; p < f->problems.size(); ++p) {
                ordered_json problem;
                problem["name"] = f->problemNames[p];
                ordered_json options = ordered_json::array();
                for (const OptionRV& o : f->problems[p].options()) {
                    ordered_json option;
                    option["label"] = o.label;
                    option["payoffs"] = payoffsJson(f->frame.space, o.payoffs);
                    options.push_back(option);
                }
                problem["options"] = options;
                problems.push_back(problem);
            }
            j["problems"] = problems;
        }
        if (!f->families.empty()) {
            ordered_json families = ordered_json::object();
            for (const auto& [name, indices] : f->families) {
                ordered_json list = ordered_json::array();
                for (size_t idx : indices) list.push_back(f->problemNames[idx]);
                families[name] = list;
            }
            j["families"] = families;
        }
    } else if (const auto* g = std::get_if<GeneralizedFile>(&file)) {
        j["kind"] = "generalized-frame";
        j["states"] = g->frame.space.labels();
        j["pi"] = credenceJson(g->frame.pi);
        j["consequences"] = g->frame.consequences;
        ordered_json utility = ordered_json::object();
        for (const auto& [c, u] : g->frame.utility) utility[c] = toString(u);
        j["utility"] = utility;
        ordered_json acts = ordered_json::array();
        for (const Act& a : g->frame.acts) {
            ordered_json act;
            act["label"] = a.label;
            ordered_json outcomes = ordered_json::object();
            for (size_t i = 0; i < g->frame.space.size(); ++i) {
                outcomes[g->frame.space.label(i)] = a.outcomes[i];
            }
            act["outcomes"] = outcomes;
            acts.push_back(act);
        }
        j["acts"] = acts;
        ordered_json beliefs = ordered_json::object();
        ordered_json utilities = ordered_json::object();
        for (size_t i = 0; i < g->frame.space.size(); ++i) {
            beliefs[g->frame.space.label(i)] = credenceJson(g->frame.agentBeliefs[i]);
            ordered_json v = ordered_json::object();
            for (const auto& [c, u] : g->frame.agentUtilities[i]) v[c] = toString(u);
            utilities[g->frame.space.label(i)] = v;
        }
        j["agent_beliefs"] = beliefs;
        j["agent_utilities"] = utilities;
        if (!g->frame.tieBreak.empty()) j["tie_break"] = g->frame.tieBreak;
        if (!g->problems.empty()) {
            ordered_json problems = ordered_json::array();
            for (size_t p = 0; p < g->problems.size(); ++p) {
                ordered_json problem;
                problem["name"] = g->problemNames[p];
                ordered_json actLabels = ordered_json::array();
                for (const Act& a : g->problems[p]) actLabels.push_back(a.label);
                problem["acts"] = actLabels;
                problems.push_back(problem);
            }
            j["problems"] = problems;
        }
        if (!g->families.empty()) {
            ordered_json families = ordered_json::object();
            for (const auto& [name, indices] : g->families) {
                ordered_json list = ordered_json::array();
                for (size_t idx : indices) list.push_back(g->problemNames[idx]);
                families[name] = list;
            }
            j["families"] = families;
        }
    } else if (const auto* s = std::get_if<ScoringFile>(&file)) {
        j["kind"] = "scoring";
        j["states"] = s->space.labels();
        j["pi"] = credenceJson(s->pi);
        ordered_json gambles = ordered_json::array();
        std::map<std::string, const Gamble*> byLabel;
        for (const auto& [g, w] : s->muSelf.support()) byLabel.emplace(g.label, &g);
        for (const auto& [g, w] : s->muDelegate.support()) byLabel.emplace(g.label, &g);
        for (const auto& [label, g] : byLabel) {
            ordered_json gj;
            gj["label"] = label;
            gj["payoffs"] = payoffsJson(s->space, g->payoffs);
            if (g->acceptedPayoffs) {
                gj["accepted_payoffs"] = payoffsJson(s->space, *g->acceptedPayoffs);
            }
            gambles.push_back(gj);
        }
        j["gambles"] = gambles;
        auto muJson = [&](const GambleDistribution& mu) {
            ordered_json out = ordered_json::object();
            for (const auto& [g, w] : mu.support()) out[g.label] = toString(w);
            return out;
        };
        j["mu_self"] = muJson(s->muSelf);
        j["mu_delegate"] = muJson(s->muDelegate);
        auto strategyJson = [&](const DecisionStrategy& d) {
            ordered_json out = ordered_json::object();
            for (const auto& [label, row] : d.rows()) {
                ordered_json rowJson = ordered_json::object();
                for (size_t i = 0; i < s->space.size(); ++i) {
                    rowJson[s->space.label(i)] = row[i] != 0;
                }
                out[label] = rowJson;
            }
            return out;
        };
        j["strategy_self"] = strategyJson(s->strategySelf);
        j["strategy_delegate"] = strategyJson(s->strategyDelegate);
        if (s->convention) j["convention"] = toString(*s->convention);
    } else if (const auto* p = std::get_if<PeekScenarioFile>(&file)) {
        j["kind"] = "peek-scenario";
        ordered_json outcomes = ordered_json::array();
        for (const Rat& x : p->spec.outcomes) outcomes.push_back(toString(x));
        j["outcomes"] = outcomes;
        j["peek_count"] = p->spec.peekCount;
        ordered_json noise = ordered_json::array();
        for (const NoiseState& n : p->spec.noiseStates) {
            ordered_json nj;
            nj["tag"] = n.tag;
            nj["shift"] = toString(n.shift);
            nj["weight"] = toString(n.weight);
            noise.push_back(nj);
        }
        j["noise_states"] = noise;
        j["agent_utility"] = toString(p->spec.agentUtility);
        j["fee"] = toString(p->spec.fee);
        j["accept_on_tie"] = p->spec.acceptOnTie;
        if (p->convention) j["convention"] = toString(*p->convention);
    } else if (const auto* r = std::get_if<ReachScenarioFile>(&file)) {
        j["kind"] = "reach-scenario";
        ordered_json boxes = ordered_json::array();
        for (const ReachBox& b : r->spec.boxes) {
            ordered_json bj;
            bj["label"] = b.label;
            ordered_json outcomes = ordered_json::array();
            for (const Rat& x : b.outcomes) outcomes.push_back(toString(x));
            bj["outcomes"] = outcomes;
            bj["available_to"] =
                b.availability == BoxAvailability::Both ? "both" : "delegate-only";
            boxes.push_back(bj);
        }
        j["boxes"] = boxes;
        j["open_on_tie"] = r->spec.openOnTie;
        if (r->convention) j["convention"] = toString(*r->convention);
    } else if (const auto* b = std::get_if<BanditFile>(&file)) {
        j["kind"] = "bandit";
        j["horizon"] = b->config.horizon;
        j["seed"] = b->config.seed;
        j["exploration"] = toString(b->config.exploration);
        if (b->trials != 1) j["trials"] = b->trials;
        if (b->scenario) {
            j["scenario"] = *b->scenario;
            if (b->noiseShifts) {
                ordered_json shifts = ordered_json::array();
                for (const Rat& s : *b->noiseShifts) shifts.push_back(toString(s));
                j["noise_shifts"] = shifts;
            }
        } else {
            ordered_json arms = ordered_json::array();
            for (const ArmSpec& arm : b->config.arms) {
                ordered_json aj;
                aj["name"] = arm.name;
                aj["kind"] = toString(arm.kind);
                ordered_json support = ordered_json::array();
                for (const ArmOutcome& o : arm.support) {
                    ordered_json oj;
                    oj["state"] = o.state;
                    oj["weight"] = toString(o.weight);
                    oj["reward"] = toString(o.reward);
                    support.push_back(oj);
                }
                aj["support"] = support;
                arms.push_back(aj);
            }
            j["arms"] = arms;
            if (b->config.outcomeSum) j["outcome_sum"] = toString(*b->config.outcomeSum);
        }
    }
    return j.dump(2) + "\n";
}

}  // namespace deleg
