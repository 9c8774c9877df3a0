#pragma once

#include <json.hpp>

#include "gazetype/evaluate.hpp"
#include "gazetype/pipeline.hpp"

namespace gazetype {

using nlohmann::json;

inline json to_json(const ConfusionCounts& c) {
    return json{{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
}

inline ConfusionCounts confusion_from_json(const json& j) {
    ConfusionCounts c;
    c.tp = j.at("tp").get<std::int64_t>();
    c.fp = j.at("fp").get<std::int64_t>();
    c.fn = j.at("fn").get<std::int64_t>();
    c.tn = j.at("tn").get<std::int64_t>();
    return c;
}

inline json to_json(const EvalReport& r) {
    json j;
    j["seed"] = r.seed;
    j["session"] = {{"precision", r.session.precision},
                    {"recall", r.session.recall},
                    {"accuracy", r.session.accuracy},
                    {"precision_defined", r.session.precision_defined},
                    {"recall_defined", r.session.recall_defined},
                    {"counts", to_json(r.session.counts)}};
    j["clicks"] = {{"precision", r.clicks.precision},
                   {"recall", r.clicks.recall},
                   {"counts", to_json(r.clicks.counts)}};
    j["keystrokes_total"] = r.keystrokes_total;
    j["topk_correct"] = r.topk_correct;
    j["topk_accuracy"] = r.topk_accuracy();
    j["topk_accuracy_by_scenario"] = r.topk_accuracy_by_scenario;
    json ks = json::object();
    for (const auto& [scen, n] : r.keystrokes_by_scenario) ks[scen] = n;
    j["keystrokes_by_scenario"] = ks;
    j["space_confusion"] = to_json(r.space_confusion);
    json words = json::object();
    for (const auto& [len, cell] : r.words_by_length)
        words[std::to_string(len)] = {{"recovered", cell.first}, {"total", cell.second}};
    j["words_by_length"] = words;
    json pins = json::object();
    for (const auto& [attempt, n] : r.passcode_attempts) pins[std::to_string(attempt)] = n;
    j["passcode_attempts"] = pins;
    return j;
}

inline EvalReport report_from_json(const json& j) {
    EvalReport r;
    r.seed = j.at("seed").get<std::uint64_t>();
    const auto& s = j.at("session");
    r.session.precision = s.at("precision").get<double>();
    r.session.recall = s.at("recall").get<double>();
    r.session.accuracy = s.at("accuracy").get<double>();
    r.session.precision_defined = s.at("precision_defined").get<bool>();
    r.session.recall_defined = s.at("recall_defined").get<bool>();
    r.session.counts = confusion_from_json(s.at("counts"));
    const auto& c = j.at("clicks");
    r.clicks.precision = c.at("precision").get<double>();
    r.clicks.recall = c.at("recall").get<double>();
    r.clicks.counts = confusion_from_json(c.at("counts"));
    r.keystrokes_total = j.at("keystrokes_total").get<std::int64_t>();
    r.topk_correct = j.at("topk_correct").get<std::vector<std::int64_t>>();
    r.topk_accuracy_by_scenario =
        j.at("topk_accuracy_by_scenario").get<std::map<std::string, std::vector<double>>>();
    for (const auto& [scen, n] : j.at("keystrokes_by_scenario").items())
        r.keystrokes_by_scenario[scen] = n.get<std::int64_t>();
    r.space_confusion = confusion_from_json(j.at("space_confusion"));
    for (const auto& [len, cell] : j.at("words_by_length").items())
        r.words_by_length[std::stoi(len)] = {cell.at("recovered").get<std::int64_t>(),
                                             cell.at("total").get<std::int64_t>()};
    for (const auto& [attempt, n] : j.at("passcode_attempts").items())
        r.passcode_attempts[std::stoi(attempt)] = n.get<std::int64_t>();
    return r;
}

/// Recovery document: scenario, tokens with ranked guesses, diagnostics.
inline json to_json(const RecoveredText& text) {
    json j;
    j["scenario"] = to_string(text.scenario);
    j["best_text"] = text.best_text();
    j["tokens"] = json::array();
    for (const auto& tok : text.tokens) {
        json t;
        t["kind"] = tok.kind == RecoveredToken::Kind::Word
                        ? "word"
                        : tok.kind == RecoveredToken::Kind::Unknown ? "unknown" : "literal";
        t["first_key"] = tok.first_key;
        t["last_key"] = tok.last_key;
        if (tok.kind == RecoveredToken::Kind::Word) {
            t["guesses"] = json::array();
            for (const auto& g : tok.guesses)
                t["guesses"].push_back(
                    {{"word", g.word}, {"rank", g.rank}, {"attempt", g.attempt}});
        }
        if (tok.kind == RecoveredToken::Kind::Literal) {
            t["lattice"] = json::array();
            for (const auto& c : tok.lattice) {
                json cands = json::array();
                for (const auto& [k, p] : c) cands.push_back({{"key", k}, {"p", p}});
                t["lattice"].push_back(cands);
            }
        }
        j["tokens"].push_back(t);
    }
    if (!text.passcode_guesses.empty()) {
        j["passcode_guesses"] = json::array();
        for (const auto& g : text.passcode_guesses)
            j["passcode_guesses"].push_back({{"digits", g.digits},
                                             {"joint_prob", g.joint_prob},
                                             {"residual", g.residual},
                                             {"rank", g.rank}});
    }
    if (!text.diagnostics.empty()) j["diagnostics"] = text.diagnostics;
    return j;
}

}  // namespace gazetype
