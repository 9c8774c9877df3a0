#pragma once

#include <map>
#include <string>
#include <vector>

#include "gazetype/clicks.hpp"
#include "gazetype/metrics.hpp"
#include "gazetype/pipeline.hpp"
#include "gazetype/recover.hpp"

namespace gazetype {

/// One evaluation case: a trace with full ground truth.
struct EvalSample {
    GazeTrace trace;              ///< labels and keystrokes must be present
    std::string expected_text;    ///< typed text ("" when unknown)
    std::string layout = "qwerty";
};

/// Aggregated evaluation report. All rates live in [0, 1]; confusion
/// counts add up to the keystrokes they were computed over.
struct EvalReport {
    std::uint64_t seed = 0;

    SessionMetrics session;
    ClickMetrics clicks;

    /// topk_correct[k-1] / keystrokes_total = top-(k) accuracy.
    std::vector<std::int64_t> topk_correct;
    std::int64_t keystrokes_total = 0;
    std::map<std::string, std::vector<double>> topk_accuracy_by_scenario;
    std::map<std::string, std::int64_t> keystrokes_by_scenario;

    ConfusionCounts space_confusion;

    /// word length -> (recovered within max_attempts, total)
    std::map<int, std::pair<std::int64_t, std::int64_t>> words_by_length;

    /// attempts needed per passcode; 0 means missed entirely.
    std::map<int, std::int64_t> passcode_attempts;

    std::vector<double> topk_accuracy() const {
        std::vector<double> acc(topk_correct.size(), 0.0);
        for (std::size_t i = 0; i < topk_correct.size(); ++i)
            acc[i] = keystrokes_total > 0 ? double(topk_correct[i]) / double(keystrokes_total)
                                          : 0.0;
        return acc;
    }

    double word_accuracy() const {
        std::int64_t ok = 0, total = 0;
        for (const auto& [len, c] : words_by_length) {
            ok += c.first;
            total += c.second;
        }
        return total > 0 ? double(ok) / double(total) : 0.0;
    }
};

namespace evaldetail {

/// Greedy event/keystroke matching, returning per-truth-key event indices
/// (-1 when unmatched). Mirrors the click metric matching.
inline std::vector<int> match_events(const std::vector<FixationEvent>& events,
                                     const std::vector<KeystrokeLabel>& truth, double tol_ms) {
    struct Pair {
        double dist;
        std::size_t ev, key;
    };
    std::vector<Pair> pairs;
    for (std::size_t e = 0; e < events.size(); ++e) {
        for (std::size_t k = 0; k < truth.size(); ++k) {
            const double t = truth[k].t_ms;
            double dist = 0.0;
            if (t < events[e].start_ms)
                dist = events[e].start_ms - t;
            else if (t > events[e].end_ms)
                dist = t - events[e].end_ms;
            if (dist <= tol_ms) pairs.push_back({dist, e, k});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.key != b.key) return a.key < b.key;
        return a.ev < b.ev;
    });
    std::vector<int> match(truth.size(), -1);
    std::vector<bool> ev_used(events.size(), false);
    for (const auto& p : pairs) {
        if (ev_used[p.ev] || match[p.key] >= 0) continue;
        ev_used[p.ev] = true;
        match[p.key] = static_cast<int>(p.ev);
    }
    return match;
}

inline std::vector<std::string> split_words(const std::string& text) {
    std::vector<std::string> words;
    std::string cur;
    for (char c : text) {
        if (c == ' ') {
            if (!cur.empty()) words.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) words.push_back(cur);
    return words;
}

}  // namespace evaldetail

/// Evaluate the pipeline over a labeled dataset: session and click
/// detection metrics, top-K key accuracy (overall and per scenario), the
/// SPACE confusion matrix from chosen segmentations, word recovery by
/// length, and the passcode attempts histogram.
inline EvalReport evaluate(const std::vector<EvalSample>& dataset, const PipelineConfig& cfg,
                           const SessionModel* model, const Dictionary& dict) {
    EvalReport report;
    report.seed = cfg.seed;
    report.topk_correct.assign(cfg.top_k, 0);

    for (const auto& sample : dataset) {
        if (!sample.trace.has_labels() || sample.trace.keystrokes.empty())
            throw MissingGroundTruth("every evaluation trace needs labels and keystrokes");
        const KeyboardLayout layout = resolve_layout(sample.layout);
        const PipelineResult run = run_pipeline(sample.trace, cfg, model, dict, layout);

        // Frame-level session metrics accumulate across traces.
        const auto frame_counts =
            frame_confusion(run.segmentation.frame_labels, sample.trace.labels);
        report.session.counts.tp += frame_counts.tp;
        report.session.counts.fp += frame_counts.fp;
        report.session.counts.fn += frame_counts.fn;
        report.session.counts.tn += frame_counts.tn;

        const auto events = run.all_events();
        const auto click_counts = click_confusion(events, sample.trace.keystrokes, cfg.tol_ms);
        report.clicks.counts.tp += click_counts.tp;
        report.clicks.counts.fp += click_counts.fp;
        report.clicks.counts.fn += click_counts.fn;

        // Gather posteriors in event order for top-K accounting.
        std::vector<const KeyPosterior*> by_event(events.size(), nullptr);
        std::vector<const KeyboardLayout*> layout_of(events.size(), nullptr);
        {
            std::size_t base = 0;
            for (const auto& sr : run.sessions) {
                for (const auto& post : sr.posteriors) {
                    if (base + post.event_index < by_event.size()) {
                        by_event[base + post.event_index] = &post;
                        layout_of[base + post.event_index] =
                            sr.frame ? &sr.frame->layout : &layout;
                    }
                }
                base += sr.events.size();
            }
        }

        const std::string scenario =
            run.sessions.empty() ? "message" : to_string(run.sessions.front().text.scenario);
        auto& scen_acc = report.topk_accuracy_by_scenario[scenario];
        if (scen_acc.empty()) scen_acc.assign(cfg.top_k, 0.0);
        auto& scen_total = report.keystrokes_by_scenario[scenario];

        const auto match = evaldetail::match_events(events, sample.trace.keystrokes, cfg.tol_ms);
        for (std::size_t k = 0; k < sample.trace.keystrokes.size(); ++k) {
            ++report.keystrokes_total;
            ++scen_total;
            const int ev = match[k];
            if (ev < 0 || !by_event[ev]) continue;
            const auto& post = *by_event[ev];
            const auto& kb = *layout_of[ev];
            for (int j = 0; j < static_cast<int>(post.top.size()); ++j) {
                if (kb.keys[post.top[j].first].id == sample.trace.keystrokes[k].key) {
                    for (int kk = j; kk < cfg.top_k; ++kk) {
                        ++report.topk_correct[kk];
                        scen_acc[kk] += 1.0;
                    }
                    break;
                }
            }
        }

        // SPACE confusion over matched keystrokes of message sessions.
        for (const auto& sr : run.sessions) {
            if (sr.text.scenario != Scenario::Message) continue;
            std::vector<bool> is_boundary(sr.events.size(), false);
            for (const auto& tok : sr.text.tokens)
                if (tok.last_key < sr.events.size() &&
                    tok.kind != RecoveredToken::Kind::Literal)
                    is_boundary[tok.last_key] = true;
            // Map session-local event index to global index.
            std::size_t base = 0;
            for (const auto& other : run.sessions) {
                if (&other == &sr) break;
                base += other.events.size();
            }
            for (std::size_t k = 0; k < sample.trace.keystrokes.size(); ++k) {
                const int ev = match[k];
                if (ev < 0 || static_cast<std::size_t>(ev) < base ||
                    static_cast<std::size_t>(ev) >= base + sr.events.size())
                    continue;
                const bool truth_space = sample.trace.keystrokes[k].key == "SPACE";
                const bool pred_space = is_boundary[ev - base];
                if (truth_space && pred_space)
                    ++report.space_confusion.tp;
                else if (!truth_space && pred_space)
                    ++report.space_confusion.fp;
                else if (truth_space && !pred_space)
                    ++report.space_confusion.fn;
                else
                    ++report.space_confusion.tn;
            }
        }

        // Word recovery by length, against the expected text.
        if (!sample.expected_text.empty() && !run.sessions.empty()) {
            const auto& sr = run.sessions.front();
            if (sr.text.scenario == Scenario::Message) {
                const auto truth_words = evaldetail::split_words(sample.expected_text);
                std::vector<const RecoveredToken*> word_tokens;
                for (const auto& tok : sr.text.tokens)
                    if (tok.kind != RecoveredToken::Kind::Literal) word_tokens.push_back(&tok);
                for (std::size_t w = 0; w < truth_words.size(); ++w) {
                    const int len = static_cast<int>(truth_words[w].size());
                    auto& cell = report.words_by_length[len];
                    ++cell.second;
                    if (w < word_tokens.size() &&
                        word_tokens[w]->kind == RecoveredToken::Kind::Word) {
                        for (const auto& g : word_tokens[w]->guesses) {
                            if (g.word == truth_words[w]) {
                                ++cell.first;
                                break;
                            }
                        }
                    }
                }
            } else if (sr.text.scenario == Scenario::Passcode) {
                int attempt = 0;
                for (const auto& g : sr.text.passcode_guesses) {
                    if (g.digits == sample.expected_text) {
                        attempt = g.rank;
                        break;
                    }
                }
                ++report.passcode_attempts[attempt];
            }
        }
    }

    report.session.precision = report.session.counts.precision();
    report.session.recall = report.session.counts.recall();
    report.session.accuracy = report.session.counts.accuracy();
    report.session.precision_defined = !report.session.counts.undefined_precision();
    report.session.recall_defined = !report.session.counts.undefined_recall();
    report.clicks.precision = report.clicks.counts.precision();
    report.clicks.recall = report.clicks.counts.recall();
    for (auto& [scen, acc] : report.topk_accuracy_by_scenario) {
        const auto total = report.keystrokes_by_scenario[scen];
        for (auto& a : acc) a = total > 0 ? a / double(total) : 0.0;
    }
    return report;
}

}  // namespace gazetype
