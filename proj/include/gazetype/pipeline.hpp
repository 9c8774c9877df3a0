#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gazetype/clicks.hpp"
#include "gazetype/dictionary.hpp"
#include "gazetype/error.hpp"
#include "gazetype/layout.hpp"
#include "gazetype/mapper.hpp"
#include "gazetype/posterior.hpp"
#include "gazetype/recover.hpp"
#include "gazetype/session.hpp"
#include "gazetype/stability.hpp"
#include "gazetype/synth.hpp"
#include "gazetype/types.hpp"

namespace gazetype {

/// Pipeline-wide parameters. File-backed resources (dictionary, model,
/// layout) are resolved by the caller or CLI before running.
struct PipelineConfig {
    int stability_window = 5;  ///< frames per stability window
    double s_t = kDefaultStabilityThreshold;
    bool estimate_s_t = false;  ///< estimate the threshold from the trace
    double sigma_pitch = kDefaultSigmaPitch;
    int top_k = 5;
    double tol_ms = 300.0;
    int max_attempts = 5;
    std::size_t max_passcode_guesses = 32;
    /// Plane units per key pitch on the passcode keypad; the translation
    /// fit needs a known scale since it never estimates one.
    double pin_pitch_plane = kDefaultKeyPitchPlane;
    std::uint64_t seed = 1;

    std::string dictionary_path;
    std::string layout = "qwerty";
    std::string model_path;

    void validate() const {
        if (top_k < 1) throw ConfigError("top_k must be >= 1");
        if (stability_window < 2) throw ConfigError("stability_window must be >= 2");
        if (!(tol_ms > 0.0)) throw ConfigError("tol_ms must be positive");
        if (!(s_t > 0.0 && s_t < 1.0)) throw ConfigError("s_t must be in (0, 1)");
    }
};

/// Everything the pipeline produced for one typing session.
struct SessionResult {
    TimeSpan span;
    std::vector<FixationEvent> events;
    std::optional<KeyboardFrame> frame;
    std::vector<KeyPosterior> posteriors;
    RecoveredText text;
    double s_t_used = kDefaultStabilityThreshold;
};

struct PipelineResult {
    SessionSegmentation segmentation;
    std::vector<SessionResult> sessions;

    std::size_t total_events() const {
        std::size_t n = 0;
        for (const auto& s : sessions) n += s.events.size();
        return n;
    }

    std::vector<FixationEvent> all_events() const {
        std::vector<FixationEvent> out;
        for (const auto& s : sessions)
            out.insert(out.end(), s.events.begin(), s.events.end());
        return out;
    }
};

namespace pipedetail {

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(std::string(name) + ": " + e.what());
    }
}

inline std::vector<GazeSample> session_frames(const GazeTrace& trace, const TimeSpan& span) {
    std::vector<GazeSample> out;
    for (const auto& s : trace.samples)
        if (s.t_ms >= span.start_ms && s.t_ms <= span.end_ms) out.push_back(s);
    return out;
}

}  // namespace pipedetail

/// Run the full chain on one trace: typing-session detection, keystroke
/// segmentation, keyboard localization, key decoding, text recovery.
///
/// `model` may be null, in which case ground-truth labels are used when
/// present and the whole trace is treated as one typing session otherwise.
inline PipelineResult run_pipeline(const GazeTrace& trace, const PipelineConfig& cfg,
                                   const SessionModel* model, const Dictionary& dict,
                                   const KeyboardLayout& layout) {
    cfg.validate();
    trace.validate();
    PipelineResult result;

    // Stage 1: typing sessions.
    result.segmentation = pipedetail::stage("session-detection", [&] {
        if (model) return classify_sessions(*model, trace);
        SessionSegmentation seg;
        if (trace.has_labels()) {
            seg.frame_labels = trace.labels;
            std::size_t i = 0;
            while (i < trace.samples.size()) {
                std::size_t j = i;
                while (j < trace.samples.size() && trace.labels[j] == trace.labels[i]) ++j;
                LabeledSpan span;
                span.start_ms = trace.samples[i].t_ms;
                span.end_ms =
                    j < trace.samples.size() ? trace.samples[j].t_ms : trace.samples.back().t_ms;
                span.typing = trace.labels[i] == 1;
                seg.spans.push_back(span);
                i = j;
            }
        } else {
            seg.frame_labels.assign(trace.samples.size(), 1);
            seg.spans.push_back({trace.samples.front().t_ms, trace.samples.back().t_ms, true});
        }
        return seg;
    });

    for (const TimeSpan& span : result.segmentation.typing_spans()) {
        SessionResult sr;
        sr.span = span;
        const auto frames = pipedetail::session_frames(trace, span);
        if (frames.size() < static_cast<std::size_t>(cfg.stability_window)) continue;

        // Stage 2: keystroke candidates from the stability trace.
        const StabilityTrace stab = pipedetail::stage(
            "stability", [&] { return stability(std::span<const GazeSample>(frames),
                                                cfg.stability_window); });
        sr.s_t_used = cfg.s_t;
        if (cfg.estimate_s_t) {
            try {
                sr.s_t_used = estimate_threshold({stab});
            } catch (const InsufficientDips&) {
                sr.s_t_used = kDefaultStabilityThreshold;
            }
        }
        sr.events = pipedetail::stage(
            "click-segmentation", [&] { return segment_keystrokes(stab, sr.s_t_used, span); });
        if (sr.events.empty()) {
            result.sessions.push_back(std::move(sr));
            continue;
        }

        if (layout.is_pin()) {
            // Stage 3/4 (passcode): plane normal only, then the translation
            // fit; the boundary is never estimated on the keypad.
            pipedetail::stage("passcode-decode", [&] {
                std::vector<GazeVector> gaze;
                for (const auto& ev : sr.events)
                    for (const auto& s : ev.frames)
                        gaze.push_back(angles_to_unit_vector(s.yaw_deg, s.pitch_deg));
                const PlaneEstimate plane = estimate_plane(gaze);
                std::vector<std::vector<PlanePoint>> groups;
                for (const auto& ev : sr.events) {
                    std::vector<PlanePoint> g;
                    for (const auto& s : ev.frames) {
                        const PlanePoint p = project_to_plane(
                            plane.rotation.apply(angles_to_unit_vector(s.yaw_deg, s.pitch_deg)));
                        g.push_back({p.y / cfg.pin_pitch_plane, p.z / cfg.pin_pitch_plane});
                    }
                    groups.push_back(std::move(g));
                }
                // Candidates for classification come from the fitted points.
                const auto pooled_fit = fit_passcode(
                    [&] {
                        std::vector<PlanePoint> pooled;
                        for (const auto& g : groups)
                            pooled.insert(pooled.end(), g.begin(), g.end());
                        return pooled;
                    }(),
                    layout);
                for (std::size_t i = 0; i < groups.size(); ++i) {
                    std::vector<PlanePoint> shifted;
                    for (const auto& p : groups[i])
                        shifted.push_back({p.y + pooled_fit.ty, p.z + pooled_fit.tz});
                    KeyPosterior post =
                        key_posterior_from_points(shifted, layout, cfg.sigma_pitch, cfg.top_k);
                    post.event_index = i;
                    sr.posteriors.push_back(std::move(post));
                }
                RecoverConfig rc;
                rc.max_attempts = cfg.max_attempts;
                rc.max_passcode_guesses = cfg.max_passcode_guesses;
                sr.text = recover_text(to_candidates(sr.posteriors, layout), dict, layout, rc,
                                       &groups);
                return 0;
            });
        } else {
            // Stage 3: keyboard localization.
            sr.frame = pipedetail::stage(
                "keyboard-mapping", [&] { return fit_keyboard_frame(sr.events, layout,
                                                                    cfg.sigma_pitch); });
            // Stage 4: per-keystroke posteriors.
            sr.posteriors = pipedetail::stage("key-decoding", [&] {
                return decode_topk(sr.events, *sr.frame, cfg.top_k, cfg.sigma_pitch);
            });
            // Stage 5: text recovery.
            sr.text = pipedetail::stage("text-recovery", [&] {
                RecoverConfig rc;
                rc.max_attempts = cfg.max_attempts;
                rc.max_passcode_guesses = cfg.max_passcode_guesses;
                return recover_text(to_candidates(sr.posteriors, layout), dict, layout, rc);
            });
        }
        result.sessions.push_back(std::move(sr));
    }
    return result;
}

}  // namespace gazetype
