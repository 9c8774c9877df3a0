#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gazetype/error.hpp"
#include "gazetype/geometry.hpp"
#include "gazetype/layout.hpp"
#include "gazetype/random.hpp"
#include "gazetype/types.hpp"

namespace gazetype {

/// Default plane units (at unit viewing distance) per key pitch; about
/// 2.9 degrees of gaze per key column.
inline constexpr double kDefaultKeyPitchPlane = 0.07;

/// Default synthetic sampling rate.
inline constexpr double kDefaultSampleRateHz = 30.0;

/// Behavioral parameters of the simulated typist.
struct TypistProfile {
    double fixation_ms_lo = 600.0, fixation_ms_hi = 1200.0;
    double saccade_ms_lo = 50.0, saccade_ms_hi = 100.0;
    double noise_deg = 0.5;            ///< per-frame angular jitter (yaw and pitch)
    double blink_rate_typing = 1.0 / 40.0;  ///< blinks per second while typing
    double blink_rate_other = 1.0 / 7.0;    ///< blinks per second otherwise
    double micro_adjust_prob = 0.3;
    double micro_adjust_pitch_units = 0.3;  ///< corrective hop, in key pitches
    double proficiency_drift = 0.02;   ///< per-sentence noise shrink
    double proficiency_floor = 0.6;

    double effective_noise_deg(int sentence_index) const {
        const double f = std::max(proficiency_floor, 1.0 - proficiency_drift * sentence_index);
        return noise_deg * f;
    }

    static TypistProfile zero_noise() {
        TypistProfile p;
        p.noise_deg = 0.0;
        p.micro_adjust_prob = 0.0;
        return p;
    }
};

/// Where the keyboard sits and where the recording camera is.
struct SceneConfig {
    double keyboard_yaw_deg = 0.0;
    double keyboard_pitch_deg = -15.0;
    double key_pitch_plane = kDefaultKeyPitchPlane;
    double roll_deg = 0.0;        ///< keyboard rotation about its own normal
    double camera_yaw_deg = 0.0;  ///< virtual camera offset, |yaw| <= 55
    double camera_pitch_deg = 0.0;  ///< |pitch| <= 60
    double sample_rate_hz = kDefaultSampleRateHz;

    void validate() const {
        if (std::fabs(camera_yaw_deg) > 55.0 || std::fabs(camera_pitch_deg) > 60.0)
            throw ConfigError("camera offset outside the +/-55, +/-60 degree envelope");
        if (!(sample_rate_hz > 0.0)) throw ConfigError("sample rate must be positive");
        if (!(key_pitch_plane > 0.0)) throw ConfigError("key pitch must be positive");
    }
};

/// True geometry of a synthetic scene: key directions and the exact
/// rotation mapping gaze onto keyboard-plane coordinates. Tests use this
/// as the ground-truth frame the pipeline is supposed to recover.
struct SceneGeometry {
    GazeVector center;
    GazeVector e_horizontal;  ///< unit, along increasing layout y
    GazeVector e_vertical;    ///< unit, along increasing layout z
    double pitch_plane = kDefaultKeyPitchPlane;
    double layout_cy = 0.0, layout_cz = 0.0;
    Rotation camera;

    static SceneGeometry from(const SceneConfig& scene, const KeyboardLayout& layout) {
        scene.validate();
        SceneGeometry g;
        g.center = angles_to_unit_vector(scene.keyboard_yaw_deg, scene.keyboard_pitch_deg);
        GazeVector up{0.0, 0.0, 1.0};
        GazeVector ey = up.cross(g.center);
        if (ey.norm() < 1e-9) ey = {0.0, 1.0, 0.0};
        ey = ey.normalized() * -1.0;  // layout y grows to the user's right
        GazeVector ez = g.center.cross(ey).normalized();
        if (ez.z < 0.0) {
            ez = ez * -1.0;
            ey = ey * -1.0;
        }
        const Rotation roll = rotation_about_axis(g.center, deg_to_rad(scene.roll_deg));
        g.e_horizontal = roll.apply(ey);
        g.e_vertical = roll.apply(ez);
        g.pitch_plane = scene.key_pitch_plane;
        g.layout_cy = 0.5 * (layout.anchor_y_lo + layout.anchor_y_hi);
        g.layout_cz = 0.5 * (layout.anchor_z_lo + layout.anchor_z_hi);
        g.camera = camera_rotation(scene.camera_yaw_deg, scene.camera_pitch_deg);
        return g;
    }

    /// Direction of a point given in layout key-pitch coordinates.
    GazeVector direction(double ly, double lz) const {
        const GazeVector v = center + e_horizontal * ((ly - layout_cy) * pitch_plane) +
                             e_vertical * ((lz - layout_cz) * pitch_plane);
        return v.normalized();
    }

    GazeVector key_direction(const KeyInfo& k) const { return direction(k.cy, k.cz); }

    /// Exact plane point (pre-camera) of a direction, in layout units.
    PlanePoint true_layout_point(const GazeVector& dir) const {
        const double x = dir.dot(center);
        const double y = dir.dot(e_horizontal) / x / pitch_plane + layout_cy;
        const double z = dir.dot(e_vertical) / x / pitch_plane + layout_cz;
        return {y, z};
    }
};

/// Text-to-keystroke expansion. Characters missing from the active board
/// are reached through the NUM/ABC toggle keys; unknown characters throw.
inline std::vector<std::string> text_to_keys(const std::string& text,
                                             const KeyboardLayout& start_layout) {
    auto char_key = [](char c) -> std::string {
        if (c == ' ') return "SPACE";
        if (c == '\n') return "RETURN";
        if (c == '\b') return "BACKSPACE";
        if (c == ',') return "COMMA";
        return std::string(1, c);
    };
    if (start_layout.is_pin()) {
        std::vector<std::string> keys;
        for (char c : text) {
            const std::string id = char_key(c);
            if (start_layout.index_of(id) < 0)
                throw UnmappableCharacter("character '" + std::string(1, c) +
                                          "' not on the passcode keypad");
            keys.push_back(id);
        }
        return keys;
    }

    const KeyboardLayout qw = layouts::qwerty();
    const KeyboardLayout ns = layouts::numberspace();
    const KeyboardLayout* active = start_layout.name == "numberspace" ? &ns : &qw;
    std::vector<std::string> keys;
    for (char c : text) {
        const std::string id = char_key(c);
        if (id == "SPACE" || id == "RETURN" || id == "BACKSPACE") {
            keys.push_back(id);
            continue;
        }
        if (active->index_of(id) >= 0) {
            keys.push_back(id);
            continue;
        }
        const KeyboardLayout* other = active == &qw ? &ns : &qw;
        if (other->index_of(id) < 0)
            throw UnmappableCharacter("character '" + std::string(1, c) +
                                      "' not on any keyboard");
        keys.push_back(active == &qw ? "NUM" : "ABC");
        active = other;
        keys.push_back(id);
    }
    return keys;
}

namespace synthdetail {

/// Minimum-jerk position profile on [0, 1].
inline double min_jerk(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }

/// Accumulates frames; EAR bumps are painted afterwards.
struct TraceBuilder {
    double dt_ms;
    double t = 0.0;
    GazeTrace trace;
    std::vector<double> blink_times;

    explicit TraceBuilder(double rate_hz) : dt_ms(1000.0 / rate_hz) {}

    void push(const GazeVector& dir, int label, const Rotation& camera, Rng& rng,
              double noise_deg) {
        GazeSample s;
        s.t_ms = t;
        double yaw, pitch;
        unit_vector_to_angles(camera.apply(dir), yaw, pitch);
        if (noise_deg > 0.0) {
            yaw += rng.normal(0.0, noise_deg);
            pitch += rng.normal(0.0, noise_deg);
        }
        s.yaw_deg = std::clamp(yaw, -kMaxYawDeg, kMaxYawDeg);
        s.pitch_deg = std::clamp(pitch, -kMaxPitchDeg, kMaxPitchDeg);
        s.ear = 1.0;
        trace.samples.push_back(s);
        trace.labels.push_back(label);
        t += dt_ms;
    }

    /// Poisson blink schedule over [t0, t1), painted as Gaussian EAR bumps
    /// peaking at 3.0 over about 150 ms (the eye-width/height ratio spikes
    /// while the lids close).
    void schedule_blinks(double t0, double t1, double rate_per_s, Rng& rng) {
        if (rate_per_s <= 0.0) return;
        double t_next = t0 + rng.exponential(rate_per_s) * 1000.0;
        while (t_next < t1) {
            blink_times.push_back(t_next);
            t_next += rng.exponential(rate_per_s) * 1000.0;
        }
    }

    void paint_blinks() {
        const double sigma_ms = 37.5;  // ~150 ms visible excursion
        for (double tb : blink_times) {
            const std::size_t lo = static_cast<std::size_t>(
                std::max(0.0, std::floor((tb - 4 * sigma_ms) / dt_ms)));
            for (std::size_t i = lo; i < trace.samples.size(); ++i) {
                const double dt = trace.samples[i].t_ms - tb;
                if (dt > 4 * sigma_ms) break;
                trace.samples[i].ear += 2.0 * std::exp(-dt * dt / (2.0 * sigma_ms * sigma_ms));
            }
        }
    }
};

}  // namespace synthdetail

/// Generate one gaze-typing session with exact ground truth. The trace
/// starts at the saccade into the first key and ends when the last key's
/// fixation ends; every frame is labeled typing.
///
/// With zero noise and micro-adjustments off, each fixation's projected
/// plane point sits exactly on its key center, so the whole pipeline can
/// be checked for exact inversion.
inline GazeTrace generate_typing_trace(const std::string& text, const KeyboardLayout& layout,
                                       const TypistProfile& profile, const SceneConfig& scene,
                                       std::uint64_t seed, int sentence_index = 0,
                                       std::optional<double> target_duration_ms = {}) {
    const SceneGeometry geo = SceneGeometry::from(scene, layout);
    const auto keys = text_to_keys(text, layout);
    if (keys.empty()) throw UnmappableCharacter("empty text");

    Rng rng(seed);
    const double noise = profile.effective_noise_deg(sentence_index);

    // Pre-draw the per-keystroke schedule so a duration target can rescale
    // fixations without touching the saccade draws.
    struct Step {
        double saccade_ms, fixation_ms;
        bool micro;
        double micro_at_ms, micro_dy, micro_dz;
    };
    std::vector<Step> steps;
    double fixation_total = 0.0, saccade_total = 0.0;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        Step st;
        st.saccade_ms = rng.uniform(profile.saccade_ms_lo, profile.saccade_ms_hi);
        st.fixation_ms = rng.uniform(profile.fixation_ms_lo, profile.fixation_ms_hi);
        st.micro = rng.bernoulli(profile.micro_adjust_prob);
        st.micro_at_ms = rng.uniform(100.0, 300.0);
        const double ang = rng.uniform(0.0, 2.0 * M_PI);
        st.micro_dy = std::cos(ang) * profile.micro_adjust_pitch_units;
        st.micro_dz = std::sin(ang) * profile.micro_adjust_pitch_units;
        fixation_total += st.fixation_ms;
        saccade_total += st.saccade_ms;
        steps.push_back(st);
    }
    if (target_duration_ms && fixation_total > 0.0) {
        const double want = *target_duration_ms - saccade_total;
        if (want > 0.0) {
            const double k = want / fixation_total;
            for (auto& st : steps) st.fixation_ms *= k;
        }
    }

    synthdetail::TraceBuilder tb(scene.sample_rate_hz);
    GazeVector current = geo.direction(geo.layout_cy, geo.layout_cz);
    const KeyboardLayout qw = layouts::qwerty();
    const KeyboardLayout ns = layouts::numberspace();
    auto key_info = [&](const std::string& id) -> const KeyInfo* {
        if (const KeyInfo* k = layout.find(id)) return k;
        if (const KeyInfo* k = qw.find(id)) return k;
        return ns.find(id);
    };

    for (std::size_t i = 0; i < keys.size(); ++i) {
        const KeyInfo* k = key_info(keys[i]);
        if (!k) throw UnmappableCharacter("key '" + keys[i] + "' not found");
        const GazeVector target = geo.key_direction(*k);
        const Step& st = steps[i];

        const double sacc_start = tb.t;
        while (tb.t < sacc_start + st.saccade_ms) {
            const double s = synthdetail::min_jerk((tb.t - sacc_start) / st.saccade_ms);
            const GazeVector dir = (current * (1.0 - s) + target * s).normalized();
            tb.push(dir, 1, geo.camera, rng, noise);
        }
        current = target;

        const double fix_start = tb.t;
        const double fix_end = fix_start + st.fixation_ms;
        GazeVector dwell = current;
        bool adjusted = false;
        while (tb.t < fix_end) {
            if (st.micro && !adjusted && tb.t - fix_start >= st.micro_at_ms) {
                dwell = geo.direction(geo.true_layout_point(current).y + st.micro_dy,
                                      geo.true_layout_point(current).z + st.micro_dz);
                adjusted = true;
            }
            tb.push(dwell, 1, geo.camera, rng, noise);
        }
        current = dwell;
        // The click confirms the dwelled key just before the next saccade.
        tb.trace.keystrokes.push_back({std::max(fix_start, tb.t - tb.dt_ms), keys[i]});
    }

    tb.schedule_blinks(0.0, tb.t, profile.blink_rate_typing, rng);
    tb.paint_blinks();
    tb.trace.sample_rate_hz = scene.sample_rate_hz;
    tb.trace.validate();
    return tb.trace;
}

/// Erratic non-typing gaze: jumps to random targets across a wide angular
/// range with short dwells and the higher resting blink rate.
inline GazeTrace generate_distractor_trace(double duration_ms, const TypistProfile& profile,
                                           std::uint64_t seed,
                                           double sample_rate_hz = kDefaultSampleRateHz) {
    if (!(duration_ms > 0.0)) throw ConfigError("duration must be positive");
    Rng rng(seed);
    synthdetail::TraceBuilder tb(sample_rate_hz);
    const double wander_noise = std::max(profile.noise_deg, 1.0);

    GazeVector current = angles_to_unit_vector(rng.uniform(-100.0, 100.0),
                                               rng.uniform(-50.0, 50.0));
    while (tb.t < duration_ms) {
        const GazeVector target = angles_to_unit_vector(rng.uniform(-100.0, 100.0),
                                                        rng.uniform(-50.0, 50.0));
        const double sacc_ms = rng.uniform(profile.saccade_ms_lo, profile.saccade_ms_hi);
        const double sacc_start = tb.t;
        while (tb.t < std::min(sacc_start + sacc_ms, duration_ms)) {
            const double s = synthdetail::min_jerk((tb.t - sacc_start) / sacc_ms);
            tb.push((current * (1.0 - s) + target * s).normalized(), 0, Rotation{}, rng,
                    wander_noise);
        }
        current = target;
        const double dwell_end = std::min(tb.t + rng.uniform(300.0, 800.0), duration_ms);
        while (tb.t < dwell_end) tb.push(current, 0, Rotation{}, rng, wander_noise);
    }
    tb.schedule_blinks(0.0, tb.t, profile.blink_rate_other, rng);
    tb.paint_blinks();
    tb.trace.sample_rate_hz = sample_rate_hz;
    tb.trace.validate();
    return tb.trace;
}

/// One building block of a composed scenario.
struct ScenarioSegment {
    enum class Kind { Typing, Distractor } kind = Kind::Distractor;
    std::string text;                 // typing only
    std::string layout = "qwerty";    // typing only
    double duration_ms = 10000.0;     // distractor, or typing duration target
    bool has_duration_target = false; // typing: rescale fixations to match
    int sentence_index = 0;

    static ScenarioSegment typing(std::string txt, std::string kb = "qwerty",
                                  std::optional<double> target_ms = {}) {
        ScenarioSegment s;
        s.kind = Kind::Typing;
        s.text = std::move(txt);
        s.layout = std::move(kb);
        if (target_ms) {
            s.duration_ms = *target_ms;
            s.has_duration_target = true;
        }
        return s;
    }

    static ScenarioSegment distractor(double ms) {
        ScenarioSegment s;
        s.kind = Kind::Distractor;
        s.duration_ms = ms;
        return s;
    }
};

/// Concatenate typing and distractor segments into one continuous trace
/// with merged labels and keystroke ground truth.
inline GazeTrace compose_scenario(const std::vector<ScenarioSegment>& segments,
                                  const TypistProfile& profile, const SceneConfig& scene,
                                  std::uint64_t seed) {
    if (segments.empty()) throw ConfigError("scenario needs at least one segment");
    Rng seeder(seed);
    GazeTrace out;
    out.sample_rate_hz = scene.sample_rate_hz;
    const double dt = 1000.0 / scene.sample_rate_hz;
    double offset = 0.0;
    for (const auto& seg : segments) {
        const std::uint64_t child_seed = seeder.next_u64();
        GazeTrace part;
        if (seg.kind == ScenarioSegment::Kind::Typing) {
            part = generate_typing_trace(
                seg.text, resolve_layout(seg.layout), profile, scene, child_seed,
                seg.sentence_index,
                seg.has_duration_target ? std::optional<double>(seg.duration_ms) : std::nullopt);
        } else {
            part = generate_distractor_trace(seg.duration_ms, profile, child_seed,
                                             scene.sample_rate_hz);
        }
        for (std::size_t i = 0; i < part.samples.size(); ++i) {
            GazeSample s = part.samples[i];
            s.t_ms += offset;
            out.samples.push_back(s);
            out.labels.push_back(part.labels[i]);
        }
        for (auto k : part.keystrokes) {
            k.t_ms += offset;
            out.keystrokes.push_back(k);
        }
        offset = out.samples.back().t_ms + dt;
    }
    out.validate();
    return out;
}

}  // namespace gazetype
