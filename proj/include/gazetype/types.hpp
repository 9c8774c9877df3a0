#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gazetype/error.hpp"

namespace gazetype {

/// Model output range for gaze angles; samples outside are rejected at ingest.
inline constexpr double kMaxYawDeg = 120.0;
inline constexpr double kMaxPitchDeg = 70.0;

/// One frame of gaze telemetry. Angles stay in degrees at this boundary;
/// conversion to radians happens in geometry.hpp only.
struct GazeSample {
    double t_ms = 0.0;       ///< milliseconds since trace start
    double yaw_deg = 0.0;    ///< |yaw| <= 120
    double pitch_deg = 0.0;  ///< |pitch| <= 70
    double ear = 1.0;        ///< eye aspect ratio (width / height), > 0
};

inline bool sample_in_range(const GazeSample& s) {
    return std::isfinite(s.t_ms) && s.t_ms >= 0.0 && std::isfinite(s.yaw_deg) &&
           std::isfinite(s.pitch_deg) && std::isfinite(s.ear) &&
           std::fabs(s.yaw_deg) <= kMaxYawDeg && std::fabs(s.pitch_deg) <= kMaxPitchDeg &&
           s.ear > 0.0;
}

/// Ground-truth keystroke: the time of the click and the key identifier.
struct KeystrokeLabel {
    double t_ms = 0.0;
    std::string key;
};

/// An ordered gaze sample sequence. Immutable by convention after
/// construction; use validate() after building one by hand.
struct GazeTrace {
    std::vector<GazeSample> samples;
    double sample_rate_hz = 0.0;            ///< nominal; derived from timestamps on load
    std::vector<int> labels;                ///< optional; 0 = other, 1 = typing; one per sample
    std::vector<KeystrokeLabel> keystrokes; ///< optional ground truth

    bool has_labels() const { return !labels.empty(); }

    double duration_ms() const {
        return samples.empty() ? 0.0 : samples.back().t_ms - samples.front().t_ms;
    }

    void validate() const {
        if (samples.empty()) throw ParseError("trace has no samples");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!sample_in_range(samples[i]))
                throw ParseError("sample out of range at index " + std::to_string(i));
            if (i > 0 && samples[i].t_ms <= samples[i - 1].t_ms)
                throw NonMonotonicTimestamps("timestamps not strictly increasing at index " +
                                             std::to_string(i));
        }
        if (!labels.empty() && labels.size() != samples.size())
            throw LengthMismatch("label count != sample count");
    }
};

/// Estimate the nominal sample rate from median frame spacing.
inline double infer_sample_rate_hz(const std::vector<GazeSample>& samples) {
    if (samples.size() < 2) return 0.0;
    std::vector<double> dt;
    dt.reserve(samples.size() - 1);
    for (std::size_t i = 1; i < samples.size(); ++i)
        dt.push_back(samples[i].t_ms - samples[i - 1].t_ms);
    std::nth_element(dt.begin(), dt.begin() + dt.size() / 2, dt.end());
    const double median = dt[dt.size() / 2];
    return median > 0.0 ? 1000.0 / median : 0.0;
}

/// Unit gaze direction in the head/camera frame.
struct GazeVector {
    double x = 1.0, y = 0.0, z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }

    GazeVector normalized() const {
        const double n = norm();
        return {x / n, y / n, z / n};
    }

    double dot(const GazeVector& o) const { return x * o.x + y * o.y + z * o.z; }

    GazeVector cross(const GazeVector& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }

    GazeVector operator+(const GazeVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
    GazeVector operator-(const GazeVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
    GazeVector operator*(double s) const { return {x * s, y * s, z * s}; }
};

/// Gaze intersection with the keyboard plane, in units of the
/// user-to-plane distance along x.
struct PlanePoint {
    double y = 0.0;
    double z = 0.0;
};

/// Half-open time span [start_ms, end_ms).
struct TimeSpan {
    double start_ms = 0.0;
    double end_ms = 0.0;

    double duration_ms() const { return end_ms - start_ms; }
    bool contains(double t) const { return t >= start_ms && t < end_ms; }
};

/// A segmented keystroke candidate: one fixation and its member frames.
struct FixationEvent {
    double start_ms = 0.0;
    double end_ms = 0.0;
    std::vector<GazeSample> frames;
};

}  // namespace gazetype
