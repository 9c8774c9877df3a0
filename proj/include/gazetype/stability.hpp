#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gazetype/error.hpp"
#include "gazetype/geometry.hpp"
#include "gazetype/types.hpp"

namespace gazetype {

/// Windowed gaze stability: for each window start n over N frames,
///
///   S(n) = (1/N^2) * sum_i sum_j cos(angle between gaze i and gaze j)
///
/// computed over [n, n+N-1]. Since cos(angle_ij) is the dot product of the
/// unit gaze vectors, the double sum collapses to |sum of unit vectors|^2,
/// which gets evaluated in O(N) per window instead of O(N^2).
struct StabilityTrace {
    std::vector<double> values;      ///< S(n), one per window start; each <= 1
    int window = 0;                  ///< N, frames per window
    std::vector<GazeSample> frames;  ///< the analyzed segment (values.size() == frames.size() - N + 1)

    std::size_t size() const { return values.size(); }

    /// Time of the window's center frame; dip times are reported here.
    double center_time_ms(std::size_t n) const {
        return frames[n + static_cast<std::size_t>(window - 1) / 2].t_ms;
    }
};

inline StabilityTrace stability(std::span<const GazeSample> segment, int window) {
    if (window < 2) throw SegmentTooShort("stability window must be >= 2 frames");
    if (segment.size() < static_cast<std::size_t>(window))
        throw SegmentTooShort("segment shorter than stability window");

    std::vector<GazeVector> dirs(segment.size());
    for (std::size_t i = 0; i < segment.size(); ++i)
        dirs[i] = angles_to_unit_vector(segment[i].yaw_deg, segment[i].pitch_deg);

    StabilityTrace out;
    out.window = window;
    out.frames.assign(segment.begin(), segment.end());
    out.values.resize(segment.size() - window + 1);
    const double inv_n2 = 1.0 / (double(window) * double(window));
    for (std::size_t n = 0; n < out.values.size(); ++n) {
        GazeVector sum{0.0, 0.0, 0.0};
        for (int k = 0; k < window; ++k) sum = sum + dirs[n + k];
        // Rounding can push |sum|^2 a hair past N^2 when all directions
        // coincide; S is capped so the S <= 1 invariant holds exactly.
        out.values[n] = std::min(1.0, sum.dot(sum) * inv_n2);
    }
    return out;
}

inline StabilityTrace stability(const GazeTrace& trace, int window) {
    return stability(std::span<const GazeSample>(trace.samples), window);
}

}  // namespace gazetype
