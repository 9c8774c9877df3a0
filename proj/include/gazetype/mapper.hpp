#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gazetype/error.hpp"
#include "gazetype/gaussian.hpp"
#include "gazetype/geometry.hpp"
#include "gazetype/layout.hpp"
#include "gazetype/types.hpp"

namespace gazetype {

/// Default keystroke-averaging Gaussian width: half the key radius, with
/// the key radius taken as half the pitch.
inline constexpr double kDefaultSigmaPitch = 0.25;

/// Keyboard plane: mean-gaze normal and the rotation aligning it with +x.
struct PlaneEstimate {
    GazeVector normal;
    Rotation rotation;
};

inline PlaneEstimate estimate_plane(const std::vector<GazeVector>& gaze) {
    if (gaze.size() < 2) throw DegenerateGaze("need at least 2 gaze directions");
    GazeVector mean{0.0, 0.0, 0.0};
    for (const auto& v : gaze) mean = mean + v;
    mean = mean * (1.0 / double(gaze.size()));
    if (mean.norm() < 1e-9)
        throw DegenerateGaze("mean gaze direction is near zero; no plane normal");
    PlaneEstimate est;
    est.normal = mean.normalized();
    est.rotation = rotation_between(est.normal, {1.0, 0.0, 0.0});
    return est;
}

/// 2x2 orthonormal axes: columns are covariance eigenvectors in
/// descending eigenvalue order. Column 0 is the horizontal (dominant)
/// keyboard direction.
struct PcaAxes {
    // Column major: v0 = (a, b), v1 = (c, d).
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
    double eig0 = 0.0, eig1 = 0.0;

    /// p' = V^T p
    PlanePoint transform(const PlanePoint& p) const {
        return {a * p.y + b * p.z, c * p.y + d * p.z};
    }

    /// p = V p'
    PlanePoint inverse(const PlanePoint& q) const {
        return {a * q.y + c * q.z, b * q.y + d * q.z};
    }

    /// Angle of the dominant axis, degrees in (-90, 90].
    double horizontal_angle_deg() const {
        double ang = std::atan2(b, a) * kRadToDeg;
        if (ang <= -90.0) ang += 180.0;
        if (ang > 90.0) ang -= 180.0;
        return ang;
    }
};

/// Closed-form eigendecomposition of the 2x2 covariance of plane points.
inline PcaAxes pca_orientation(const std::vector<PlanePoint>& points) {
    if (points.size() < 3) throw RankDeficient("need at least 3 points");
    double my = 0.0, mz = 0.0;
    for (const auto& p : points) {
        my += p.y;
        mz += p.z;
    }
    my /= double(points.size());
    mz /= double(points.size());
    double cyy = 0.0, czz = 0.0, cyz = 0.0;
    for (const auto& p : points) {
        const double dy = p.y - my, dz = p.z - mz;
        cyy += dy * dy;
        czz += dz * dz;
        cyz += dy * dz;
    }
    const double inv = 1.0 / double(points.size() - 1);
    cyy *= inv;
    czz *= inv;
    cyz *= inv;

    const double tr = cyy + czz;
    const double disc = std::sqrt(std::max(0.0, (cyy - czz) * (cyy - czz) + 4.0 * cyz * cyz));
    const double l0 = 0.5 * (tr + disc);
    const double l1 = 0.5 * (tr - disc);
    if (!(l0 > 0.0) || l1 <= l0 * 1e-12)
        throw RankDeficient("points are collinear; keyboard orientation is ambiguous");

    // Eigenvector of the larger eigenvalue, from the better-conditioned row.
    double vy, vz;
    if (std::fabs(l0 - czz) >= std::fabs(l0 - cyy)) {
        vy = l0 - czz;
        vz = cyz;
    } else {
        vy = cyz;
        vz = l0 - cyy;
    }
    double n = std::hypot(vy, vz);
    if (n == 0.0) {  // isotropic covariance; any orthonormal pair works
        vy = 1.0;
        vz = 0.0;
        n = 1.0;
    }
    vy /= n;
    vz /= n;
    // Canonical sign: dominant axis points toward +y.
    if (vy < 0.0 || (vy == 0.0 && vz < 0.0)) {
        vy = -vy;
        vz = -vz;
    }
    PcaAxes axes;
    axes.a = vy;
    axes.b = vz;
    axes.c = -vz;  // 90-degree rotation keeps V exactly orthonormal
    axes.d = vy;
    axes.eig0 = l0;
    axes.eig1 = l1;
    return axes;
}

/// Fully determined keyboard coordinate system: plane normal and rotation,
/// PCA axes, boundary rectangle in PCA coordinates, and the affine map
/// from PCA coordinates to layout key-pitch coordinates.
struct KeyboardFrame {
    GazeVector normal;
    Rotation rotation;
    PcaAxes axes;
    KeyboardLayout layout;

    // Layout coords = c0 + c1 * (PCA coords), per axis. The flip search
    // folds its sign choice into c1.
    double c0_y = 0.0, c1_y = 1.0;
    double c0_z = 0.0, c1_z = 1.0;

    // Fitted extent of the typing cloud in PCA coordinates.
    double bound_y_lo = 0.0, bound_y_hi = 0.0;
    double bound_z_lo = 0.0, bound_z_hi = 0.0;

    /// Horizontal key pitch expressed in plane units.
    double pitch_plane_units() const { return 1.0 / std::fabs(c1_y); }

    PlanePoint pca_to_layout(const PlanePoint& q) const {
        return {c0_y + c1_y * q.y, c0_z + c1_z * q.z};
    }

    PlanePoint layout_to_pca(const PlanePoint& l) const {
        return {(l.y - c0_y) / c1_y, (l.z - c0_z) / c1_z};
    }

    PlanePoint plane_to_layout(const PlanePoint& p) const {
        return pca_to_layout(axes.transform(p));
    }

    PlanePoint layout_to_plane(const PlanePoint& l) const {
        return axes.inverse(layout_to_pca(l));
    }

    /// Raw gaze angles all the way into layout coordinates.
    PlanePoint sample_to_layout(const GazeSample& s) const {
        const GazeVector v = rotation.apply(angles_to_unit_vector(s.yaw_deg, s.pitch_deg));
        return plane_to_layout(project_to_plane(v));
    }
};

namespace detail {

/// Nearest-rank percentile (round-to-rank, no interpolation), with the
/// upper tail mirrored off the lower so both trim symmetrically. Sessions
/// of sentence scale keep their extreme points, so a clean session anchors
/// exactly on the edge keys; long sessions shed stray extremes.
inline double nearest_rank_percentile(std::vector<double> v, double pct) {
    std::sort(v.begin(), v.end());
    const auto n = static_cast<long long>(v.size());
    const double tail = pct <= 50.0 ? pct : 100.0 - pct;
    long long rank = std::llround(tail / 100.0 * double(n));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    if (pct > 50.0) rank = n + 1 - rank;
    return v[rank - 1];
}

/// Keep points within 6 normalized MADs of the per-axis median. Spurious
/// keystroke events picked up at session edges project far outside the
/// typing cloud and would otherwise capture the percentile anchors. The
/// factor is loose because key usage is structured, not Gaussian: edge
/// keys (SPACE row) sit beyond 3 MADs in ordinary sentences.
inline std::vector<PlanePoint> mad_gate(const std::vector<PlanePoint>& points) {
    auto med = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    std::vector<double> ys, zs;
    for (const auto& p : points) {
        ys.push_back(p.y);
        zs.push_back(p.z);
    }
    const double my = med(ys), mz = med(zs);
    std::vector<double> ady, adz;
    for (const auto& p : points) {
        ady.push_back(std::fabs(p.y - my));
        adz.push_back(std::fabs(p.z - mz));
    }
    const double mad_y = med(ady), mad_z = med(adz);
    if (mad_y <= 0.0 || mad_z <= 0.0) return points;
    const double lim_y = 6.0 * 1.4826 * mad_y;
    const double lim_z = 6.0 * 1.4826 * mad_z;
    std::vector<PlanePoint> kept;
    for (const auto& p : points)
        if (std::fabs(p.y - my) <= lim_y && std::fabs(p.z - mz) <= lim_z) kept.push_back(p);
    return kept.size() >= 4 ? kept : points;
}

}  // namespace detail

/// Fit the keyboard boundary in PCA space and resolve the four axis-flip
/// candidates by total Gaussian key mass. `points` are PCA-space points
/// (one per keystroke works best); the returned frame has its rotation and
/// axes left as identity placeholders for the caller to fill.
inline KeyboardFrame estimate_boundary(const std::vector<PlanePoint>& points,
                                       const KeyboardLayout& layout,
                                       double sigma_pitch = kDefaultSigmaPitch) {
    if (points.size() < 4) throw InsufficientSpread("need at least 4 points");
    const std::vector<PlanePoint> gated = detail::mad_gate(points);

    std::vector<double> ys, zs;
    ys.reserve(gated.size());
    zs.reserve(gated.size());
    for (const auto& p : gated) {
        ys.push_back(p.y);
        zs.push_back(p.z);
    }
    const double y_lo = detail::nearest_rank_percentile(ys, 2.5);
    const double y_hi = detail::nearest_rank_percentile(ys, 97.5);
    const double z_lo = detail::nearest_rank_percentile(zs, 2.5);
    const double z_hi = detail::nearest_rank_percentile(zs, 97.5);
    const double span_y = y_hi - y_lo;
    const double span_z = z_hi - z_lo;
    if (!(span_y > 0.0) || !(span_z > 0.0))
        throw InsufficientSpread("points have no spread in one axis");

    const double anchor_span_y = layout.anchor_y_hi - layout.anchor_y_lo;
    const double anchor_span_z = layout.anchor_z_hi - layout.anchor_z_lo;
    // Per-axis pitch implied by the spans. The cloud's aspect must agree
    // with the layout's within a factor of two, the scale-free equivalent
    // of demanding at least a couple of key pitches of spread per axis.
    const double pitch_y = span_y / anchor_span_y;
    const double pitch_z = span_z / anchor_span_z;
    const double ratio = std::max(pitch_y, pitch_z) / std::min(pitch_y, pitch_z);
    if (ratio > 2.0)
        throw InsufficientSpread("point spread does not cover the keyboard in both axes");

    KeyboardFrame best;
    best.layout = layout;
    double best_score = -1.0;
    for (const double fy : {1.0, -1.0}) {
        for (const double fz : {1.0, -1.0}) {
            // Flipping negates coordinates, which swaps and negates the
            // percentile box: layout = anchor_lo + (flip*p - q_lo) * k.
            const double qy_lo = fy > 0 ? y_lo : -y_hi;
            const double qz_lo = fz > 0 ? z_lo : -z_hi;
            const double ky = anchor_span_y / span_y;
            const double kz = anchor_span_z / span_z;

            KeyboardFrame f;
            f.layout = layout;
            f.c1_y = fy * ky;
            f.c0_y = layout.anchor_y_lo - qy_lo * ky;
            f.c1_z = fz * kz;
            f.c0_z = layout.anchor_z_lo - qz_lo * kz;
            f.bound_y_lo = y_lo;
            f.bound_y_hi = y_hi;
            f.bound_z_lo = z_lo;
            f.bound_z_hi = z_hi;

            double score = 0.0;
            for (const auto& p : points) {
                const PlanePoint l = f.pca_to_layout(p);
                for (const auto& k : layout.keys)
                    score += gaussian_rect_mass(l.y, l.z, sigma_pitch, sigma_pitch, k.y_lo(),
                                                k.y_hi(), k.z_lo(), k.z_hi());
            }
            if (score > best_score) {
                best_score = score;
                best = f;
            }
        }
    }
    return best;
}

/// End-to-end frame fit from fixation data: mean-gaze plane normal from
/// fixation frames only, PCA on the projected frame points, boundary and
/// flips from the per-keystroke centroids.
inline KeyboardFrame fit_keyboard_frame(const std::vector<FixationEvent>& events,
                                        const KeyboardLayout& layout,
                                        double sigma_pitch = kDefaultSigmaPitch) {
    std::vector<GazeVector> gaze;
    for (const auto& ev : events)
        for (const auto& s : ev.frames)
            gaze.push_back(angles_to_unit_vector(s.yaw_deg, s.pitch_deg));
    const PlaneEstimate plane = estimate_plane(gaze);

    std::vector<PlanePoint> frame_points;
    frame_points.reserve(gaze.size());
    for (const auto& v : gaze) frame_points.push_back(project_to_plane(plane.rotation.apply(v)));
    const PcaAxes axes = pca_orientation(frame_points);

    // Per-axis medians: a few saccade-transit frames at a fixation's edge
    // must not drag the anchor points used for the boundary fit.
    std::vector<PlanePoint> centroids;
    centroids.reserve(events.size());
    std::size_t cursor = 0;
    std::vector<double> buf_y, buf_z;
    for (const auto& ev : events) {
        buf_y.clear();
        buf_z.clear();
        for (std::size_t i = 0; i < ev.frames.size(); ++i) {
            const PlanePoint q = axes.transform(frame_points[cursor + i]);
            buf_y.push_back(q.y);
            buf_z.push_back(q.z);
        }
        cursor += ev.frames.size();
        auto median = [](std::vector<double>& v) {
            std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
            double hi = v[v.size() / 2];
            if (v.size() % 2 == 0) {
                std::nth_element(v.begin(), v.begin() + v.size() / 2 - 1, v.end());
                return 0.5 * (hi + v[v.size() / 2 - 1]);
            }
            return hi;
        };
        centroids.push_back({median(buf_y), median(buf_z)});
    }

    KeyboardFrame frame = estimate_boundary(centroids, layout, sigma_pitch);
    frame.normal = plane.normal;
    frame.rotation = plane.rotation;
    frame.axes = axes;
    return frame;
}

}  // namespace gazetype
