#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "gazetype/error.hpp"
#include "gazetype/types.hpp"

namespace gazetype {

/// The single degrees<->radians conversion point for the whole library.
inline constexpr double kDegToRad = M_PI / 180.0;
inline constexpr double kRadToDeg = 180.0 / M_PI;

inline double deg_to_rad(double d) { return d * kDegToRad; }
inline double rad_to_deg(double r) { return r * kRadToDeg; }

/// Yaw/pitch angles (degrees) to a unit direction:
///   x = cos(yaw) cos(pitch), y = sin(yaw) cos(pitch), z = sin(pitch).
inline GazeVector angles_to_unit_vector(double yaw_deg, double pitch_deg) {
    const double th = deg_to_rad(yaw_deg);
    const double ph = deg_to_rad(pitch_deg);
    return {std::cos(th) * std::cos(ph), std::sin(th) * std::cos(ph), std::sin(ph)};
}

/// Inverse of angles_to_unit_vector for unit-norm input.
inline void unit_vector_to_angles(const GazeVector& u, double& yaw_deg, double& pitch_deg) {
    yaw_deg = rad_to_deg(std::atan2(u.y, u.x));
    pitch_deg = rad_to_deg(std::asin(std::clamp(u.z, -1.0, 1.0)));
}

/// Intersect a gaze direction with the plane x = plane_distance.
/// The direction must point toward the plane (u.x > 0).
inline PlanePoint project_to_plane(const GazeVector& v, double plane_distance = 1.0) {
    if (!(v.x > 0.0))
        throw GazeAwayFromPlane("gaze direction does not intersect the keyboard plane");
    const double s = plane_distance / v.x;
    return {v.y * s, v.z * s};
}

/// 3x3 rotation matrix, row major.
struct Rotation {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    GazeVector apply(const GazeVector& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    Rotation transposed() const {
        return {{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
    }

    Rotation compose(const Rotation& other) const {  // this * other
        Rotation r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += m[3 * i + k] * other.m[3 * k + j];
                r.m[3 * i + j] = s;
            }
        return r;
    }
};

/// Rodrigues rotation about a unit axis.
inline Rotation rotation_about_axis(const GazeVector& axis, double angle_rad) {
    const double c = std::cos(angle_rad), s = std::sin(angle_rad), t = 1.0 - c;
    const double x = axis.x, y = axis.y, z = axis.z;
    Rotation r;
    r.m = {t * x * x + c,     t * x * y - s * z, t * x * z + s * y,
           t * x * y + s * z, t * y * y + c,     t * y * z - s * x,
           t * x * z - s * y, t * y * z + s * x, t * z * z + c};
    return r;
}

/// Minimal rotation taking unit vector `from` onto unit vector `to`.
inline Rotation rotation_between(const GazeVector& from, const GazeVector& to) {
    const GazeVector axis = from.cross(to);
    const double s = axis.norm();
    const double c = std::clamp(from.dot(to), -1.0, 1.0);
    if (s < 1e-15) {
        if (c > 0.0) return Rotation{};  // already aligned
        // Antiparallel: rotate half a turn about any perpendicular axis.
        GazeVector perp = from.cross({0.0, 0.0, 1.0});
        if (perp.norm() < 1e-9) perp = from.cross({0.0, 1.0, 0.0});
        return rotation_about_axis(perp.normalized(), M_PI);
    }
    return rotation_about_axis(axis * (1.0 / s), std::atan2(s, c));
}

/// Extrinsic camera rotation: yaw about +z, then pitch about -y (so positive
/// pitch raises the view). Applying this to every gaze vector models moving
/// the recording viewpoint while the scene stays put.
inline Rotation camera_rotation(double yaw_deg, double pitch_deg) {
    const Rotation yaw = rotation_about_axis({0.0, 0.0, 1.0}, deg_to_rad(yaw_deg));
    const Rotation pitch = rotation_about_axis({0.0, -1.0, 0.0}, deg_to_rad(pitch_deg));
    return pitch.compose(yaw);
}

}  // namespace gazetype
