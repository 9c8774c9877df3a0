// Independent reference implementations used only by tests. Each one
// recomputes a quantity by the most direct method available (brute force,
// exhaustive scan, quadrature) so the fast library paths have something
// honest to be checked against.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gazetype/geometry.hpp"
#include "gazetype/types.hpp"

namespace oracles {

/// Windowed stability by the literal O(N^2) pairwise-cosine sum,
/// accumulated in long double.
inline std::vector<double> stability_brute_force(std::span<const gazetype::GazeSample> seg,
                                                 int window) {
    std::vector<double> out;
    if (seg.size() < static_cast<std::size_t>(window)) return out;
    for (std::size_t n = 0; n + window <= seg.size(); ++n) {
        long double sum = 0.0L;
        for (int i = 0; i < window; ++i) {
            for (int j = 0; j < window; ++j) {
                const long double phi_i = gazetype::deg_to_rad(seg[n + i].pitch_deg);
                const long double phi_j = gazetype::deg_to_rad(seg[n + j].pitch_deg);
                const long double th_i = gazetype::deg_to_rad(seg[n + i].yaw_deg);
                const long double th_j = gazetype::deg_to_rad(seg[n + j].yaw_deg);
                sum += std::cos(phi_i) * std::cos(phi_j) * std::cos(th_i - th_j) +
                       std::sin(phi_i) * std::sin(phi_j);
            }
        }
        out.push_back(static_cast<double>(sum / (static_cast<long double>(window) * window)));
    }
    return out;
}

/// Local maxima of -S above median(-S) by exhaustive scan, plateau-aware.
inline std::vector<std::size_t> dip_indices_exhaustive(const std::vector<double>& s) {
    std::vector<double> neg(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) neg[i] = -s[i];
    std::vector<double> sorted = neg;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted.size() % 2 == 1
                              ? sorted[sorted.size() / 2]
                              : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < neg.size(); ++i) {
        if (!(neg[i] > neg[i - 1])) continue;
        std::size_t j = i;
        while (j + 1 < neg.size() && neg[j + 1] == neg[i]) ++j;
        if (j + 1 < neg.size() && neg[j + 1] < neg[i] && neg[i] > median) out.push_back(i);
    }
    return out;
}

/// Dominant eigenpair of a symmetric 2x2 [[a,b],[b,c]] by power iteration;
/// the second eigenvalue falls out of the trace.
struct EigenRef {
    double l0, l1;    // descending
    double v0y, v0z;  // unit eigenvector of l0
};

inline EigenRef eigen_power_iteration(double a, double b, double c) {
    double vy = 0.6, vz = 0.8;
    for (int i = 0; i < 200000; ++i) {
        const double ny = a * vy + b * vz;
        const double nz = b * vy + c * vz;
        const double n = std::hypot(ny, nz);
        if (n == 0.0) break;
        const double dy = ny / n - vy, dz = nz / n - vz;
        vy = ny / n;
        vz = nz / n;
        if (dy * dy + dz * dz < 1e-32) break;
    }
    EigenRef r{};
    r.l0 = vy * (a * vy + b * vz) + vz * (b * vy + c * vz);
    r.l1 = (a + c) - r.l0;
    r.v0y = vy;
    r.v0z = vz;
    return r;
}

/// 2D Gaussian mass over a rectangle by composite Simpson quadrature on an
/// n-by-n cell grid.
inline double gaussian_rect_quadrature(double my, double mz, double sy, double sz, double y_lo,
                                       double y_hi, double z_lo, double z_hi, int n = 200) {
    auto simpson_1d = [n](double m, double s, double lo, double hi) {
        const double h = (hi - lo) / n;
        auto pdf = [&](double x) {
            const double u = (x - m) / s;
            return std::exp(-0.5 * u * u) / (s * std::sqrt(2.0 * M_PI));
        };
        double sum = pdf(lo) + pdf(hi);
        for (int i = 1; i < n; ++i) sum += pdf(lo + i * h) * (i % 2 ? 4.0 : 2.0);
        return sum * h / 3.0;
    };
    return simpson_1d(my, sy, y_lo, y_hi) * simpson_1d(mz, sz, z_lo, z_hi);
}

}  // namespace oracles
