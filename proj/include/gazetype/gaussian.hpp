#pragma once

#include <cmath>

namespace gazetype {

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

/// Probability mass of an axis-aligned rectangle under an isotropic-axes
/// 2D Gaussian centered at (my, mz): the double integral factors into a
/// product of one-dimensional CDF differences.
inline double gaussian_rect_mass(double my, double mz, double sigma_y, double sigma_z,
                                 double y_lo, double y_hi, double z_lo, double z_hi) {
    const double py = normal_cdf((y_hi - my) / sigma_y) - normal_cdf((y_lo - my) / sigma_y);
    const double pz = normal_cdf((z_hi - mz) / sigma_z) - normal_cdf((z_lo - mz) / sigma_z);
    return py * pz;
}

}  // namespace gazetype
