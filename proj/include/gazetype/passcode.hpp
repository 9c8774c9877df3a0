#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "gazetype/layout.hpp"
#include "gazetype/posterior.hpp"
#include "gazetype/types.hpp"

namespace gazetype {

/// Grid search for the passcode translation spans this many pitches in
/// each direction, at 1/20 pitch resolution.
inline constexpr double kPasscodeGridSpanPitch = 2.0;
inline constexpr double kPasscodeGridStepPitch = 1.0 / 20.0;

struct TranslationFit {
    double ty = 0.0;
    double tz = 0.0;
    double residual = 0.0;  ///< sum over points of squared distance to nearest key
};

namespace detail {

inline double passcode_objective(const std::vector<PlanePoint>& points,
                                 const KeyboardLayout& layout, double ty, double tz) {
    double total = 0.0;
    for (const auto& p : points) {
        double best = std::numeric_limits<double>::max();
        for (const auto& k : layout.keys) {
            const double dy = p.y + ty - k.cy;
            const double dz = p.z + tz - k.cz;
            best = std::min(best, dy * dy + dz * dz);
        }
        total += best;
    }
    return total;
}

/// Alternate nearest-key assignment with the closed-form least-squares
/// translation for a fixed assignment until the assignment stops changing.
inline TranslationFit refine_translation(const std::vector<PlanePoint>& points,
                                         const KeyboardLayout& layout, double ty, double tz) {
    std::vector<int> assign(points.size(), -1);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double best = std::numeric_limits<double>::max();
            int best_k = 0;
            for (std::size_t k = 0; k < layout.keys.size(); ++k) {
                const double dy = points[i].y + ty - layout.keys[k].cy;
                const double dz = points[i].z + tz - layout.keys[k].cz;
                const double d = dy * dy + dz * dz;
                if (d < best) {
                    best = d;
                    best_k = static_cast<int>(k);
                }
            }
            if (assign[i] != best_k) {
                assign[i] = best_k;
                changed = true;
            }
        }
        if (!changed) break;
        double sy = 0.0, sz = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            sy += layout.keys[assign[i]].cy - points[i].y;
            sz += layout.keys[assign[i]].cz - points[i].z;
        }
        ty = sy / double(points.size());
        tz = sz / double(points.size());
    }
    return {ty, tz, passcode_objective(points, layout, ty, tz)};
}

}  // namespace detail

/// Translation minimizing the summed squared distance from each (shifted)
/// gaze point to its nearest key center. Non-convex, so a coarse grid
/// picks the basin and alternating refinement polishes it.
inline TranslationFit fit_passcode(const std::vector<PlanePoint>& points,
                                   const KeyboardLayout& layout) {
    if (points.empty()) return {0.0, 0.0, 0.0};
    const int steps = static_cast<int>(kPasscodeGridSpanPitch / kPasscodeGridStepPitch);
    TranslationFit best{0.0, 0.0, std::numeric_limits<double>::max()};
    for (int gy = -steps; gy <= steps; ++gy) {
        for (int gz = -steps; gz <= steps; ++gz) {
            const double ty = gy * kPasscodeGridStepPitch;
            const double tz = gz * kPasscodeGridStepPitch;
            const double obj = detail::passcode_objective(points, layout, ty, tz);
            if (obj < best.residual) best = {ty, tz, obj};
        }
    }
    TranslationFit refined = detail::refine_translation(points, layout, best.ty, best.tz);
    return refined.residual <= best.residual ? refined : best;
}

/// The same grid search, but returning up to `max_fits` distinct local
/// minima (by residual). Ambiguous key patterns have near-tied basins; the
/// guess ranking needs all of them.
inline std::vector<TranslationFit> fit_passcode_candidates(const std::vector<PlanePoint>& points,
                                                           const KeyboardLayout& layout,
                                                           std::size_t max_fits) {
    std::vector<TranslationFit> out;
    if (points.empty() || max_fits == 0) return out;
    const int steps = static_cast<int>(kPasscodeGridSpanPitch / kPasscodeGridStepPitch);
    const int n = 2 * steps + 1;
    std::vector<double> grid(std::size_t(n) * n);
    for (int gy = -steps; gy <= steps; ++gy)
        for (int gz = -steps; gz <= steps; ++gz)
            grid[std::size_t(gy + steps) * n + (gz + steps)] = detail::passcode_objective(
                points, layout, gy * kPasscodeGridStepPitch, gz * kPasscodeGridStepPitch);

    struct Cell {
        double obj;
        int gy, gz;
    };
    std::vector<Cell> minima;
    for (int iy = 0; iy < n; ++iy) {
        for (int iz = 0; iz < n; ++iz) {
            const double v = grid[std::size_t(iy) * n + iz];
            bool is_min = true;
            for (int dy = -1; dy <= 1 && is_min; ++dy) {
                for (int dz = -1; dz <= 1; ++dz) {
                    if (dy == 0 && dz == 0) continue;
                    const int jy = iy + dy, jz = iz + dz;
                    if (jy < 0 || jz < 0 || jy >= n || jz >= n) continue;
                    if (grid[std::size_t(jy) * n + jz] < v) {
                        is_min = false;
                        break;
                    }
                }
            }
            if (is_min) minima.push_back({v, iy - steps, iz - steps});
        }
    }
    std::sort(minima.begin(), minima.end(), [](const Cell& a, const Cell& b) {
        if (a.obj != b.obj) return a.obj < b.obj;
        if (a.gy != b.gy) return a.gy < b.gy;
        return a.gz < b.gz;
    });

    for (const auto& cell : minima) {
        if (out.size() >= max_fits) break;
        TranslationFit fit = detail::refine_translation(
            points, layout, cell.gy * kPasscodeGridStepPitch, cell.gz * kPasscodeGridStepPitch);
        bool duplicate = false;
        for (const auto& f : out) {
            if (std::hypot(f.ty - fit.ty, f.tz - fit.tz) < 0.5) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) out.push_back(fit);
    }
    return out;
}

/// One ranked passcode guess. The residual is the negative log joint
/// posterior of the digit string, so ranks increase strictly with it.
struct PasscodeGuess {
    std::string digits;
    double joint_prob = 0.0;
    double residual = 0.0;
    int rank = 0;
};

/// Rank digit strings for one passcode entry: translation-fit the pooled
/// points, compute per-keystroke digit posteriors under each candidate
/// translation, and enumerate joint-probability-ordered guesses.
inline std::vector<PasscodeGuess> rank_passcodes(
    const std::vector<std::vector<PlanePoint>>& keystroke_points, const KeyboardLayout& layout,
    std::size_t max_guesses, double sigma_pitch = kDefaultSigmaPitch) {
    std::vector<PasscodeGuess> result;
    if (keystroke_points.empty() || max_guesses == 0) return result;

    std::vector<PlanePoint> pooled;
    for (const auto& g : keystroke_points)
        pooled.insert(pooled.end(), g.begin(), g.end());
    auto fits = fit_passcode_candidates(pooled, layout, 4);
    if (fits.empty()) fits.push_back({0.0, 0.0, 0.0});

    std::map<std::string, double> merged;  // digits -> best joint prob
    for (const auto& fit : fits) {
        // Per-keystroke posteriors under this translation.
        std::vector<std::vector<std::pair<std::string, double>>> cand(keystroke_points.size());
        bool ok = true;
        for (std::size_t g = 0; g < keystroke_points.size(); ++g) {
            std::vector<PlanePoint> shifted;
            shifted.reserve(keystroke_points[g].size());
            for (const auto& p : keystroke_points[g])
                shifted.push_back({p.y + fit.ty, p.z + fit.tz});
            if (shifted.empty()) {
                ok = false;
                break;
            }
            KeyPosterior post = key_posterior_from_points(shifted, layout,
                                                          sigma_pitch,
                                                          static_cast<int>(layout.keys.size()));
            for (const auto& [idx, p] : post.top)
                if (p > 1e-300) cand[g].emplace_back(layout.keys[idx].id, p);
            if (cand[g].empty()) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        // Best-first product enumeration over the per-keystroke candidates.
        struct Node {
            double log_prob;
            std::vector<int> idx;
        };
        auto cmp = [](const Node& a, const Node& b) { return a.log_prob < b.log_prob; };
        std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
        std::set<std::vector<int>> seen;
        Node root{0.0, std::vector<int>(cand.size(), 0)};
        for (std::size_t g = 0; g < cand.size(); ++g)
            root.log_prob += std::log(cand[g][0].second);
        heap.push(root);
        seen.insert(root.idx);
        std::size_t emitted = 0;
        while (!heap.empty() && emitted < max_guesses) {
            Node node = heap.top();
            heap.pop();
            std::string digits;
            for (std::size_t g = 0; g < cand.size(); ++g) digits += cand[g][node.idx[g]].first;
            const double prob = std::exp(node.log_prob);
            auto it = merged.find(digits);
            if (it == merged.end() || it->second < prob) merged[digits] = prob;
            ++emitted;
            for (std::size_t g = 0; g < cand.size(); ++g) {
                if (node.idx[g] + 1 >= static_cast<int>(cand[g].size())) continue;
                Node next = node;
                ++next.idx[g];
                if (!seen.insert(next.idx).second) continue;
                next.log_prob = node.log_prob - std::log(cand[g][node.idx[g]].second) +
                                std::log(cand[g][next.idx[g]].second);
                heap.push(next);
            }
        }
    }

    for (const auto& [digits, prob] : merged)
        result.push_back({digits, prob, -std::log(prob), 0});
    std::sort(result.begin(), result.end(), [](const PasscodeGuess& a, const PasscodeGuess& b) {
        if (a.joint_prob != b.joint_prob) return a.joint_prob > b.joint_prob;
        return a.digits < b.digits;
    });
    if (result.size() > max_guesses) result.resize(max_guesses);
    for (std::size_t i = 0; i < result.size(); ++i) result[i].rank = static_cast<int>(i) + 1;
    return result;
}

}  // namespace gazetype
