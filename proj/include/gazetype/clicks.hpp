#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "gazetype/error.hpp"
#include "gazetype/metrics.hpp"
#include "gazetype/stability.hpp"
#include "gazetype/types.hpp"

namespace gazetype {

/// Stability threshold fallback when estimation has too little data.
inline constexpr double kDefaultStabilityThreshold = 0.9996;

/// Intermediate dips (post-saccade micro-adjustments) trail a deeper dip
/// by at most this much.
inline constexpr double kIntermediateDipWindowMs = 500.0;

/// Dip depths pool into bins of this width when estimating the threshold.
inline constexpr double kDepthHistogramBin = 1e-5;

/// Fixations shorter than this are discarded as spurious dwell.
inline constexpr double kMinFixationMs = 150.0;

enum class DipKind { Saccade, Intermediate, Noise };

/// A local drop in the stability trace.
struct Dip {
    std::size_t index = 0;     ///< window-start index into the stability trace
    double t_ms = 0.0;         ///< center time of the dip window
    double depth = 0.0;        ///< 1 - S at the local minimum; always >= 0
    DipKind kind = DipKind::Noise;
};

/// Local maxima of -S whose height clears median(-S). Plateaus report their
/// first sample; plateau edges must strictly descend on both sides.
inline std::vector<Dip> find_dips(const StabilityTrace& s) {
    if (s.values.empty()) throw SegmentTooShort("empty stability trace");
    const std::size_t n = s.values.size();

    // depth(n) = 1 - S(n); peaks of depth are dips of S, and gating depth
    // against median(depth) is identical to gating -S against median(-S).
    std::vector<double> depth(n);
    for (std::size_t i = 0; i < n; ++i) depth[i] = 1.0 - s.values[i];

    std::vector<double> sorted = depth;
    std::sort(sorted.begin(), sorted.end());
    const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    std::vector<Dip> dips;
    std::size_t i = 1;
    while (i + 1 <= n - 1 && n >= 3) {
        if (depth[i] > depth[i - 1]) {
            // Scan a potential plateau starting at i.
            std::size_t j = i;
            while (j + 1 < n && depth[j + 1] == depth[i]) ++j;
            if (j + 1 < n && depth[j + 1] < depth[i]) {
                if (depth[i] > median)
                    dips.push_back({i, s.center_time_ms(i), depth[i], DipKind::Noise});
                i = j + 1;
                continue;
            }
            i = j + 1;
            continue;
        }
        ++i;
    }
    return dips;
}

namespace detail {

/// Flags dips lying within the 500 ms window of a strictly deeper dip.
/// `after_only` restricts the rule to dips that FOLLOW the deeper one.
inline std::vector<bool> intermediate_mask(const std::vector<Dip>& dips, bool after_only) {
    std::vector<bool> mask(dips.size(), false);
    for (std::size_t i = 0; i < dips.size(); ++i) {
        for (std::size_t j = 0; j < dips.size(); ++j) {
            if (i == j) continue;
            const double dt = dips[i].t_ms - dips[j].t_ms;
            const bool in_window =
                after_only ? (dt > 0.0 && dt <= kIntermediateDipWindowMs)
                           : (dt != 0.0 && std::abs(dt) <= kIntermediateDipWindowMs);
            if (!in_window) continue;
            // Strictly-deeper comparison; exact ties keep the earlier dip.
            if (dips[j].depth > dips[i].depth ||
                (dips[j].depth == dips[i].depth && dips[j].t_ms < dips[i].t_ms)) {
                mask[i] = true;
                break;
            }
        }
    }
    return mask;
}

}  // namespace detail

/// Estimate the stability threshold S_T from a set of stability traces.
///
/// Per trace: gate dips, flag intermediate dips (within 500 ms of a deeper
/// dip), locate the depth range made up entirely of intermediate dips with
/// the highest count, and record those depths. Pooled depths across traces
/// are histogrammed; S_T = 1 - (mean depth inside the mode bin).
inline double estimate_threshold(const std::vector<StabilityTrace>& traces) {
    std::vector<double> pooled;
    for (const auto& trace : traces) {
        auto dips = find_dips(trace);
        if (dips.size() < 2) continue;
        auto intermediate = detail::intermediate_mask(dips, /*after_only=*/false);

        // Sort dips by depth and walk maximal all-intermediate runs.
        std::vector<std::size_t> order(dips.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return dips[a].depth < dips[b].depth; });

        std::size_t best_start = 0, best_len = 0;
        std::size_t k = 0;
        while (k < order.size()) {
            if (!intermediate[order[k]]) {
                ++k;
                continue;
            }
            std::size_t start = k;
            while (k < order.size() && intermediate[order[k]]) ++k;
            if (k - start > best_len) {
                best_len = k - start;
                best_start = start;
            }
        }
        for (std::size_t idx = best_start; idx < best_start + best_len; ++idx)
            pooled.push_back(dips[order[idx]].depth);
    }
    if (pooled.empty())
        throw InsufficientDips("no intermediate dips available for threshold estimation");

    // Mode of the pooled depth distribution at kDepthHistogramBin resolution.
    std::sort(pooled.begin(), pooled.end());
    std::size_t best_count = 0;
    double best_sum = pooled.front();
    std::size_t i = 0;
    while (i < pooled.size()) {
        const auto bin = static_cast<long long>(pooled[i] / kDepthHistogramBin);
        std::size_t j = i;
        double sum = 0.0;
        while (j < pooled.size() &&
               static_cast<long long>(pooled[j] / kDepthHistogramBin) == bin) {
            sum += pooled[j];
            ++j;
        }
        if (j - i > best_count) {
            best_count = j - i;
            best_sum = sum / double(j - i);
        }
        i = j;
    }
    return 1.0 - best_sum;
}

/// Split a typing session into fixation events (keystroke candidates).
///
/// Dips deeper than 1 - s_t are saccade candidates; candidates within
/// 500 ms after a deeper preserved dip are dropped as intermediate. The
/// preserved saccade windows, together with the session edges, delimit the
/// fixations. Sub-150 ms leftovers are discarded.
inline std::vector<FixationEvent> segment_keystrokes(const StabilityTrace& s, double s_t,
                                                     const TimeSpan& session) {
    if (!(s_t > 0.0 && s_t < 1.0)) throw ConfigError("stability threshold must be in (0, 1)");
    const double min_depth = 1.0 - s_t;

    std::vector<Dip> candidates;
    for (const auto& d : find_dips(s))
        if (d.depth > min_depth) candidates.push_back(d);
    std::sort(candidates.begin(), candidates.end(),
              [](const Dip& a, const Dip& b) { return a.t_ms < b.t_ms; });

    std::vector<Dip> preserved;
    for (auto& d : candidates) {
        bool shadowed = false;
        for (const auto& p : preserved) {
            const double dt = d.t_ms - p.t_ms;
            if (dt > 0.0 && dt <= kIntermediateDipWindowMs && p.depth >= d.depth) {
                shadowed = true;
                break;
            }
        }
        d.kind = shadowed ? DipKind::Intermediate : DipKind::Saccade;
        if (!shadowed) preserved.push_back(d);
    }

    // Frame index ranges between saccade windows become fixations.
    const auto& frames = s.frames;
    std::size_t first = 0, last = frames.size();  // [first, last) inside the session
    while (first < frames.size() && frames[first].t_ms < session.start_ms) ++first;
    while (last > first && frames[last - 1].t_ms >= session.end_ms) --last;

    std::vector<FixationEvent> events;
    std::size_t cursor = first;
    auto emit = [&](std::size_t lo, std::size_t hi) {  // [lo, hi)
        if (hi <= lo) return;
        FixationEvent ev;
        ev.start_ms = frames[lo].t_ms;
        ev.end_ms = frames[hi - 1].t_ms;
        if (ev.end_ms - ev.start_ms < kMinFixationMs) return;
        ev.frames.assign(frames.begin() + lo, frames.begin() + hi);
        events.push_back(std::move(ev));
    };
    for (const auto& d : preserved) {
        const std::size_t win_lo = d.index;
        const std::size_t win_hi = d.index + static_cast<std::size_t>(s.window);  // exclusive
        if (win_lo < cursor) {
            cursor = std::max(cursor, win_hi);
            continue;
        }
        emit(cursor, std::min(win_lo, last));
        cursor = std::min(win_hi, last);
    }
    emit(cursor, last);
    return events;
}

/// Greedy one-to-one matching of predicted fixations to true keystrokes.
/// A pair is matchable when the keystroke time lies within tol_ms of the
/// event's span; pairs match in order of increasing time distance.
inline ConfusionCounts click_confusion(const std::vector<FixationEvent>& predicted,
                                       const std::vector<KeystrokeLabel>& truth,
                                       double tol_ms) {
    if (!(tol_ms > 0.0)) throw ConfigError("tol_ms must be positive");
    struct Pair {
        double dist;
        std::size_t ev, key;
    };
    std::vector<Pair> pairs;
    for (std::size_t e = 0; e < predicted.size(); ++e) {
        for (std::size_t k = 0; k < truth.size(); ++k) {
            const double t = truth[k].t_ms;
            double dist = 0.0;
            if (t < predicted[e].start_ms)
                dist = predicted[e].start_ms - t;
            else if (t > predicted[e].end_ms)
                dist = t - predicted[e].end_ms;
            if (dist <= tol_ms) pairs.push_back({dist, e, k});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.key != b.key) return a.key < b.key;
        return a.ev < b.ev;
    });
    std::vector<bool> ev_used(predicted.size(), false), key_used(truth.size(), false);
    std::int64_t matched = 0;
    for (const auto& p : pairs) {
        if (ev_used[p.ev] || key_used[p.key]) continue;
        ev_used[p.ev] = key_used[p.key] = true;
        ++matched;
    }
    ConfusionCounts c;
    c.tp = matched;
    c.fp = static_cast<std::int64_t>(predicted.size()) - matched;
    c.fn = static_cast<std::int64_t>(truth.size()) - matched;
    return c;
}

struct ClickMetrics {
    double precision = 0.0;
    double recall = 0.0;
    ConfusionCounts counts;
};

inline ClickMetrics click_metrics(const std::vector<FixationEvent>& predicted,
                                  const std::vector<KeystrokeLabel>& truth, double tol_ms) {
    ClickMetrics m;
    m.counts = click_confusion(predicted, truth, tol_ms);
    m.precision = m.counts.precision();
    m.recall = m.counts.recall();
    return m;
}

}  // namespace gazetype
