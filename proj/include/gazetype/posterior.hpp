#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "gazetype/error.hpp"
#include "gazetype/gaussian.hpp"
#include "gazetype/layout.hpp"
#include "gazetype/mapper.hpp"
#include "gazetype/types.hpp"

namespace gazetype {

/// Per-keystroke probability distribution over layout keys.
///
/// Each fixation frame contributes a 2D Gaussian centered at its layout
/// point; a key's probability is that Gaussian's mass over the key
/// rectangle, averaged across the fixation's frames. Mass falling between
/// or outside keys is kept as off_mass rather than renormalized, so
/// low-confidence keystrokes stay visible downstream.
struct KeyPosterior {
    std::size_t event_index = 0;
    std::vector<double> probs;  ///< indexed like layout.keys
    std::vector<std::pair<int, double>> top;  ///< top-K (key index, prob), descending
    double off_mass = 0.0;

    bool contains_top(const KeyboardLayout& layout, const std::string& id) const {
        for (const auto& [k, p] : top)
            if (layout.keys[k].id == id) return true;
        return false;
    }

    const std::string& top1_id(const KeyboardLayout& layout) const {
        return layout.keys[top.front().first].id;
    }
};

/// Average per-key Gaussian mass over the layout points of a fixation.
inline KeyPosterior key_posterior_from_points(const std::vector<PlanePoint>& layout_points,
                                              const KeyboardLayout& layout, double sigma_pitch,
                                              int k) {
    if (layout_points.empty()) throw EmptyFixation("fixation has no frames");
    if (k < 1) throw ConfigError("K must be >= 1");

    KeyPosterior post;
    post.probs.assign(layout.keys.size(), 0.0);
    for (const auto& p : layout_points) {
        for (std::size_t i = 0; i < layout.keys.size(); ++i) {
            const auto& key = layout.keys[i];
            post.probs[i] += gaussian_rect_mass(p.y, p.z, sigma_pitch, sigma_pitch, key.y_lo(),
                                                key.y_hi(), key.z_lo(), key.z_hi());
        }
    }
    double total = 0.0;
    for (auto& pr : post.probs) {
        pr /= double(layout_points.size());
        total += pr;
    }
    post.off_mass = std::max(0.0, 1.0 - total);

    std::vector<int> order(layout.keys.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    // Ties break toward the lower layout index, which keeps output stable.
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return post.probs[a] > post.probs[b]; });
    const std::size_t take = std::min<std::size_t>(k, order.size());
    for (std::size_t i = 0; i < take; ++i)
        post.top.emplace_back(order[i], post.probs[order[i]]);
    return post;
}

inline KeyPosterior key_posterior(const FixationEvent& event, const KeyboardFrame& frame,
                                  double sigma_pitch = kDefaultSigmaPitch, int k = 5) {
    std::vector<PlanePoint> pts;
    pts.reserve(event.frames.size());
    for (const auto& s : event.frames) pts.push_back(frame.sample_to_layout(s));
    return key_posterior_from_points(pts, frame.layout, sigma_pitch, k);
}

inline std::vector<KeyPosterior> decode_topk(const std::vector<FixationEvent>& events,
                                             const KeyboardFrame& frame, int k = 5,
                                             double sigma_pitch = kDefaultSigmaPitch) {
    std::vector<KeyPosterior> out;
    out.reserve(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        KeyPosterior p = key_posterior(events[i], frame, sigma_pitch, k);
        p.event_index = i;
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace gazetype
