#pragma once

#include <cstdint>

#include "gazetype/error.hpp"

namespace gazetype {

/// Binary confusion counts plus the standard derived rates.
struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    std::int64_t total() const { return tp + fp + fn + tn; }

    /// TP / (TP + FP); 0 when undefined (see undefined_precision()).
    double precision() const { return tp + fp > 0 ? double(tp) / double(tp + fp) : 0.0; }
    bool undefined_precision() const { return tp + fp == 0; }

    /// TP / (TP + FN); 0 when undefined.
    double recall() const { return tp + fn > 0 ? double(tp) / double(tp + fn) : 0.0; }
    bool undefined_recall() const { return tp + fn == 0; }

    /// (TP + TN) / (TP + FP + TN + FN); 0 when undefined.
    double accuracy() const {
        const std::int64_t n = total();
        return n > 0 ? double(tp + tn) / double(n) : 0.0;
    }
};

/// Frame-level confusion between two aligned 0/1 label sequences
/// (1 = positive class).
template <typename SeqA, typename SeqB>
ConfusionCounts frame_confusion(const SeqA& predicted, const SeqB& truth) {
    if (predicted.size() != truth.size())
        throw LengthMismatch("prediction and truth lengths differ");
    ConfusionCounts c;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool p = predicted[i] != 0;
        const bool t = truth[i] != 0;
        if (p && t)
            ++c.tp;
        else if (p && !t)
            ++c.fp;
        else if (!p && t)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

}  // namespace gazetype
