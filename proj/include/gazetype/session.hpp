#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "gazetype/error.hpp"
#include "gazetype/metrics.hpp"
#include "gazetype/rnn.hpp"
#include "gazetype/types.hpp"

namespace gazetype {

/// Classification runs on fixed windows of this many frames, 50% overlap,
/// logits averaged where windows overlap. Shorter traces are zero-padded
/// and classified in one shot.
inline constexpr int kSessionWindowFrames = 256;

/// Detected segments shorter than this merge into their neighbors; a
/// typing session containing at least one keystroke lasts about a second.
inline constexpr double kMinSegmentMs = 1000.0;

struct SessionHyperparams {
    int hidden = 128;
    double learning_rate = 1e-3;
    int batch_size = 64;
    int epochs = 100;
    int window = kSessionWindowFrames;
    std::uint64_t seed = 1;
};

/// Trained typing-session classifier: network weights plus the feature
/// normalization constants captured from the training data.
struct SessionModel {
    BiRnn net;
    std::array<double, 3> feat_mean{0.0, 0.0, 0.0};
    std::array<double, 3> feat_std{1.0, 1.0, 1.0};
    SessionHyperparams hp;
    double final_loss = 0.0;
    std::vector<double> epoch_loss;

    std::array<double, 3> normalize(const GazeSample& s) const {
        return {(s.yaw_deg - feat_mean[0]) / feat_std[0],
                (s.pitch_deg - feat_mean[1]) / feat_std[1],
                (s.ear - feat_mean[2]) / feat_std[2]};
    }
};

/// Contiguous typing/other spans covering the whole trace.
struct LabeledSpan {
    double start_ms = 0.0;
    double end_ms = 0.0;
    bool typing = false;
};

struct SessionSegmentation {
    std::vector<LabeledSpan> spans;
    std::vector<int> frame_labels;

    std::vector<TimeSpan> typing_spans() const {
        std::vector<TimeSpan> out;
        for (const auto& s : spans)
            if (s.typing) out.push_back({s.start_ms, s.end_ms});
        return out;
    }
};

namespace sessiondetail {

struct Window {
    std::vector<double> x;   // window * 3, zero padded
    std::vector<int> y;      // labels, padded with 0
    std::vector<int> mask;   // 1 = real frame
};

inline std::vector<Window> make_windows(const GazeTrace& trace, const SessionModel& model,
                                        bool with_labels) {
    const int W = model.hp.window;
    const int stride = std::max(1, W / 2);
    const int n = static_cast<int>(trace.samples.size());
    std::vector<Window> out;
    for (int start = 0;; start += stride) {
        Window w;
        w.x.assign(std::size_t(W) * 3, 0.0);
        w.y.assign(W, 0);
        w.mask.assign(W, 0);
        for (int t = 0; t < W; ++t) {
            const int i = start + t;
            if (i >= n) break;
            const auto f = model.normalize(trace.samples[i]);
            w.x[std::size_t(t) * 3 + 0] = f[0];
            w.x[std::size_t(t) * 3 + 1] = f[1];
            w.x[std::size_t(t) * 3 + 2] = f[2];
            w.mask[t] = 1;
            if (with_labels) w.y[t] = trace.labels[i];
        }
        out.push_back(std::move(w));
        if (start + W >= n) break;
    }
    return out;
}

}  // namespace sessiondetail

/// Train the typing-session classifier. Deterministic for a fixed seed:
/// weight init, window shuffling and every accumulation run in a fixed
/// order on a single thread.
inline SessionModel train_session_model(const std::vector<GazeTrace>& traces,
                                        const SessionHyperparams& hp = {}) {
    if (traces.size() < 2) throw UnlabeledData("need at least 2 labeled traces");
    for (const auto& t : traces) {
        if (!t.has_labels()) throw UnlabeledData("every training trace needs per-sample labels");
        if (t.labels.size() != t.samples.size())
            throw LengthMismatch("label count != sample count");
    }

    SessionModel model;
    model.hp = hp;

    // Per-feature normalization from the pooled training frames.
    std::array<double, 3> sum{0, 0, 0}, sumsq{0, 0, 0};
    std::size_t count = 0;
    bool any_pos = false, any_neg = false;
    for (const auto& t : traces) {
        for (std::size_t i = 0; i < t.samples.size(); ++i) {
            const auto& s = t.samples[i];
            const double f[3] = {s.yaw_deg, s.pitch_deg, s.ear};
            for (int j = 0; j < 3; ++j) {
                sum[j] += f[j];
                sumsq[j] += f[j] * f[j];
            }
            ++count;
            if (t.labels[i])
                any_pos = true;
            else
                any_neg = true;
        }
    }
    if (!any_pos || !any_neg)
        throw DegenerateFeatures("training data contains a single class only");
    for (int j = 0; j < 3; ++j) {
        model.feat_mean[j] = sum[j] / double(count);
        const double var = sumsq[j] / double(count) - model.feat_mean[j] * model.feat_mean[j];
        if (var <= 1e-12) throw DegenerateFeatures("feature " + std::to_string(j) +
                                                   " has zero variance");
        model.feat_std[j] = std::sqrt(var);
    }

    std::vector<sessiondetail::Window> windows;
    for (const auto& t : traces) {
        auto w = sessiondetail::make_windows(t, model, /*with_labels=*/true);
        windows.insert(windows.end(), std::make_move_iterator(w.begin()),
                       std::make_move_iterator(w.end()));
    }

    Rng rng(hp.seed);
    model.net.init_shapes(3, hp.hidden, 2);
    model.net.init_weights(rng);

    BiRnn::Adam adam;
    adam.lr = hp.learning_rate;
    adam.init(model.net);
    BiRnn::Grads grads;
    grads.init(model.net);
    BiRnn::WindowCache cache;

    std::vector<std::size_t> order(windows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t b = 0; b < order.size(); b += hp.batch_size) {
            const std::size_t hi = std::min(order.size(), b + hp.batch_size);
            grads.zero();
            double batch_loss = 0.0;
            for (std::size_t k = b; k < hi; ++k) {
                const auto& w = windows[order[k]];
                model.net.forward(w.x, hp.window, cache);
                batch_loss += model.net.backward(w.x, w.y, w.mask, hp.window, cache, grads);
            }
            const double scale = 1.0 / double(hi - b);
            for (auto* block : {&grads.wx_f, &grads.wh_f, &grads.b_f, &grads.wx_b, &grads.wh_b,
                                &grads.b_b, &grads.wo, &grads.bo})
                for (auto& g : *block) g *= scale;
            model.net.adam_step(grads, adam);
            epoch_loss += batch_loss * scale;
            ++batches;
        }
        model.epoch_loss.push_back(epoch_loss / double(batches));
    }
    model.final_loss = model.epoch_loss.empty() ? 0.0 : model.epoch_loss.back();
    return model;
}

/// Per-frame argmax labels, then a minimum-duration merge so the output
/// alternates typing/other without sub-second fragments.
inline SessionSegmentation classify_sessions(const SessionModel& model, const GazeTrace& trace) {
    if (trace.samples.empty()) throw SegmentTooShort("empty trace");
    const int n = static_cast<int>(trace.samples.size());
    const int W = model.hp.window;

    std::vector<double> score1(n, 0.0);  // accumulated P(typing)
    std::vector<int> cover(n, 0);
    auto windows = sessiondetail::make_windows(trace, model, /*with_labels=*/false);
    BiRnn::WindowCache cache;
    const int stride = std::max(1, W / 2);
    for (std::size_t wi = 0; wi < windows.size(); ++wi) {
        model.net.forward(windows[wi].x, W, cache);
        const int start = static_cast<int>(wi) * stride;
        for (int t = 0; t < W; ++t) {
            const int i = start + t;
            if (i >= n) break;
            score1[i] += cache.probs[std::size_t(t) * 2 + 1];
            ++cover[i];
        }
    }

    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = score1[i] * 2.0 > double(cover[i]) ? 1 : 0;

    // Merge fragments shorter than the minimum segment duration.
    struct Run {
        int lo, hi;  // frame range [lo, hi)
        int label;
    };
    auto build_runs = [&]() {
        std::vector<Run> runs;
        for (int i = 0; i < n;) {
            int j = i;
            while (j < n && labels[j] == labels[i]) ++j;
            runs.push_back({i, j, labels[i]});
            i = j;
        }
        return runs;
    };
    auto run_ms = [&](const Run& r) {
        return trace.samples[r.hi - 1].t_ms - trace.samples[r.lo].t_ms;
    };
    for (;;) {
        auto runs = build_runs();
        if (runs.size() <= 1) break;
        bool merged = false;
        for (const auto& r : runs) {
            if (run_ms(r) < kMinSegmentMs) {
                for (int i = r.lo; i < r.hi; ++i) labels[i] = 1 - r.label;
                merged = true;
                break;
            }
        }
        if (!merged) break;
    }

    SessionSegmentation seg;
    seg.frame_labels = labels;
    for (const auto& r : build_runs()) {
        LabeledSpan span;
        span.start_ms = trace.samples[r.lo].t_ms;
        span.end_ms = r.hi < n ? trace.samples[r.hi].t_ms : trace.samples[n - 1].t_ms;
        span.typing = r.label == 1;
        seg.spans.push_back(span);
    }
    return seg;
}

struct SessionMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double accuracy = 0.0;
    bool precision_defined = true;
    bool recall_defined = true;
    ConfusionCounts counts;
};

inline SessionMetrics session_metrics(const SessionSegmentation& pred,
                                      const std::vector<int>& truth) {
    if (pred.frame_labels.size() != truth.size())
        throw LengthMismatch("segmentation and truth label lengths differ");
    SessionMetrics m;
    m.counts = frame_confusion(pred.frame_labels, truth);
    m.precision = m.counts.precision();
    m.recall = m.counts.recall();
    m.accuracy = m.counts.accuracy();
    m.precision_defined = !m.counts.undefined_precision();
    m.recall_defined = !m.counts.undefined_recall();
    return m;
}

/// Intersection-over-union of a predicted and true time span.
inline double span_iou(const TimeSpan& a, const TimeSpan& b) {
    const double inter = std::max(0.0, std::min(a.end_ms, b.end_ms) -
                                           std::max(a.start_ms, b.start_ms));
    const double uni = std::max(a.end_ms, b.end_ms) - std::min(a.start_ms, b.start_ms);
    return uni > 0.0 ? inter / uni : 0.0;
}

// ---------------------------------------------------------------------------
// Checkpoint format: "GZTSM" magic, u32 version, dims, hyperparameters,
// normalization constants, then the weight blocks row major as 64-bit
// little-endian floats. The loader rejects any version it does not know.

inline constexpr std::uint32_t kCheckpointVersion = 1;

inline void save_session_model(const SessionModel& model, std::ostream& out) {
    out.write("GZTSM", 5);
    auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    put_u32(kCheckpointVersion);
    put_u32(static_cast<std::uint32_t>(model.net.input_size()));
    put_u32(static_cast<std::uint32_t>(model.net.hidden_size()));
    put_u32(static_cast<std::uint32_t>(model.net.output_size()));
    put_u32(static_cast<std::uint32_t>(model.hp.window));
    put_u32(static_cast<std::uint32_t>(model.hp.batch_size));
    put_u32(static_cast<std::uint32_t>(model.hp.epochs));
    put_f64(model.hp.learning_rate);
    put_f64(static_cast<double>(model.hp.seed));
    for (double v : model.feat_mean) put_f64(v);
    for (double v : model.feat_std) put_f64(v);
    put_f64(model.final_loss);
    for (const auto* block : model.net.parameter_blocks()) {
        put_u32(static_cast<std::uint32_t>(block->size()));
        out.write(reinterpret_cast<const char*>(block->data()),
                  static_cast<std::streamsize>(block->size() * 8));
    }
}

inline SessionModel load_session_model(std::istream& in) {
    char magic[5];
    in.read(magic, 5);
    if (!in || std::memcmp(magic, "GZTSM", 5) != 0)
        throw CheckpointError("not a session model checkpoint");
    auto get_u32 = [&]() {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    auto get_f64 = [&]() {
        double v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    const std::uint32_t version = get_u32();
    if (version != kCheckpointVersion)
        throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
    SessionModel model;
    const int input = static_cast<int>(get_u32());
    const int hidden = static_cast<int>(get_u32());
    const int output = static_cast<int>(get_u32());
    model.hp.hidden = hidden;
    model.hp.window = static_cast<int>(get_u32());
    model.hp.batch_size = static_cast<int>(get_u32());
    model.hp.epochs = static_cast<int>(get_u32());
    model.hp.learning_rate = get_f64();
    model.hp.seed = static_cast<std::uint64_t>(get_f64());
    for (double& v : model.feat_mean) v = get_f64();
    for (double& v : model.feat_std) v = get_f64();
    model.final_loss = get_f64();
    model.net.init_shapes(input, hidden, output);
    for (auto* block : model.net.parameter_blocks()) {
        const std::uint32_t n = get_u32();
        if (n != block->size()) throw CheckpointError("checkpoint weight shape mismatch");
        in.read(reinterpret_cast<char*>(block->data()), static_cast<std::streamsize>(n * 8));
    }
    if (!in) throw CheckpointError("truncated checkpoint");
    return model;
}

inline void save_session_model_file(const SessionModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CheckpointError("cannot open '" + path + "' for writing");
    save_session_model(model, out);
}

inline SessionModel load_session_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint '" + path + "'");
    return load_session_model(in);
}

}  // namespace gazetype
