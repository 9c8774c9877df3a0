#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "gazetype/random.hpp"

namespace gazetype {

/// Minimal bidirectional Elman network for per-frame binary sequence
/// labeling: one tanh recurrent layer per direction, softmax head over the
/// concatenated hidden states. Everything is plain double loops so a fixed
/// seed reproduces training bit for bit.
class BiRnn {
public:
    BiRnn() = default;

    BiRnn(int input, int hidden, int output) { init_shapes(input, hidden, output); }

    void init_shapes(int input, int hidden, int output) {
        input_ = input;
        hidden_ = hidden;
        output_ = output;
        wx_f_.assign(std::size_t(hidden) * input, 0.0);
        wh_f_.assign(std::size_t(hidden) * hidden, 0.0);
        b_f_.assign(hidden, 0.0);
        wx_b_.assign(std::size_t(hidden) * input, 0.0);
        wh_b_.assign(std::size_t(hidden) * hidden, 0.0);
        b_b_.assign(hidden, 0.0);
        wo_.assign(std::size_t(output) * 2 * hidden, 0.0);
        bo_.assign(output, 0.0);
    }

    void init_weights(Rng& rng) {
        const double kx = std::sqrt(6.0 / double(input_ + hidden_));
        const double kh = std::sqrt(6.0 / double(2 * hidden_));
        const double ko = std::sqrt(6.0 / double(2 * hidden_ + output_));
        for (auto& w : wx_f_) w = rng.uniform(-kx, kx);
        for (auto& w : wh_f_) w = rng.uniform(-kh, kh);
        for (auto& w : wx_b_) w = rng.uniform(-kx, kx);
        for (auto& w : wh_b_) w = rng.uniform(-kh, kh);
        for (auto& w : wo_) w = rng.uniform(-ko, ko);
    }

    int input_size() const { return input_; }
    int hidden_size() const { return hidden_; }
    int output_size() const { return output_; }

    /// One training window: features x (T x input, row major), labels y
    /// (T), and a mask (0 for padded frames).
    struct WindowCache {
        std::vector<double> hf, hb;      // T x hidden each
        std::vector<double> probs;       // T x output
        double loss = 0.0;
        int live_frames = 0;
    };

    void forward(const std::vector<double>& x, int frames, WindowCache& c) const {
        c.hf.assign(std::size_t(frames) * hidden_, 0.0);
        c.hb.assign(std::size_t(frames) * hidden_, 0.0);
        c.probs.assign(std::size_t(frames) * output_, 0.0);
        std::vector<double> prev(hidden_, 0.0);
        for (int t = 0; t < frames; ++t) {
            step(x.data() + std::size_t(t) * input_, prev.data(), wx_f_, wh_f_, b_f_,
                 &c.hf[std::size_t(t) * hidden_]);
            std::copy(c.hf.begin() + std::size_t(t) * hidden_,
                      c.hf.begin() + std::size_t(t + 1) * hidden_, prev.begin());
        }
        std::fill(prev.begin(), prev.end(), 0.0);
        for (int t = frames - 1; t >= 0; --t) {
            step(x.data() + std::size_t(t) * input_, prev.data(), wx_b_, wh_b_, b_b_,
                 &c.hb[std::size_t(t) * hidden_]);
            std::copy(c.hb.begin() + std::size_t(t) * hidden_,
                      c.hb.begin() + std::size_t(t + 1) * hidden_, prev.begin());
        }
        for (int t = 0; t < frames; ++t) {
            double* probs = &c.probs[std::size_t(t) * output_];
            const double* hf = &c.hf[std::size_t(t) * hidden_];
            const double* hb = &c.hb[std::size_t(t) * hidden_];
            double mx = -1e300;
            for (int o = 0; o < output_; ++o) {
                double s = bo_[o];
                const double* row = &wo_[std::size_t(o) * 2 * hidden_];
                for (int j = 0; j < hidden_; ++j) s += row[j] * hf[j];
                for (int j = 0; j < hidden_; ++j) s += row[hidden_ + j] * hb[j];
                probs[o] = s;
                mx = std::max(mx, s);
            }
            double z = 0.0;
            for (int o = 0; o < output_; ++o) {
                probs[o] = std::exp(probs[o] - mx);
                z += probs[o];
            }
            for (int o = 0; o < output_; ++o) probs[o] /= z;
        }
    }

    /// Gradient accumulator matching the parameter layout.
    struct Grads {
        std::vector<double> wx_f, wh_f, b_f, wx_b, wh_b, b_b, wo, bo;

        void init(const BiRnn& net) {
            wx_f.assign(net.wx_f_.size(), 0.0);
            wh_f.assign(net.wh_f_.size(), 0.0);
            b_f.assign(net.b_f_.size(), 0.0);
            wx_b.assign(net.wx_b_.size(), 0.0);
            wh_b.assign(net.wh_b_.size(), 0.0);
            b_b.assign(net.b_b_.size(), 0.0);
            wo.assign(net.wo_.size(), 0.0);
            bo.assign(net.bo_.size(), 0.0);
        }

        void zero() {
            for (auto* v : {&wx_f, &wh_f, &b_f, &wx_b, &wh_b, &b_b, &wo, &bo})
                std::fill(v->begin(), v->end(), 0.0);
        }
    };

    /// Cross-entropy loss over live frames plus full backpropagation
    /// through time; gradients accumulate into `g`.
    double backward(const std::vector<double>& x, const std::vector<int>& y,
                    const std::vector<int>& mask, int frames, const WindowCache& c,
                    Grads& g) const {
        int live = 0;
        for (int t = 0; t < frames; ++t) live += mask[t];
        if (live == 0) return 0.0;
        const double inv_live = 1.0 / double(live);

        double loss = 0.0;
        std::vector<double> dlogits(std::size_t(frames) * output_, 0.0);
        for (int t = 0; t < frames; ++t) {
            if (!mask[t]) continue;
            const double* probs = &c.probs[std::size_t(t) * output_];
            loss -= std::log(std::max(probs[y[t]], 1e-300)) * inv_live;
            for (int o = 0; o < output_; ++o)
                dlogits[std::size_t(t) * output_ + o] =
                    (probs[o] - (o == y[t] ? 1.0 : 0.0)) * inv_live;
        }

        std::vector<double> dhf(std::size_t(frames) * hidden_, 0.0);
        std::vector<double> dhb(std::size_t(frames) * hidden_, 0.0);
        for (int t = 0; t < frames; ++t) {
            const double* dl = &dlogits[std::size_t(t) * output_];
            const double* hf = &c.hf[std::size_t(t) * hidden_];
            const double* hb = &c.hb[std::size_t(t) * hidden_];
            for (int o = 0; o < output_; ++o) {
                const double d = dl[o];
                if (d == 0.0) continue;
                double* wo_row = &g.wo[std::size_t(o) * 2 * hidden_];
                const double* w_row = &wo_[std::size_t(o) * 2 * hidden_];
                for (int j = 0; j < hidden_; ++j) {
                    wo_row[j] += d * hf[j];
                    dhf[std::size_t(t) * hidden_ + j] += d * w_row[j];
                }
                for (int j = 0; j < hidden_; ++j) {
                    wo_row[hidden_ + j] += d * hb[j];
                    dhb[std::size_t(t) * hidden_ + j] += d * w_row[hidden_ + j];
                }
                g.bo[o] += d;
            }
        }

        // Forward direction unrolls backwards in time.
        std::vector<double> da(hidden_);
        for (int t = frames - 1; t >= 0; --t) {
            const double* h = &c.hf[std::size_t(t) * hidden_];
            double* dh = &dhf[std::size_t(t) * hidden_];
            for (int j = 0; j < hidden_; ++j) da[j] = dh[j] * (1.0 - h[j] * h[j]);
            const double* hprev = t > 0 ? &c.hf[std::size_t(t - 1) * hidden_] : nullptr;
            accumulate_step(x.data() + std::size_t(t) * input_, hprev, da.data(), g.wx_f,
                            g.wh_f, g.b_f, wh_f_,
                            t > 0 ? &dhf[std::size_t(t - 1) * hidden_] : nullptr);
        }
        // Backward direction unrolls forwards.
        for (int t = 0; t < frames; ++t) {
            const double* h = &c.hb[std::size_t(t) * hidden_];
            double* dh = &dhb[std::size_t(t) * hidden_];
            for (int j = 0; j < hidden_; ++j) da[j] = dh[j] * (1.0 - h[j] * h[j]);
            const double* hprev = t + 1 < frames ? &c.hb[std::size_t(t + 1) * hidden_] : nullptr;
            accumulate_step(x.data() + std::size_t(t) * input_, hprev, da.data(), g.wx_b,
                            g.wh_b, g.b_b, wh_b_,
                            t + 1 < frames ? &dhb[std::size_t(t + 1) * hidden_] : nullptr);
        }
        return loss;
    }

    /// Adam optimizer state.
    struct Adam {
        double lr = 1e-3, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
        long step_count = 0;
        Grads m, v;

        void init(const BiRnn& net) {
            m.init(net);
            v.init(net);
        }
    };

    void adam_step(const Grads& g, Adam& opt) {
        ++opt.step_count;
        const double bc1 = 1.0 - std::pow(opt.beta1, double(opt.step_count));
        const double bc2 = 1.0 - std::pow(opt.beta2, double(opt.step_count));
        auto update = [&](std::vector<double>& w, const std::vector<double>& grad,
                          std::vector<double>& m, std::vector<double>& v) {
            for (std::size_t i = 0; i < w.size(); ++i) {
                m[i] = opt.beta1 * m[i] + (1.0 - opt.beta1) * grad[i];
                v[i] = opt.beta2 * v[i] + (1.0 - opt.beta2) * grad[i] * grad[i];
                w[i] -= opt.lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + opt.eps);
            }
        };
        update(wx_f_, g.wx_f, opt.m.wx_f, opt.v.wx_f);
        update(wh_f_, g.wh_f, opt.m.wh_f, opt.v.wh_f);
        update(b_f_, g.b_f, opt.m.b_f, opt.v.b_f);
        update(wx_b_, g.wx_b, opt.m.wx_b, opt.v.wx_b);
        update(wh_b_, g.wh_b, opt.m.wh_b, opt.v.wh_b);
        update(b_b_, g.b_b, opt.m.b_b, opt.v.b_b);
        update(wo_, g.wo, opt.m.wo, opt.v.wo);
        update(bo_, g.bo, opt.m.bo, opt.v.bo);
    }

    // Parameter access for checkpointing and tests.
    std::vector<std::vector<double>*> parameter_blocks() {
        return {&wx_f_, &wh_f_, &b_f_, &wx_b_, &wh_b_, &b_b_, &wo_, &bo_};
    }
    std::vector<const std::vector<double>*> parameter_blocks() const {
        return {&wx_f_, &wh_f_, &b_f_, &wx_b_, &wh_b_, &b_b_, &wo_, &bo_};
    }

private:
    void step(const double* x, const double* hprev, const std::vector<double>& wx,
              const std::vector<double>& wh, const std::vector<double>& b, double* h) const {
        for (int i = 0; i < hidden_; ++i) {
            double a = b[i];
            const double* wx_row = &wx[std::size_t(i) * input_];
            for (int j = 0; j < input_; ++j) a += wx_row[j] * x[j];
            const double* wh_row = &wh[std::size_t(i) * hidden_];
            for (int j = 0; j < hidden_; ++j) a += wh_row[j] * hprev[j];
            h[i] = std::tanh(a);
        }
    }

    void accumulate_step(const double* x, const double* hprev, const double* da,
                         std::vector<double>& gwx, std::vector<double>& gwh,
                         std::vector<double>& gb, const std::vector<double>& wh,
                         double* dhprev) const {
        for (int i = 0; i < hidden_; ++i) {
            const double d = da[i];
            if (d == 0.0) continue;
            double* gwx_row = &gwx[std::size_t(i) * input_];
            for (int j = 0; j < input_; ++j) gwx_row[j] += d * x[j];
            gb[i] += d;
            if (hprev) {
                double* gwh_row = &gwh[std::size_t(i) * hidden_];
                const double* wh_row = &wh[std::size_t(i) * hidden_];
                for (int j = 0; j < hidden_; ++j) {
                    gwh_row[j] += d * hprev[j];
                    dhprev[j] += d * wh_row[j];
                }
            }
        }
    }

    int input_ = 0, hidden_ = 0, output_ = 0;
    std::vector<double> wx_f_, wh_f_, b_f_;
    std::vector<double> wx_b_, wh_b_, b_b_;
    std::vector<double> wo_, bo_;
};

}  // namespace gazetype
