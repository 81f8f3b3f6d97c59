// SPDX-License-Identifier: Apache-2.0
//
// lcsim - LiDAR-driven vehicular channel simulation library
// Copyright (C) 2026 The lcsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef LCSIM_MLP_HPP
#define LCSIM_MLP_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "rng.hpp"

namespace lcsim
{

enum class Activation
{
    relu
};

enum class OutputTransform
{
    softplus
};

// Fully connected regression network: affine + ReLU hidden layers, a final
// softplus so the count estimate is non-negative.
struct MlpModel
{
    std::vector<int> layer_sizes;               // first = input dim, last = 1
    std::vector<std::vector<double>> weights;   // per layer, row-major [out x in]
    std::vector<std::vector<double>> biases;    // per layer [out]
    Activation activation = Activation::relu;
    OutputTransform output_transform = OutputTransform::softplus;

    size_t layer_count() const { return weights.size(); }

    void validate() const
    {
        if (layer_sizes.size() < 2)
            throw std::invalid_argument("MlpModel: need at least input and output layers");
        if (layer_sizes.back() != 1)
            throw std::invalid_argument("MlpModel: output layer size must be 1");
        if (weights.size() != layer_sizes.size() - 1 || biases.size() != weights.size())
            throw std::invalid_argument("MlpModel: layer count mismatch");
        for (size_t l = 0; l < weights.size(); ++l)
        {
            size_t in = static_cast<size_t>(layer_sizes[l]);
            size_t out = static_cast<size_t>(layer_sizes[l + 1]);
            if (weights[l].size() != in * out || biases[l].size() != out)
                throw std::invalid_argument("MlpModel: weight shape mismatch");
        }
    }
};

inline double softplus(double z)
{
    return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

inline double sigmoid(double z)
{
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// He-uniform initialization, biases zero
inline MlpModel init_mlp(const std::vector<int> &layer_sizes, uint64_t seed)
{
    MlpModel m;
    m.layer_sizes = layer_sizes;
    Rng rng(hash_mix(seed, 0x4d4c50ULL));
    for (size_t l = 0; l + 1 < layer_sizes.size(); ++l)
    {
        size_t in = static_cast<size_t>(layer_sizes[l]);
        size_t out = static_cast<size_t>(layer_sizes[l + 1]);
        double limit = std::sqrt(6.0 / static_cast<double>(in));
        std::vector<double> w(in * out);
        for (auto &v : w)
            v = rng.uniform(-limit, limit);
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::vector<double>(out, 0.0));
    }
    m.validate();
    return m;
}

namespace detail
{

// z[l] holds pre-activations of layer l, a[l] the activations feeding layer l
struct ForwardTrace
{
    std::vector<std::vector<double>> a;
    std::vector<std::vector<double>> z;
};

inline double mlp_forward_traced(const MlpModel &m, std::span<const double> x, ForwardTrace &tr)
{
    const size_t layers = m.layer_count();
    tr.a.resize(layers);
    tr.z.resize(layers);
    tr.a[0].assign(x.begin(), x.end());
    for (size_t l = 0; l < layers; ++l)
    {
        size_t in = static_cast<size_t>(m.layer_sizes[l]);
        size_t out = static_cast<size_t>(m.layer_sizes[l + 1]);
        tr.z[l].assign(m.biases[l].begin(), m.biases[l].end());
        const double *w = m.weights[l].data();
        const double *ain = tr.a[l].data();
        for (size_t o = 0; o < out; ++o)
        {
            double acc = tr.z[l][o];
            const double *row = w + o * in;
            for (size_t i = 0; i < in; ++i)
                acc += row[i] * ain[i];
            tr.z[l][o] = acc;
        }
        if (l + 1 < layers)
        {
            tr.a[l + 1].resize(out);
            for (size_t o = 0; o < out; ++o)
                tr.a[l + 1][o] = std::max(tr.z[l][o], 0.0);
        }
    }
    return softplus(tr.z[layers - 1][0]);
}

} // namespace detail

// Non-negative count estimate for one feature vector
inline double mlp_forward(const MlpModel &m, std::span<const double> x)
{
    if (static_cast<int>(x.size()) != m.layer_sizes.front())
        throw std::invalid_argument("mlp_forward: input dimension mismatch");
    detail::ForwardTrace tr;
    return detail::mlp_forward_traced(m, x, tr);
}

struct MlpGradients
{
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

inline MlpGradients zero_gradients(const MlpModel &m)
{
    MlpGradients g;
    for (size_t l = 0; l < m.layer_count(); ++l)
    {
        g.weights.push_back(std::vector<double>(m.weights[l].size(), 0.0));
        g.biases.push_back(std::vector<double>(m.biases[l].size(), 0.0));
    }
    return g;
}

// Gradients of the mean squared error over the batch w.r.t. every parameter.
// X is row-major [n x input_dim]. When loss_out is given it receives the
// batch MSE from the same forward pass.
inline MlpGradients mlp_gradients(const MlpModel &m, std::span<const double> X,
                                  std::span<const double> y, double *loss_out = nullptr)
{
    const size_t dim = static_cast<size_t>(m.layer_sizes.front());
    if (y.empty() || X.size() != y.size() * dim)
        throw std::invalid_argument("mlp_gradients: batch shape mismatch");

    const size_t n = y.size();
    const size_t layers = m.layer_count();
    MlpGradients g = zero_gradients(m);

    detail::ForwardTrace tr;
    std::vector<double> delta, delta_prev;
    double loss_acc = 0.0;
    for (size_t s = 0; s < n; ++s)
    {
        double out = detail::mlp_forward_traced(m, X.subspan(s * dim, dim), tr);
        double zl = tr.z[layers - 1][0];
        loss_acc += (out - y[s]) * (out - y[s]);
        // d(mse)/d(z_out) = 2/n * (out - y) * sigmoid(z_out)
        delta.assign(1, 2.0 / static_cast<double>(n) * (out - y[s]) * sigmoid(zl));

        for (size_t l = layers; l-- > 0;)
        {
            size_t in = static_cast<size_t>(m.layer_sizes[l]);
            size_t outs = static_cast<size_t>(m.layer_sizes[l + 1]);
            const double *ain = tr.a[l].data();
            double *gw = g.weights[l].data();
            for (size_t o = 0; o < outs; ++o)
            {
                double d = delta[o];
                g.biases[l][o] += d;
                double *row = gw + o * in;
                for (size_t i = 0; i < in; ++i)
                    row[i] += d * ain[i];
            }
            if (l == 0)
                break;
            delta_prev.assign(in, 0.0);
            const double *w = m.weights[l].data();
            for (size_t o = 0; o < outs; ++o)
            {
                double d = delta[o];
                const double *row = w + o * in;
                for (size_t i = 0; i < in; ++i)
                    delta_prev[i] += row[i] * d;
            }
            for (size_t i = 0; i < in; ++i)
                if (tr.z[l - 1][i] <= 0.0)
                    delta_prev[i] = 0.0;
            delta.swap(delta_prev);
        }
    }
    if (loss_out)
        *loss_out = loss_acc / static_cast<double>(n);
    return g;
}

inline double mlp_batch_mse(const MlpModel &m, std::span<const double> X, std::span<const double> y)
{
    const size_t dim = static_cast<size_t>(m.layer_sizes.front());
    detail::ForwardTrace tr;
    double acc = 0.0;
    for (size_t s = 0; s < y.size(); ++s)
    {
        double out = detail::mlp_forward_traced(m, X.subspan(s * dim, dim), tr);
        double e = out - y[s];
        acc += e * e;
    }
    return y.empty() ? 0.0 : acc / static_cast<double>(y.size());
}

// ---------- Training ----------

struct TrainConfig
{
    int batch_size = 16;
    double lr0 = 1e-3;
    double lr_decay = 0.9;
    int lr_decay_every = 4; // epochs
    int epochs = 200;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double split_train = 0.6, split_val = 0.2, split_test = 0.2; // 3:1:1
    uint64_t seed = 1;

    void validate() const
    {
        if (batch_size < 1 || epochs < 1 || lr0 <= 0.0 || lr_decay <= 0.0 || lr_decay_every < 1)
            throw std::invalid_argument("TrainConfig: hyper-parameters must be positive");
        if (std::abs(split_train + split_val + split_test - 1.0) > 1e-9)
            throw std::invalid_argument("TrainConfig: split fractions must sum to 1");
    }
};

inline double lr_for_epoch(const TrainConfig &cfg, int epoch)
{
    return cfg.lr0 * std::pow(cfg.lr_decay, static_cast<double>(epoch / cfg.lr_decay_every));
}

struct EpochStats
{
    int epoch = 0;
    double lr = 0.0;
    double train_mse = 0.0;
    double val_mse = 0.0;
};

struct TrainSet
{
    int dim = 0;
    std::vector<double> x_train; // row-major [n_train x dim]
    std::vector<double> y_train;
    std::vector<double> x_val;
    std::vector<double> y_val;
};

struct TrainResult
{
    MlpModel model;                // raw-feature model (normalization folded in)
    std::vector<EpochStats> curve;
    int best_epoch = 0;
};

namespace detail
{

struct AdamState
{
    std::vector<std::vector<double>> mw, vw, mb, vb;
    int64_t step = 0;

    explicit AdamState(const MlpModel &m)
    {
        for (size_t l = 0; l < m.layer_count(); ++l)
        {
            mw.push_back(std::vector<double>(m.weights[l].size(), 0.0));
            vw.push_back(std::vector<double>(m.weights[l].size(), 0.0));
            mb.push_back(std::vector<double>(m.biases[l].size(), 0.0));
            vb.push_back(std::vector<double>(m.biases[l].size(), 0.0));
        }
    }
};

inline void adam_update(MlpModel &m, AdamState &st, const MlpGradients &g, const TrainConfig &cfg,
                        double lr)
{
    st.step++;
    double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(st.step));
    double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(st.step));
    auto update = [&](std::vector<double> &p, std::vector<double> &mm, std::vector<double> &vv,
                      const std::vector<double> &gr)
    {
        for (size_t i = 0; i < p.size(); ++i)
        {
            mm[i] = cfg.adam_beta1 * mm[i] + (1.0 - cfg.adam_beta1) * gr[i];
            vv[i] = cfg.adam_beta2 * vv[i] + (1.0 - cfg.adam_beta2) * gr[i] * gr[i];
            double mhat = mm[i] / bc1;
            double vhat = vv[i] / bc2;
            p[i] -= lr * mhat / (std::sqrt(vhat) + cfg.adam_eps);
        }
    };
    for (size_t l = 0; l < m.layer_count(); ++l)
    {
        update(m.weights[l], st.mw[l], st.vw[l], g.weights[l]);
        update(m.biases[l], st.mb[l], st.vb[l], g.biases[l]);
    }
}

// Per-feature standardization computed on the training split. The affine
// transform is folded back into the first layer on export so checkpoints
// stay plain affine layers over raw features.
struct Standardizer
{
    std::vector<double> mean, inv_std;

    static Standardizer fit(std::span<const double> X, size_t dim)
    {
        Standardizer s;
        s.mean.assign(dim, 0.0);
        s.inv_std.assign(dim, 1.0);
        size_t n = dim > 0 ? X.size() / dim : 0;
        if (n == 0)
            return s;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < dim; ++j)
                s.mean[j] += X[i * dim + j];
        for (size_t j = 0; j < dim; ++j)
            s.mean[j] /= static_cast<double>(n);
        std::vector<double> var(dim, 0.0);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < dim; ++j)
            {
                double d = X[i * dim + j] - s.mean[j];
                var[j] += d * d;
            }
        for (size_t j = 0; j < dim; ++j)
        {
            double sd = std::sqrt(var[j] / static_cast<double>(n));
            s.inv_std[j] = sd > 1e-9 ? 1.0 / sd : 1.0;
        }
        return s;
    }

    std::vector<double> apply(std::span<const double> X) const
    {
        size_t dim = mean.size();
        std::vector<double> out(X.size());
        for (size_t i = 0; i < X.size(); ++i)
        {
            size_t j = i % dim;
            out[i] = (X[i] - mean[j]) * inv_std[j];
        }
        return out;
    }

    // W x_std + b = (W * diag(inv_std)) x + (b - W * (mean .* inv_std))
    MlpModel fold_into(const MlpModel &m) const
    {
        MlpModel out = m;
        size_t dim = mean.size();
        size_t rows = out.weights[0].size() / dim;
        for (size_t o = 0; o < rows; ++o)
        {
            double shift = 0.0;
            for (size_t j = 0; j < dim; ++j)
            {
                double w = out.weights[0][o * dim + j];
                shift += w * mean[j] * inv_std[j];
                out.weights[0][o * dim + j] = w * inv_std[j];
            }
            out.biases[0][o] -= shift;
        }
        return out;
    }
};

} // namespace detail

// ADAM / MSE training with the step-decayed learning-rate schedule and
// deterministic per-epoch shuffling. The model with the lowest validation
// MSE is retained (earliest epoch wins ties).
inline TrainResult train_mlp(const TrainSet &data, const std::vector<int> &layer_sizes,
                             const TrainConfig &cfg)
{
    cfg.validate();
    if (data.y_train.empty())
        throw std::invalid_argument("train_mlp: need at least one training sample");
    if (layer_sizes.front() != data.dim)
        throw std::invalid_argument("train_mlp: layer input size does not match data dim");

    const size_t dim = static_cast<size_t>(data.dim);
    auto std_fit = detail::Standardizer::fit(data.x_train, dim);
    std::vector<double> xtr = std_fit.apply(data.x_train);
    std::vector<double> xva = std_fit.apply(data.x_val);

    MlpModel model = init_mlp(layer_sizes, cfg.seed);
    detail::AdamState adam(model);

    const size_t n = data.y_train.size();
    std::vector<int> order(n);
    for (size_t i = 0; i < n; ++i)
        order[i] = static_cast<int>(i);

    TrainResult result;
    MlpModel best = model;
    double best_val = std::numeric_limits<double>::infinity();
    int best_epoch = 0;

    std::vector<double> bx(static_cast<size_t>(cfg.batch_size) * dim);
    std::vector<double> by(static_cast<size_t>(cfg.batch_size));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch)
    {
        double lr = lr_for_epoch(cfg, epoch);
        Rng shuffle_rng(hash_mix(cfg.seed, 0x5e9f7ULL, static_cast<uint64_t>(epoch)));
        shuffle(order, shuffle_rng);

        double loss_acc = 0.0;
        for (size_t start = 0; start < n; start += static_cast<size_t>(cfg.batch_size))
        {
            size_t bs = std::min(static_cast<size_t>(cfg.batch_size), n - start);
            bx.resize(bs * dim);
            by.resize(bs);
            for (size_t k = 0; k < bs; ++k)
            {
                int src = order[start + k];
                std::copy_n(xtr.begin() + src * static_cast<int>(dim), dim, bx.begin() + static_cast<long>(k * dim));
                by[k] = data.y_train[static_cast<size_t>(src)];
            }
            double batch_loss = 0.0;
            MlpGradients g = mlp_gradients(model, bx, by, &batch_loss);
            loss_acc += batch_loss * static_cast<double>(bs);
            detail::adam_update(model, adam, g, cfg, lr);
        }

        EpochStats st;
        st.epoch = epoch;
        st.lr = lr;
        st.train_mse = loss_acc / static_cast<double>(n);
        st.val_mse = data.y_val.empty() ? st.train_mse : mlp_batch_mse(model, xva, data.y_val);
        result.curve.push_back(st);

        if (st.val_mse < best_val)
        {
            best_val = st.val_mse;
            best = model;
            best_epoch = epoch;
        }
    }

    result.model = std_fit.fold_into(best);
    result.best_epoch = best_epoch;
    return result;
}

} // namespace lcsim

#endif
