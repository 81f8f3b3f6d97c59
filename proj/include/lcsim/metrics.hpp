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

#ifndef LCSIM_METRICS_HPP
#define LCSIM_METRICS_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace lcsim
{

namespace detail
{

inline void check_aligned(const std::vector<int> &pred, const std::vector<int> &truth)
{
    if (pred.size() != truth.size())
        throw std::invalid_argument("metrics: prediction and truth sequences not aligned");
}

} // namespace detail

// Recognition accuracy P = 1 - N_error / N_all with N_error the summed
// absolute count differences and N_all the summed ground truth. May be
// negative; no clamping.
inline double accuracy(const std::vector<int> &pred, const std::vector<int> &truth)
{
    detail::check_aligned(pred, truth);
    long long n_error = 0, n_all = 0;
    for (size_t i = 0; i < pred.size(); ++i)
    {
        n_error += std::llabs(static_cast<long long>(pred[i]) - truth[i]);
        n_all += truth[i];
    }
    if (n_all <= 0)
        throw data_error("accuracy: ground-truth sum is zero");
    return 1.0 - static_cast<double>(n_error) / static_cast<double>(n_all);
}

// Empirical distribution of the per-cluster absolute count error
inline std::map<int, double> error_histogram(const std::vector<int> &pred,
                                             const std::vector<int> &truth)
{
    detail::check_aligned(pred, truth);
    std::map<int, double> hist;
    if (pred.empty())
        return hist;
    for (size_t i = 0; i < pred.size(); ++i)
        hist[std::abs(pred[i] - truth[i])] += 1.0;
    for (auto &[err, p] : hist)
        p /= static_cast<double>(pred.size());
    return hist;
}

// Fraction of clusters where occupancy (count > 0) is predicted correctly
inline double binary_accuracy(const std::vector<int> &pred, const std::vector<int> &truth)
{
    detail::check_aligned(pred, truth);
    if (pred.empty())
        return 0.0;
    size_t ok = 0;
    for (size_t i = 0; i < pred.size(); ++i)
        if ((pred[i] > 0) == (truth[i] > 0))
            ++ok;
    return static_cast<double>(ok) / static_cast<double>(pred.size());
}

// Fraction of clusters with the exact count predicted
inline double regression_accuracy(const std::vector<int> &pred, const std::vector<int> &truth)
{
    detail::check_aligned(pred, truth);
    if (pred.empty())
        return 0.0;
    size_t ok = 0;
    for (size_t i = 0; i < pred.size(); ++i)
        if (pred[i] == truth[i])
            ++ok;
    return static_cast<double>(ok) / static_cast<double>(pred.size());
}

// Baseline predictor: per-cluster counts drawn independently from the
// empirical distribution of the training-set counts.
inline std::vector<int> random_baseline(const std::vector<int> &train_truth_counts,
                                        size_t eval_cluster_count, uint64_t seed)
{
    if (train_truth_counts.empty())
        throw std::invalid_argument("random_baseline: empty training counts");
    std::vector<int> pool = train_truth_counts;
    std::sort(pool.begin(), pool.end()); // input-order independent
    Rng rng(hash_mix(seed, 0xba5eULL));
    std::vector<int> out(eval_cluster_count);
    for (auto &v : out)
        v = pool[static_cast<size_t>(rng.below(pool.size()))];
    return out;
}

// RMS difference in dB between two PDP sequences on identical bin grids,
// over the bins where the truth is above the 1e-12 power floor.
inline double compare_pdp(const std::vector<Pdp> &sim, const std::vector<Pdp> &truth)
{
    constexpr double kFloor = 1e-12;
    if (sim.size() != truth.size())
        throw data_error("compare_pdp: sequence lengths differ");
    double acc = 0.0;
    size_t n = 0;
    for (size_t s = 0; s < sim.size(); ++s)
    {
        const Pdp &a = sim[s], &b = truth[s];
        if (a.delay_bins.size() != b.delay_bins.size())
            throw data_error("compare_pdp: bin grids differ in size");
        for (size_t k = 0; k < a.delay_bins.size(); ++k)
        {
            if (std::abs(a.delay_bins[k] - b.delay_bins[k]) > 1e-12)
                throw data_error("compare_pdp: bin grids are not identical");
            if (b.powers[k] <= kFloor)
                continue;
            double da = 10.0 * std::log10(std::max(a.powers[k], kFloor));
            double db = 10.0 * std::log10(b.powers[k]);
            acc += (da - db) * (da - db);
            ++n;
        }
    }
    if (n == 0)
        throw data_error("compare_pdp: no bins above the power floor");
    return std::sqrt(acc / static_cast<double>(n));
}

} // namespace lcsim

#endif
