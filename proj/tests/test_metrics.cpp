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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include <lcsim/metrics.hpp>
#include <lcsim/rng.hpp>

using namespace lcsim;

TEST_CASE("accuracy: P = 1 - N_error / N_all")
{
    CHECK(accuracy({3, 2, 0}, {3, 1, 1}) == Catch::Approx(0.6));
    CHECK(accuracy({4, 1, 2}, {4, 1, 2}) == 1.0);
    CHECK(accuracy({0, 0, 0}, {4, 3, 3}) == Catch::Approx(0.0));
    // over-prediction can push P below zero; no clamping
    CHECK(accuracy({9, 9}, {1, 1}) < 0.0);
    CHECK_THROWS_AS(accuracy({0, 0}, {0, 0}), data_error);
    CHECK_THROWS_AS(accuracy({1}, {1, 2}), std::invalid_argument);
}

TEST_CASE("accuracy is 1 exactly when predictions equal the truth")
{
    Rng rng(12);
    for (int it = 0; it < 200; ++it)
    {
        std::vector<int> truth, pred;
        for (int k = 0; k < 20; ++k)
            truth.push_back(static_cast<int>(rng.below(4)));
        pred = truth;
        if (std::all_of(truth.begin(), truth.end(), [](int v) { return v == 0; }))
            truth[0] = 1, pred[0] = 1;
        CHECK(accuracy(pred, truth) == 1.0);
        // flip one prediction: P must drop strictly below 1
        pred[static_cast<size_t>(rng.below(pred.size()))] += 1;
        CHECK(accuracy(pred, truth) < 1.0);
    }
}

TEST_CASE("error_histogram: counting and normalization")
{
    auto h = error_histogram({3, 2, 0}, {3, 2, 0});
    REQUIRE(h.size() == 1);
    CHECK(h[0] == 1.0);

    auto h2 = error_histogram({1, 0, 2, 5}, {1, 1, 1, 3});
    CHECK(h2[0] == Catch::Approx(0.25));
    CHECK(h2[1] == Catch::Approx(0.5));
    CHECK(h2[2] == Catch::Approx(0.25));

    double mass = 0.0;
    for (auto &[e, p] : h2)
        mass += p;
    CHECK(mass == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("binary accuracy: occupancy agreement")
{
    CHECK(binary_accuracy({0, 3}, {0, 1}) == 1.0);
    CHECK(binary_accuracy({1, 0}, {0, 1}) == 0.0);
    CHECK(binary_accuracy({2, 0, 5, 0}, {1, 1, 4, 0}) == Catch::Approx(0.75));
}

TEST_CASE("regression accuracy: exact-count agreement")
{
    CHECK(regression_accuracy({2, 0, 5, 0}, {1, 1, 4, 0}) == Catch::Approx(0.25));
    CHECK(regression_accuracy({1, 1}, {1, 1}) == 1.0);
}

TEST_CASE("metrics are invariant under joint permutation")
{
    Rng rng(9);
    std::vector<int> pred, truth;
    for (int k = 0; k < 50; ++k)
    {
        pred.push_back(static_cast<int>(rng.below(5)));
        truth.push_back(static_cast<int>(rng.below(5)));
    }
    if (std::all_of(truth.begin(), truth.end(), [](int v) { return v == 0; }))
        truth[0] = 2;

    std::vector<size_t> perm(pred.size());
    for (size_t i = 0; i < perm.size(); ++i)
        perm[i] = i;
    shuffle(perm, rng);
    std::vector<int> pred_p, truth_p;
    for (size_t i : perm)
    {
        pred_p.push_back(pred[i]);
        truth_p.push_back(truth[i]);
    }

    CHECK(accuracy(pred, truth) == Catch::Approx(accuracy(pred_p, truth_p)).epsilon(1e-15));
    CHECK(binary_accuracy(pred, truth) == binary_accuracy(pred_p, truth_p));
    CHECK(error_histogram(pred, truth) == error_histogram(pred_p, truth_p));
}

TEST_CASE("random_baseline: point mass, determinism, empirical frequencies")
{
    std::vector<int> constant(40, 3);
    auto pred = random_baseline(constant, 25, 7);
    REQUIRE(pred.size() == 25);
    for (int v : pred)
        CHECK(v == 3);

    std::vector<int> train{0, 0, 0, 0, 0, 1, 1, 1, 2, 2};
    auto a = random_baseline(train, 1000, 42);
    auto b = random_baseline(train, 1000, 42);
    CHECK(a == b);

    // 3-sigma multinomial bounds over 10000 draws
    auto draws = random_baseline(train, 10000, 99);
    double freq[3] = {0, 0, 0};
    for (int v : draws)
        freq[v] += 1.0;
    double expect[3] = {0.5, 0.3, 0.2};
    for (int k = 0; k < 3; ++k)
    {
        double sigma = std::sqrt(10000.0 * expect[k] * (1.0 - expect[k]));
        CHECK(std::abs(freq[k] - 10000.0 * expect[k]) <= 3.0 * sigma);
    }

    // input order does not matter
    std::vector<int> reordered{2, 1, 0, 0, 1, 0, 2, 0, 1, 0};
    CHECK(random_baseline(reordered, 50, 5) == random_baseline(train, 50, 5));

    CHECK_THROWS_AS(random_baseline({}, 5, 1), std::invalid_argument);
}

TEST_CASE("compare_pdp: identity, uniform offset, hand-computed case")
{
    Pdp t;
    t.delay_bins = {0.0, 0.5e-9, 1.0e-9};
    t.powers = {1e-3, 1e-6, 0.0};

    CHECK(compare_pdp({t}, {t}) == Catch::Approx(0.0).margin(1e-12));

    Pdp s = t;
    for (auto &p : s.powers)
        p *= 10.0;
    CHECK(compare_pdp({s}, {t}) == Catch::Approx(10.0).epsilon(1e-9));

    // hand case: bins above floor are 0 and 1; errors -10 dB and 0 dB
    Pdp s2 = t;
    s2.powers = {1e-4, 1e-6, 0.0};
    CHECK(compare_pdp({s2}, {t}) == Catch::Approx(std::sqrt(50.0)).epsilon(1e-9));

    Pdp bad = t;
    bad.delay_bins[2] = 2.0e-9;
    CHECK_THROWS_AS(compare_pdp({bad}, {t}), data_error);
    Pdp shorter;
    shorter.delay_bins = {0.0};
    shorter.powers = {1.0};
    CHECK_THROWS_AS(compare_pdp({shorter}, {t}), data_error);
}
