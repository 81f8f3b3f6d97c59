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
//
// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. The end-to-end criteria run the full desk-scale pipeline twice
// (9 conditions, 6 links x 100 snapshots) at default configuration.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <lcsim/lcsim.hpp>

#include "../test_oracles.hpp"

namespace fs = std::filesystem;
using namespace lcsim;

namespace
{

int g_failures = 0;

void report(bool ok, const std::string &name, const std::string &detail)
{
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.empty() ? "" : ": ",
                detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++g_failures;
}

std::string slurp(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return "<missing:" + path + ">";
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---------- criterion: rotating-calipers MBR vs brute force ----------

void check_mbr_oracle()
{
    Rng rng(0x3b12ULL);
    double worst = 0.0;
    for (int it = 0; it < 1000; ++it)
    {
        int n = 4 + static_cast<int>(rng.below(36));
        PointCloud c;
        Cluster cl;
        for (int i = 0; i < n; ++i)
        {
            c.points.push_back({rng.uniform(-12, 12), rng.uniform(-12, 12), rng.uniform(0, 4)});
            cl.member_indices.push_back(i);
        }
        ClusterCuboid cb = fit_cuboid(c, cl);
        double got = 2.0 * (cb.length + cb.width);
        double ref = testoracle::min_perimeter_bruteforce(c, cl);
        worst = std::max(worst, std::abs(got - ref));
    }
    report(worst < 1e-9, "mbr-oracle",
           "1000 random point sets, max |perimeter diff| = " + fmt(worst));
}

// ---------- criterion: DBSCAN vs quadratic reference ----------

void check_dbscan_oracle()
{
    Rng rng(0xDB5CA11ULL);
    bool all_equal = true;
    int total_points = 0;
    for (int it = 0; it < 200 && all_equal; ++it)
    {
        PointCloud c;
        int blobs = 2 + static_cast<int>(rng.below(6));
        for (int b = 0; b < blobs; ++b)
        {
            Vec3 ctr{rng.uniform(-30, 30), rng.uniform(-30, 30), rng.uniform(0, 4)};
            double radius = rng.uniform(0.3, 3.0);
            int m = 30 + static_cast<int>(rng.below(280));
            for (int i = 0; i < m; ++i)
                c.points.push_back(ctr + Vec3{rng.uniform(-radius, radius),
                                              rng.uniform(-radius, radius),
                                              rng.uniform(-radius, radius)});
        }
        int scattered = 20 + static_cast<int>(rng.below(60));
        for (int i = 0; i < scattered; ++i)
            c.points.push_back({rng.uniform(-60, 60), rng.uniform(-60, 60), rng.uniform(0, 6)});
        if (c.size() > 2000)
            c.points.resize(2000);
        total_points += static_cast<int>(c.size());

        double eps = rng.uniform(0.4, 1.5);
        int min_pts = 3 + static_cast<int>(rng.below(8));
        DbscanResult fast = dbscan(c, eps, min_pts);
        DbscanResult ref = testoracle::dbscan_reference(c, eps, min_pts);

        if (fast.noise_indices != ref.noise_indices ||
            fast.clusters.size() != ref.clusters.size())
            all_equal = false;
        else
            for (size_t k = 0; k < fast.clusters.size(); ++k)
                if (fast.clusters[k].member_indices != ref.clusters[k].member_indices)
                    all_equal = false;
    }
    report(all_equal, "dbscan-oracle",
           "200 random clouds (" + std::to_string(total_points) + " points) vs O(n^2) reference");
}

// ---------- criterion: analytic gradients vs finite differences ----------

void check_gradients()
{
    double worst = 0.0;
    for (uint64_t seed = 0; seed < 50; ++seed)
    {
        double rel = testoracle::gradient_check_max_rel_error({14, 16, 8, 1}, 4000 + seed, 8);
        worst = std::max(worst, rel);
    }
    report(worst < 1e-4, "gradient-check", "50 models, max relative error = " + fmt(worst));
}

// ---------- criterion: learning-rate schedule ----------

void check_lr_schedule()
{
    TrainConfig cfg;
    bool exact = true;
    for (int e = 0; e < 200; ++e)
        if (lr_for_epoch(cfg, e) != 1e-3 * std::pow(0.9, std::floor(e / 4.0)))
            exact = false;
    report(exact, "lr-schedule", "lr(epoch) = 1e-3 * 0.9^floor(epoch/4) for 200 epochs");
}

// ---------- criterion: channel power conservation ----------

void check_channel_conservation()
{
    Rng rng(0xC0A5eULL);
    ChannelParams params;
    double worst_paths = 0.0, worst_pdp = 0.0;
    for (int it = 0; it < 300; ++it)
    {
        TransceiverPose pose;
        pose.tx_position = {rng.uniform(-50, 0), rng.uniform(-10, 10), rng.uniform(1, 3)};
        pose.rx_position = {rng.uniform(5, 60), rng.uniform(-10, 10), rng.uniform(1, 3)};
        pose.tx_velocity = {rng.uniform(-15, 15), 0, 0};
        pose.rx_velocity = {rng.uniform(-15, 15), 0, 0};

        ScattererGroups stat, dyn;
        int nc = static_cast<int>(rng.below(4));
        uint64_t id = 1;
        for (int cidx = 0; cidx < nc; ++cidx)
        {
            std::vector<PathScatterer> g;
            int ns = 1 + static_cast<int>(rng.below(4));
            for (int k = 0; k < ns; ++k)
                g.push_back({{rng.uniform(-60, 60), rng.uniform(-60, 60), rng.uniform(0.5, 10)},
                             rng.uniform(0, 10),
                             id++});
            stat.push_back(g);
        }
        int mc = static_cast<int>(rng.below(3));
        for (int cidx = 0; cidx < mc; ++cidx)
        {
            std::vector<PathScatterer> g;
            int ns = 1 + static_cast<int>(rng.below(3));
            for (int k = 0; k < ns; ++k)
                g.push_back({{rng.uniform(-60, 60), rng.uniform(-60, 60), rng.uniform(0.5, 3)},
                             3.0,
                             id++});
            dyn.push_back(g);
        }
        bool blocked = rng.uniform() < 0.3;
        bool gr = rng.uniform() < 0.9;
        if (blocked && !gr && stat.empty() && dyn.empty())
            continue;

        Cir cir = synthesize_cir(stat, dyn, pose, params, 0.1 * it, 77, blocked, gr);
        double s = 0.0;
        for (const auto &p : cir.paths)
            s += p.power;
        worst_paths = std::max(worst_paths, std::abs(s - 1.0));

        Pdp prof = pdp(cir, params);
        double sb = 0.0;
        for (double v : prof.powers)
            sb += v;
        worst_pdp = std::max(worst_pdp, std::abs(sb - 1.0));
    }
    bool ok = worst_paths <= 1e-12 && worst_pdp <= 1e-12;

    // the exampled split: Omega = 1, eta = (0.2, 0.5, 0.3)
    TransceiverPose pose;
    pose.tx_position = {0, 0, 2};
    pose.rx_position = {100, 0, 2};
    ScattererGroups stat = {{{{30, 10, 3}, 6.0, 1}, {{60, -8, 5}, 6.0, 2}}};
    ScattererGroups dyn = {{{{50, 4, 1}, 3.0, 3}}};
    Cir cir = synthesize_cir(stat, dyn, pose, params, 0.0, 1, false);
    double sums[4] = {0, 0, 0, 0};
    for (const auto &p : cir.paths)
        sums[static_cast<int>(p.kind)] += p.power;
    double expect[4] = {0.5, 0.1, 0.25, 0.15};
    double worst_group = 0.0;
    for (int k = 0; k < 4; ++k)
        worst_group = std::max(worst_group, std::abs(sums[k] - expect[k]));
    ok = ok && worst_group <= 1e-12;

    report(ok, "channel-conservation",
           "300 random snapshots: max |sum-1| paths = " + fmt(worst_paths) +
               ", pdp = " + fmt(worst_pdp) + "; group-split error = " + fmt(worst_group));
}

// ---------- desk-scale end-to-end criteria ----------

struct DeskRun
{
    PipelineResult result;
    double seconds = 0.0;
    std::string root;
};

DeskRun desk_run(const SimConfig &cfg, const std::string &root)
{
    auto t0 = std::chrono::steady_clock::now();
    DeskRun run;
    run.root = root;
    fs::remove_all(root);
    run.result = run_pipeline(cfg, root);
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

void check_desk_criteria(const DeskRun &run, const SimConfig &cfg)
{
    const EvalOutcome &eval = run.result.eval;

    bool cells_ok = eval.conditions.size() == 9;
    double min_p = 1e300, min_margin = 1e300;
    for (const auto &c : eval.conditions)
    {
        min_p = std::min(min_p, c.P);
        min_margin = std::min(min_margin, c.P - c.P_baseline);
    }
    report(cells_ok && min_p >= 0.85, "recognition-accuracy",
           "9 conditions, min pooled P = " + fmt(min_p) + " (threshold 0.85)");
    report(cells_ok && min_margin >= 0.20, "baseline-margin",
           "min (P - P_baseline) = " + fmt(min_margin) + " (threshold 0.20)");

    report(eval.mass01 >= 0.85, "error-histogram",
           "test-split mass at |error| in {0,1} = " + fmt(eval.mass01) + " (threshold 0.85)");

    report(eval.total_vr_violations == 0, "vr-soundness",
           std::to_string(eval.total_vr_violations) + " post-filter clusters outside their VR");

    const PdpComparison &pdp = run.result.pdp;
    report(pdp.rmse_db <= 6.0, "pdp-fidelity",
           "recognized vs ground-truth PDP RMSE = " + fmt(pdp.rmse_db) + " dB (threshold 6)");
    report(pdp.los_bin_exact, "pdp-los-bin",
           "LoS peak sits in the bin anchored at the geometric LoS delay");
    report(pdp.max_identity_drift <= pdp.identity_drift_bound, "consistency-drift",
           "max per-path delay drift " + fmt(pdp.max_identity_drift) + " s <= bound " +
               fmt(pdp.identity_drift_bound) + " s");
    report(pdp.max_peak_drift <= pdp.peak_drift_bound, "pdp-peak-drift",
           "max adjacent-snapshot peak drift " + fmt(pdp.max_peak_drift) + " s <= bound " +
               fmt(pdp.peak_drift_bound) + " s");

    report(run.seconds <= 1800.0, "runtime",
           "desk run took " + fmt(run.seconds) + " s (limit 1800 s)");

    // conservation across every synthesized snapshot of the comparison link
    auto conditions = scan_dataset(run.root + "/dataset");
    const DatasetIndex *cond = nullptr;
    for (const auto &c : conditions)
        if (c.layout == cfg.pdp_layout && c.vtd == cfg.pdp_vtd)
            cond = &c;
    double worst = 1.0;
    if (cond)
    {
        LinkChannels ch = synthesize_link_channels(*cond, cfg.pdp_link, cfg,
                                                   run.result.recognizer.model,
                                                   run.result.recognizer.rho_static,
                                                   run.result.recognizer.rho_dynamic);
        worst = 0.0;
        for (const auto &cir : ch.recognized)
        {
            double s = 0.0;
            for (const auto &p : cir.paths)
                s += p.power;
            worst = std::max(worst, std::abs(s - 1.0));
        }
        for (const auto &cir : ch.truth)
        {
            double s = 0.0;
            for (const auto &p : cir.paths)
                s += p.power;
            worst = std::max(worst, std::abs(s - 1.0));
        }
    }
    report(cond && worst <= 1e-12, "snapshot-conservation",
           "max |power sum - 1| over all synthesized snapshots = " + fmt(worst));
}

void check_determinism(const DeskRun &a, const DeskRun &b)
{
    bool report_equal = slurp(a.root + "/report.json") == slurp(b.root + "/report.json");
    bool ckpt_equal = slurp(a.root + "/checkpoint.txt") == slurp(b.root + "/checkpoint.txt");
    bool log_equal = slurp(a.root + "/training_log.csv") == slurp(b.root + "/training_log.csv");
    report(report_equal && ckpt_equal && log_equal, "determinism",
           std::string("two full runs: report ") + (report_equal ? "identical" : "DIFFER") +
               ", checkpoint " + (ckpt_equal ? "identical" : "DIFFER") + ", training log " +
               (log_equal ? "identical" : "DIFFER"));
}

} // namespace

int main(int argc, char **argv)
{
    std::string out_root = "acceptance_runs";
    for (int i = 1; i + 1 < argc; i += 2)
        if (std::strcmp(argv[i], "--out") == 0)
            out_root = argv[i + 1];

    std::printf("== lcsim acceptance suite ==\n");

    check_mbr_oracle();
    check_dbscan_oracle();
    check_gradients();
    check_lr_schedule();
    check_channel_conservation();

    SimConfig cfg; // desk-scale defaults: 9 conditions, 6 links x 100 snapshots
    try
    {
        DeskRun run_a = desk_run(cfg, out_root + "/run_a");
        std::printf("-- desk run A finished in %.1f s (pooled P = %.4f)\n", run_a.seconds,
                    run_a.result.eval.pooled_P);
        check_desk_criteria(run_a, cfg);

        DeskRun run_b = desk_run(cfg, out_root + "/run_b");
        std::printf("-- desk run B finished in %.1f s\n", run_b.seconds);
        check_determinism(run_a, run_b);
    }
    catch (const std::exception &e)
    {
        report(false, "end-to-end", std::string("pipeline failed: ") + e.what());
    }

    std::printf("== %s (%d failure%s) ==\n", g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES",
                g_failures, g_failures == 1 ? "" : "s");
    return g_failures == 0 ? 0 : 1;
}
