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

#ifndef LCSIM_PIPELINE_HPP
#define LCSIM_PIPELINE_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "metrics.hpp"

namespace lcsim
{

// ---------- Recognizer training on a generated dataset ----------

struct RecognizerBundle
{
    MlpModel model;
    double rho_static = 1.0;  // VR major-axis ratio a/c per class
    double rho_dynamic = 1.0;
    std::vector<EpochStats> curve;
    int best_epoch = 0;
};

inline RecognizerBundle train_recognizer(const std::vector<DatasetIndex> &conditions,
                                         const SimConfig &cfg)
{
    TrainSet ts = build_train_set(conditions, cfg);
    TrainResult tr = train_mlp(ts, cfg.mlp_layers, cfg.train);

    std::vector<GroundTruth> gts = load_train_ground_truths(conditions, cfg);
    RecognizerBundle out;
    out.model = std::move(tr.model);
    out.curve = std::move(tr.curve);
    out.best_epoch = tr.best_epoch;
    out.rho_static = fit_vr(gts, ScattererKind::static_kind, cfg.vr_coverage_q);
    out.rho_dynamic = fit_vr(gts, ScattererKind::dynamic_kind, cfg.vr_coverage_q);
    return out;
}

// VR ratios recomputed from the training split (pure function of the data)
inline std::pair<double, double> fit_vr_from_dataset(const std::vector<DatasetIndex> &conditions,
                                                     const SimConfig &cfg)
{
    std::vector<GroundTruth> gts = load_train_ground_truths(conditions, cfg);
    return {fit_vr(gts, ScattererKind::static_kind, cfg.vr_coverage_q),
            fit_vr(gts, ScattererKind::dynamic_kind, cfg.vr_coverage_q)};
}

// ---------- Recognition inference on one snapshot ----------

// Counts after MLP regression and VR filtering
inline std::vector<int> recognize_counts(const std::vector<ClusterCuboid> &cuboids,
                                         const TransceiverPose &pose, const MlpModel &model,
                                         double rho_static, double rho_dynamic,
                                         const SimConfig &cfg)
{
    std::vector<int> counts = predict_counts(model, cuboids, pose);
    VREllipsoid vr_sta = make_vr(pose, rho_static, ScattererKind::static_kind);
    VREllipsoid vr_dyn = make_vr(pose, rho_dynamic, ScattererKind::dynamic_kind);
    return vr_filter(cuboids, counts, vr_sta, vr_dyn, cfg.vehicle_envelope);
}

// ---------- Evaluation over the test split ----------

struct ConditionResult
{
    StreetLayout layout = StreetLayout::vertical;
    Vtd vtd = Vtd::low;
    double P = 0.0, P_baseline = 0.0;
    double binary = 0.0, binary_baseline = 0.0;
    double regression = 0.0, regression_baseline = 0.0;
    long long n_all = 0;
    long long n_clusters = 0;
    int n_snapshots_eval = 0;
    long long vr_violations = 0;
    long long pred_sum = 0, truth_sum = 0;
};

struct CountRow
{
    StreetLayout layout;
    Vtd vtd;
    int link = 0;
    int snapshot = 0;
    long long pred = 0, truth = 0;
};

struct EvalOutcome
{
    std::vector<ConditionResult> conditions;
    std::map<int, double> error_hist; // pooled over the test split
    double pooled_P = 0.0;
    double mass01 = 0.0; // histogram mass at |error| in {0, 1}
    std::vector<CountRow> counts;
    long long total_vr_violations = 0;
};

inline EvalOutcome evaluate_dataset(const std::vector<DatasetIndex> &conditions,
                                    const SimConfig &cfg, const MlpModel &model,
                                    double rho_static, double rho_dynamic)
{
    EvalOutcome out;
    std::vector<int> pooled_pred, pooled_truth;

    for (const auto &cond : conditions)
    {
        ConditionResult cr;
        cr.layout = cond.layout;
        cr.vtd = cond.vtd;

        std::vector<int> cond_pred, cond_truth, cond_train_counts;

        for (int link = 0; link < cond.links; ++link)
        {
            const std::string ldir = paths::link_dir(cond.dir, link);
            std::vector<LabelRow> labels = load_labels(ldir);
            std::vector<PoseRow> poses = load_poses(ldir);
            std::vector<Split> split = make_split_assignment(cond.seed, cond.layout, cond.vtd,
                                                             link, cond.snapshots, cfg.train);

            // group label rows by snapshot (rows are written in snapshot order)
            size_t i = 0;
            while (i < labels.size())
            {
                int snap = labels[i].snapshot;
                size_t j = i;
                while (j < labels.size() && labels[j].snapshot == snap)
                    ++j;

                Split sp = split[static_cast<size_t>(snap)];
                if (sp == Split::train)
                {
                    for (size_t k = i; k < j; ++k)
                        cond_train_counts.push_back(labels[k].truth_count);
                }
                else if (sp == Split::test)
                {
                    const TransceiverPose &pose = poses[static_cast<size_t>(snap)].pose;
                    std::vector<ClusterCuboid> cuboids;
                    std::vector<int> truth_counts;
                    for (size_t k = i; k < j; ++k)
                    {
                        cuboids.push_back(labels[k].cuboid);
                        truth_counts.push_back(labels[k].truth_count);
                    }
                    std::vector<int> counts =
                        recognize_counts(cuboids, pose, model, rho_static, rho_dynamic, cfg);

                    // post-filter soundness bookkeeping
                    VREllipsoid vr_sta = make_vr(pose, rho_static, ScattererKind::static_kind);
                    VREllipsoid vr_dyn = make_vr(pose, rho_dynamic, ScattererKind::dynamic_kind);
                    CountRow row{cond.layout, cond.vtd, link, snap, 0, 0};
                    for (size_t k = 0; k < cuboids.size(); ++k)
                    {
                        const VREllipsoid &vr =
                            classify_cluster(cuboids[k], cfg.vehicle_envelope) ==
                                    ScattererKind::dynamic_kind
                                ? vr_dyn
                                : vr_sta;
                        if (counts[k] > 0 && !vr.contains(cuboids[k].center))
                            cr.vr_violations++;
                        row.pred += counts[k];
                        row.truth += truth_counts[k];
                    }
                    out.counts.push_back(row);
                    cr.n_snapshots_eval++;
                    cond_pred.insert(cond_pred.end(), counts.begin(), counts.end());
                    cond_truth.insert(cond_truth.end(), truth_counts.begin(), truth_counts.end());
                }
                i = j;
            }
        }

        std::vector<int> baseline = random_baseline(
            cond_train_counts, cond_pred.size(),
            hash_mix(cond.seed, 0xba5e11ULL,
                     static_cast<uint64_t>(cond.layout) * 3 + static_cast<uint64_t>(cond.vtd)));

        cr.P = accuracy(cond_pred, cond_truth);
        cr.P_baseline = accuracy(baseline, cond_truth);
        cr.binary = binary_accuracy(cond_pred, cond_truth);
        cr.binary_baseline = binary_accuracy(baseline, cond_truth);
        cr.regression = regression_accuracy(cond_pred, cond_truth);
        cr.regression_baseline = regression_accuracy(baseline, cond_truth);
        cr.n_clusters = static_cast<long long>(cond_pred.size());
        for (int t : cond_truth)
        {
            cr.n_all += t;
            cr.truth_sum += t;
        }
        for (int p : cond_pred)
            cr.pred_sum += p;
        out.total_vr_violations += cr.vr_violations;
        out.conditions.push_back(cr);

        pooled_pred.insert(pooled_pred.end(), cond_pred.begin(), cond_pred.end());
        pooled_truth.insert(pooled_truth.end(), cond_truth.begin(), cond_truth.end());
    }

    out.pooled_P = accuracy(pooled_pred, pooled_truth);
    out.error_hist = error_histogram(pooled_pred, pooled_truth);
    for (const auto &[err, p] : out.error_hist)
        if (err <= 1)
            out.mass01 += p;
    return out;
}

// ---------- Channel synthesis for one link ----------

struct LinkChannels
{
    std::vector<int> snapshots;
    std::vector<Cir> recognized;
    std::vector<Cir> truth;
    double snapshot_period = 0.1;
    double v_max_closing = 0.0; // bound input for the delay-drift invariant
};

namespace detail
{

// Loss guess for recognized clusters: vehicles from the envelope, small
// footprints among the statics are tree-like, the rest building-like.
inline double recognized_loss_db(const ClusterCuboid &cb, const VehicleEnvelope &env,
                                 const ReflectionLossDb &loss)
{
    if (classify_cluster(cb, env) == ScattererKind::dynamic_kind)
        return loss.vehicle;
    if (cb.length <= 2.5 && cb.width <= 2.5 && cb.height >= 2.0 && cb.height <= 9.0)
        return loss.tree;
    return loss.building;
}

// Ground-truth scatterers grouped into per-object clusters for Eq.-style
// double summation; identities key on (object, face).
inline void truth_groups(const GroundTruth &gt, ScattererGroups &stat, ScattererGroups &dyn)
{
    std::map<int, std::vector<const Scatterer *>> by_object;
    for (const auto &sc : gt.scatterers)
        by_object[sc.source_object_id].push_back(&sc);
    for (const auto &[obj_id, scs] : by_object)
    {
        std::vector<PathScatterer> group;
        for (const Scatterer *sc : scs)
            group.push_back({sc->position, sc->reflection_loss,
                             hash_mix(static_cast<uint64_t>(obj_id) + 1, 0xfaceULL,
                                      static_cast<uint64_t>(sc->face_index))});
        if (scs.front()->kind == ScattererKind::dynamic_kind)
            dyn.push_back(std::move(group));
        else
            stat.push_back(std::move(group));
    }
}

} // namespace detail

// Synthesize the recognized-scatterer and ground-truth channels for every
// snapshot of one link. Phase keys are stable across snapshots.
inline LinkChannels synthesize_link_channels(const DatasetIndex &cond, int link,
                                             const SimConfig &cfg, const MlpModel &model,
                                             double rho_static, double rho_dynamic)
{
    LinkChannels out;
    const std::string ldir = paths::link_dir(cond.dir, link);
    std::vector<LabelRow> labels = load_labels(ldir);
    std::vector<PoseRow> poses = load_poses(ldir);
    out.snapshot_period = cfg.scene.snapshot_period;

    Scene scene0 = read_scene(cond.dir + "/scene.json");
    double v_obj_max = 0.0;
    for (const auto &o : scene0.objects)
        v_obj_max = std::max(v_obj_max, norm(o.velocity));
    out.v_max_closing = 4.0 * v_obj_max; // |v_tx| + |v_rx| + 2 max|v_s| upper bound

    uint64_t phase_seed = hash_mix(cfg.seed, 0x9fa5eULL,
                                   static_cast<uint64_t>(cond.layout) * 3 +
                                       static_cast<uint64_t>(cond.vtd),
                                   static_cast<uint64_t>(link));

    size_t li = 0;
    for (int snap = 0; snap < cond.snapshots; ++snap)
    {
        const PoseRow &pr = poses[static_cast<size_t>(snap)];
        double t = snap * cfg.scene.snapshot_period;
        GroundTruth gt = read_ground_truth(paths::truth_path(ldir, snap));

        // ground-truth channel
        ScattererGroups stat, dyn;
        detail::truth_groups(gt, stat, dyn);
        out.truth.push_back(synthesize_cir(stat, dyn, pr.pose, cfg.channel, t, phase_seed,
                                           gt.los_blocked, gt.gr_valid));
        out.truth.back().snapshot_index = snap;

        // recognized channel: re-cluster the stored cloud, regress counts,
        // filter, then place scatterers on cluster points
        PointCloud cloud = read_point_cloud(paths::cloud_path(ldir, snap));
        DbscanResult db = dbscan(cloud, cfg.dbscan_eps, cfg.dbscan_min_pts);
        std::vector<ClusterCuboid> cuboids;
        cuboids.reserve(db.clusters.size());
        for (const auto &cl : db.clusters)
            cuboids.push_back(fit_cuboid(cloud, cl));

        // sanity: labels were produced from the same clustering
        size_t lj = li;
        while (lj < labels.size() && labels[lj].snapshot == snap)
            ++lj;
        if (lj - li != cuboids.size())
            throw data_error("synthesize_link_channels: cluster count mismatch vs labels at snapshot " +
                             std::to_string(snap));
        li = lj;

        std::vector<int> counts =
            recognize_counts(cuboids, pr.pose, model, rho_static, rho_dynamic, cfg);

        ScattererGroups rec_stat, rec_dyn;
        for (size_t c = 0; c < cuboids.size(); ++c)
        {
            if (counts[c] <= 0)
                continue;
            std::vector<Vec3> pos = assign_positions(cloud, db.clusters[c], counts[c], pr.pose,
                                                     phase_seed, cfg.position_spacing);
            double loss_db =
                detail::recognized_loss_db(cuboids[c], cfg.vehicle_envelope, cfg.reflection_loss);
            std::vector<PathScatterer> group;
            for (size_t k = 0; k < pos.size(); ++k)
                group.push_back(
                    {pos[k], loss_db, hash_mix(0x9ecULL, static_cast<uint64_t>(c), k)});
            if (classify_cluster(cuboids[c], cfg.vehicle_envelope) == ScattererKind::dynamic_kind)
                rec_dyn.push_back(std::move(group));
            else
                rec_stat.push_back(std::move(group));
        }
        out.recognized.push_back(synthesize_cir(rec_stat, rec_dyn, pr.pose, cfg.channel, t,
                                                phase_seed, gt.los_blocked, gt.gr_valid));
        out.recognized.back().snapshot_index = snap;
        out.snapshots.push_back(snap);
    }
    return out;
}

// ---------- PDP comparison (recognized vs ground truth) ----------

struct PdpComparison
{
    StreetLayout layout = StreetLayout::crossing;
    Vtd vtd = Vtd::high;
    int link = 0;
    double rmse_db = 0.0;
    bool los_bin_exact = true;       // LoS peak in bin 0 whenever unblocked
    double max_identity_drift = 0.0; // s, over persistent truth-path identities
    double identity_drift_bound = 0.0;
    double max_peak_drift = 0.0;     // s, over same-LoS-state adjacent snapshots
    double peak_drift_bound = 0.0;
    std::vector<int> snapshots;
    std::vector<Pdp> sim_pdps, truth_pdps; // band-limited, shared per-snapshot grids
};

inline PdpComparison compare_link_pdp(const LinkChannels &ch, const SimConfig &cfg,
                                      StreetLayout layout, Vtd vtd, int link)
{
    PdpComparison out;
    out.layout = layout;
    out.vtd = vtd;
    out.link = link;
    out.snapshots = ch.snapshots;

    const double width = 1.0 / cfg.channel.bandwidth;
    for (size_t s = 0; s < ch.snapshots.size(); ++s)
    {
        const Cir &sim = ch.recognized[s];
        const Cir &truth = ch.truth[s];
        double tau_max = std::max(sim.tau_los, truth.tau_los);
        for (const auto &p : sim.paths)
            tau_max = std::max(tau_max, p.delay);
        for (const auto &p : truth.paths)
            tau_max = std::max(tau_max, p.delay);
        size_t n_bins = static_cast<size_t>(std::floor((tau_max - truth.tau_los) / width)) + 4;
        out.sim_pdps.push_back(pdp_bandlimited(sim, cfg.channel, n_bins));
        out.truth_pdps.push_back(pdp_bandlimited(truth, cfg.channel, n_bins));
    }

    out.rmse_db = compare_pdp(out.sim_pdps, out.truth_pdps);

    // LoS bin: grid anchored at the geometric LoS delay; when the LoS ray is
    // present it must be the profile peak, in bin zero.
    for (size_t s = 0; s < ch.snapshots.size(); ++s)
    {
        bool has_los = false;
        for (const auto &p : ch.recognized[s].paths)
            has_los = has_los || p.kind == PathKind::los;
        if (!has_los)
            continue;
        if (out.sim_pdps[s].delay_bins[0] != ch.recognized[s].tau_los)
            out.los_bin_exact = false;
        size_t arg_sim = 0, arg_truth = 0;
        for (size_t k = 1; k < out.sim_pdps[s].powers.size(); ++k)
            if (out.sim_pdps[s].powers[k] > out.sim_pdps[s].powers[arg_sim])
                arg_sim = k;
        for (size_t k = 1; k < out.truth_pdps[s].powers.size(); ++k)
            if (out.truth_pdps[s].powers[k] > out.truth_pdps[s].powers[arg_truth])
                arg_truth = k;
        if (arg_sim != 0 || arg_truth != 0)
            out.los_bin_exact = false;
    }

    // Environment-channel consistency: persistent truth-path identities may
    // drift at most (closing speed / c) per snapshot.
    double dt = ch.snapshot_period;
    out.identity_drift_bound = ch.v_max_closing / kSpeedOfLight * dt + 1e-12;
    out.peak_drift_bound = out.identity_drift_bound + width;
    for (size_t s = 0; s + 1 < ch.truth.size(); ++s)
    {
        std::map<uint64_t, double> delays;
        for (const auto &p : ch.truth[s].paths)
            delays[p.identity] = p.delay;
        for (const auto &p : ch.truth[s + 1].paths)
        {
            auto it = delays.find(p.identity);
            if (it != delays.end())
                out.max_identity_drift =
                    std::max(out.max_identity_drift, std::abs(p.delay - it->second));
        }

        // peak drift is bounded only while the peak keeps its path identity
        auto strongest = [](const Cir &c) -> const PathComponent *
        {
            const PathComponent *best = nullptr;
            for (const auto &p : c.paths)
                if (!best || p.power > best->power)
                    best = &p;
            return best;
        };
        const PathComponent *pa = strongest(ch.truth[s]);
        const PathComponent *pb = strongest(ch.truth[s + 1]);
        if (!pa || !pb || pa->identity != pb->identity)
            continue;
        auto peak_delay = [](const Pdp &pd)
        {
            size_t arg = 0;
            for (size_t k = 1; k < pd.powers.size(); ++k)
                if (pd.powers[k] > pd.powers[arg])
                    arg = k;
            return pd.delay_bins[arg];
        };
        double drift =
            std::abs(peak_delay(out.truth_pdps[s + 1]) - peak_delay(out.truth_pdps[s]));
        out.max_peak_drift = std::max(out.max_peak_drift, drift);
    }
    return out;
}

// ---------- Report ----------

inline nlohmann::json report_to_json(const SimConfig &cfg, const EvalOutcome &eval,
                                     const PdpComparison &pdp)
{
    nlohmann::json jconds = nlohmann::json::array();
    for (const auto &c : eval.conditions)
        jconds.push_back({{"layout", to_string(c.layout)},
                          {"vtd", to_string(c.vtd)},
                          {"P", c.P},
                          {"P_baseline", c.P_baseline},
                          {"binary", c.binary},
                          {"binary_baseline", c.binary_baseline},
                          {"regression", c.regression},
                          {"regression_baseline", c.regression_baseline},
                          {"n_all", c.n_all},
                          {"n_clusters", c.n_clusters},
                          {"n_snapshots_eval", c.n_snapshots_eval},
                          {"vr_violations", c.vr_violations},
                          {"pred_sum", c.pred_sum},
                          {"truth_sum", c.truth_sum}});

    nlohmann::json jhist = nlohmann::json::array();
    for (const auto &[err, p] : eval.error_hist)
        jhist.push_back({{"abs_error", err}, {"probability", p}});

    nlohmann::json jcounts = nlohmann::json::array();
    for (const auto &r : eval.counts)
        jcounts.push_back({{"layout", to_string(r.layout)},
                           {"vtd", to_string(r.vtd)},
                           {"link", r.link},
                           {"snapshot", r.snapshot},
                           {"pred", r.pred},
                           {"truth", r.truth}});

    auto profiles = [](const std::vector<Pdp> &pdps)
    {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &p : pdps)
            arr.push_back(nlohmann::json{{"delay0", p.delay_bins.empty() ? 0.0 : p.delay_bins[0]},
                                         {"powers", p.powers}});
        return arr;
    };

    nlohmann::json jpdp{{"layout", to_string(pdp.layout)},
                        {"vtd", to_string(pdp.vtd)},
                        {"link", pdp.link},
                        {"rmse_db", pdp.rmse_db},
                        {"los_bin_exact", pdp.los_bin_exact},
                        {"max_identity_drift_s", pdp.max_identity_drift},
                        {"identity_drift_bound_s", pdp.identity_drift_bound},
                        {"max_peak_drift_s", pdp.max_peak_drift},
                        {"peak_drift_bound_s", pdp.peak_drift_bound},
                        {"bin_width_s", 1.0 / cfg.channel.bandwidth},
                        {"snapshots", pdp.snapshots},
                        {"profiles_recognized", profiles(pdp.sim_pdps)},
                        {"profiles_truth", profiles(pdp.truth_pdps)}};

    return nlohmann::json{{"config", to_json(cfg)},
                          {"conditions", jconds},
                          {"error_histogram", jhist},
                          {"pooled_P", eval.pooled_P},
                          {"error_mass_01", eval.mass01},
                          {"total_vr_violations", eval.total_vr_violations},
                          {"counts", jcounts},
                          {"pdp", jpdp}};
}

// Figure-style CSV emission from a report (Figs. 4-8 analogues)
inline void emit_report_csvs(const nlohmann::json &report, const std::string &dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    try
    {
        {
            auto out = ioutil::open_out(dir + "/fig4_accuracy.csv");
            out << "layout,vtd,accuracy\n";
            for (const auto &c : report.at("conditions"))
                out << c.at("layout").get<std::string>() << "," << c.at("vtd").get<std::string>()
                    << "," << ioutil::fmt(c.at("P").get<double>(), 9) << "\n";
        }
        {
            auto out = ioutil::open_out(dir + "/fig5_error_histogram.csv");
            out << "abs_error,probability\n";
            for (const auto &h : report.at("error_histogram"))
                out << h.at("abs_error").get<int>() << ","
                    << ioutil::fmt(h.at("probability").get<double>(), 9) << "\n";
        }
        {
            auto out = ioutil::open_out(dir + "/fig6_counts.csv");
            out << "layout,vtd,link,snapshot,recognized_total,truth_total\n";
            for (const auto &r : report.at("counts"))
                out << r.at("layout").get<std::string>() << "," << r.at("vtd").get<std::string>()
                    << "," << r.at("link").get<int>() << "," << r.at("snapshot").get<int>() << ","
                    << r.at("pred").get<long long>() << "," << r.at("truth").get<long long>()
                    << "\n";
        }
        {
            auto out = ioutil::open_out(dir + "/fig7_baseline.csv");
            out << "layout,vtd,model_P,baseline_P,model_binary,baseline_binary,"
                   "model_regression,baseline_regression\n";
            for (const auto &c : report.at("conditions"))
                out << c.at("layout").get<std::string>() << "," << c.at("vtd").get<std::string>()
                    << "," << ioutil::fmt(c.at("P").get<double>(), 9) << ","
                    << ioutil::fmt(c.at("P_baseline").get<double>(), 9) << ","
                    << ioutil::fmt(c.at("binary").get<double>(), 9) << ","
                    << ioutil::fmt(c.at("binary_baseline").get<double>(), 9) << ","
                    << ioutil::fmt(c.at("regression").get<double>(), 9) << ","
                    << ioutil::fmt(c.at("regression_baseline").get<double>(), 9) << "\n";
        }
        const auto &jpdp = report.at("pdp");
        double width = jpdp.at("bin_width_s").get<double>();
        auto dump_profiles = [&](const char *key, const std::string &path)
        {
            auto out = ioutil::open_out(path);
            write_pdp_header(out);
            const auto &snaps = jpdp.at("snapshots");
            const auto &profs = jpdp.at(key);
            for (size_t s = 0; s < profs.size(); ++s)
            {
                double d0 = profs[s].at("delay0").get<double>();
                const auto &pw = profs[s].at("powers");
                for (size_t k = 0; k < pw.size(); ++k)
                    out << snaps[s].get<int>() << ","
                        << ioutil::fmt(d0 + static_cast<double>(k) * width, 12) << ","
                        << ioutil::fmt(pw[k].get<double>(), 12) << "\n";
            }
        };
        dump_profiles("profiles_recognized", dir + "/fig8_pdp_recognized.csv");
        dump_profiles("profiles_truth", dir + "/fig8_pdp_truth.csv");
    }
    catch (const nlohmann::json::exception &e)
    {
        throw data_error(std::string("report emit error: ") + e.what());
    }
}

// ---------- End-to-end pipeline ----------

struct PipelineResult
{
    EvalOutcome eval;
    PdpComparison pdp;
    RecognizerBundle recognizer;
    std::string report_path;
    std::string checkpoint_path;
};

// Generate the 9-condition dataset, train, evaluate, synthesize the PDP
// comparison link, and write report + figure CSVs + checkpoint under
// out_root. On failure the partial artifacts are removed.
inline PipelineResult run_pipeline(const SimConfig &cfg, const std::string &out_root)
{
    namespace fs = std::filesystem;
    cfg.validate();
    const bool existed_before = fs::exists(out_root);
    fs::create_directories(out_root);

    try
    {
        const std::string data_root = out_root + "/dataset";
        for (StreetLayout l : kAllLayouts)
            for (Vtd v : kAllVtds)
                gen_condition(cfg, l, v, data_root);
        save_config(cfg, data_root + "/config.json");

        std::vector<DatasetIndex> conditions = scan_dataset(data_root);

        PipelineResult result;
        result.recognizer = train_recognizer(conditions, cfg);
        result.checkpoint_path = out_root + "/checkpoint.txt";
        write_checkpoint(result.checkpoint_path, result.recognizer.model);
        write_training_log(out_root + "/training_log.csv", result.recognizer.curve);

        result.eval = evaluate_dataset(conditions, cfg, result.recognizer.model,
                                       result.recognizer.rho_static,
                                       result.recognizer.rho_dynamic);

        const DatasetIndex *pdp_cond = nullptr;
        for (const auto &c : conditions)
            if (c.layout == cfg.pdp_layout && c.vtd == cfg.pdp_vtd)
                pdp_cond = &c;
        if (!pdp_cond)
            throw data_error("run_pipeline: PDP comparison condition missing from dataset");

        LinkChannels ch =
            synthesize_link_channels(*pdp_cond, cfg.pdp_link, cfg, result.recognizer.model,
                                     result.recognizer.rho_static, result.recognizer.rho_dynamic);
        result.pdp = compare_link_pdp(ch, cfg, cfg.pdp_layout, cfg.pdp_vtd, cfg.pdp_link);

        {
            auto out = ioutil::open_out(out_root + "/cir_recognized.csv");
            write_cir_header(out);
            for (const auto &cir : ch.recognized)
                write_cir_rows(out, cir);
        }
        {
            auto out = ioutil::open_out(out_root + "/cir_truth.csv");
            write_cir_header(out);
            for (const auto &cir : ch.truth)
                write_cir_rows(out, cir);
        }

        nlohmann::json report = report_to_json(cfg, result.eval, result.pdp);
        result.report_path = out_root + "/report.json";
        {
            auto out = ioutil::open_out(result.report_path);
            out << report.dump(1) << "\n";
        }
        emit_report_csvs(report, out_root);
        return result;
    }
    catch (...)
    {
        std::error_code ec;
        if (!existed_before)
            fs::remove_all(out_root, ec);
        else
            for (const char *sub : {"dataset", "checkpoint.txt", "training_log.csv",
                                    "report.json", "cir_recognized.csv", "cir_truth.csv"})
                fs::remove_all(out_root + "/" + sub, ec);
        throw;
    }
}

} // namespace lcsim

#endif
