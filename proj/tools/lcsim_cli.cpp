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
// Command-line front end: gen / train / eval / simulate / report / pipeline.
// Exit codes: 0 success, 1 invalid config, 2 data error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <lcsim/lcsim.hpp>

namespace fs = std::filesystem;

namespace
{

struct LinkRef
{
    lcsim::StreetLayout layout;
    lcsim::Vtd vtd;
    int link = 0;
};

// link ids look like "crossing:high:1"
LinkRef parse_link_id(const std::string &id)
{
    size_t a = id.find(':');
    size_t b = id.find(':', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos)
        throw lcsim::config_error("link id must look like '<layout>:<vtd>:<index>'");
    LinkRef ref;
    ref.layout = lcsim::layout_from_string(id.substr(0, a));
    ref.vtd = lcsim::vtd_from_string(id.substr(a + 1, b - a - 1));
    ref.link = std::stoi(id.substr(b + 1));
    if (ref.link < 0 || ref.link >= lcsim::kLinksPerScene)
        throw lcsim::config_error("link index out of range");
    return ref;
}

lcsim::SimConfig load_or_default(const std::string &config_path)
{
    if (config_path.empty())
        return lcsim::SimConfig{};
    return lcsim::load_config(config_path);
}

// data-dir config is authoritative for processing; an explicit --config may
// override it (the caller is responsible for keeping processing keys equal)
lcsim::SimConfig dataset_config(const std::string &data_root, const std::string &config_path)
{
    if (!config_path.empty())
        return lcsim::load_config(config_path);
    std::string stored = data_root + "/config.json";
    if (fs::exists(stored))
        return lcsim::load_config(stored);
    return lcsim::SimConfig{};
}

const lcsim::DatasetIndex &find_condition(const std::vector<lcsim::DatasetIndex> &conditions,
                                          lcsim::StreetLayout layout, lcsim::Vtd vtd)
{
    for (const auto &c : conditions)
        if (c.layout == layout && c.vtd == vtd)
            return c;
    throw lcsim::data_error(std::string("condition not present in dataset: ") +
                            lcsim::to_string(layout) + "_" + lcsim::to_string(vtd));
}

int run(int argc, char **argv)
{
    CLI::App app{"LiDAR-driven scatterer recognition and vehicular channel simulation"};
    app.require_subcommand(1);

    // ---- gen ----
    auto *gen = app.add_subcommand("gen", "Generate one (layout, vtd) dataset condition");
    std::string gen_layout = "crossing", gen_vtd = "high", gen_out, gen_config;
    uint64_t gen_seed = 0;
    bool gen_seed_set = false;
    int gen_snapshots = 0, gen_threads = 0;
    gen->add_option("--layout", gen_layout, "street layout: vertical|horizontal|crossing");
    gen->add_option("--vtd", gen_vtd, "traffic density: low|medium|high");
    gen->add_option("--seed", gen_seed, "dataset seed")->each([&](const std::string &) { gen_seed_set = true; });
    gen->add_option("--snapshots", gen_snapshots, "snapshots per link");
    gen->add_option("--out", gen_out, "dataset root directory")->required();
    gen->add_option("--config", gen_config, "config file (JSON)");
    gen->add_option("--threads", gen_threads, "worker threads (0 = hardware)");

    // ---- train ----
    auto *train = app.add_subcommand("train", "Train the count regressor on a dataset");
    std::string train_data, train_config, train_out;
    train->add_option("--data", train_data, "dataset root")->required();
    train->add_option("--config", train_config, "config file (JSON)");
    train->add_option("--out", train_out, "checkpoint output path")->required();

    // ---- eval ----
    auto *eval = app.add_subcommand("eval", "Evaluate a checkpoint on the test split");
    std::string eval_data, eval_ckpt, eval_report, eval_config;
    eval->add_option("--data", eval_data, "dataset root")->required();
    eval->add_option("--ckpt", eval_ckpt, "checkpoint path")->required();
    eval->add_option("--report", eval_report, "report JSON output path")->required();
    eval->add_option("--config", eval_config, "config file (JSON)");

    // ---- simulate ----
    auto *sim = app.add_subcommand("simulate", "Synthesize channels for one link");
    std::string sim_data, sim_ckpt, sim_link, sim_out, sim_config;
    sim->add_option("--data", sim_data, "dataset root")->required();
    sim->add_option("--ckpt", sim_ckpt, "checkpoint path")->required();
    sim->add_option("--link", sim_link, "link id '<layout>:<vtd>:<index>'")->required();
    sim->add_option("--out", sim_out, "output directory")->required();
    sim->add_option("--config", sim_config, "config file (JSON)");

    // ---- report ----
    auto *rep = app.add_subcommand("report", "Emit figure CSVs from a report.json");
    std::string rep_in;
    rep->add_option("--in", rep_in, "directory containing report.json")->required();

    // ---- pipeline ----
    auto *pipe = app.add_subcommand("pipeline", "End-to-end run: gen + train + eval + simulate");
    std::string pipe_config, pipe_out;
    int pipe_threads = -1;
    pipe->add_option("--config", pipe_config, "config file (JSON)");
    pipe->add_option("--out", pipe_out, "output directory")->required();
    pipe->add_option("--threads", pipe_threads, "worker threads (0 = hardware)");

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed())
    {
        lcsim::SimConfig cfg = load_or_default(gen_config);
        if (gen_seed_set)
            cfg.seed = gen_seed;
        if (gen_snapshots > 0)
            cfg.snapshots_per_link = gen_snapshots;
        if (gen_threads > 0)
            cfg.threads = gen_threads;
        cfg.validate();
        lcsim::gen_condition(cfg, lcsim::layout_from_string(gen_layout),
                             lcsim::vtd_from_string(gen_vtd), gen_out);
        lcsim::save_config(cfg, gen_out + "/config.json");
        std::printf("generated %s_%s under %s (%d snapshots x %d links)\n", gen_layout.c_str(),
                    gen_vtd.c_str(), gen_out.c_str(), cfg.snapshots_per_link,
                    lcsim::kLinksPerScene);
    }
    else if (train->parsed())
    {
        lcsim::SimConfig cfg = dataset_config(train_data, train_config);
        auto conditions = lcsim::scan_dataset(train_data);
        lcsim::RecognizerBundle bundle = lcsim::train_recognizer(conditions, cfg);
        lcsim::write_checkpoint(train_out, bundle.model);
        lcsim::write_training_log(train_out + ".log.csv", bundle.curve);
        std::printf("trained %zu epochs, best epoch %d (val mse %.6g); checkpoint: %s\n",
                    bundle.curve.size(), bundle.best_epoch,
                    bundle.curve[static_cast<size_t>(bundle.best_epoch)].val_mse,
                    train_out.c_str());
        std::printf("vr ratios: static %.6g dynamic %.6g\n", bundle.rho_static,
                    bundle.rho_dynamic);
    }
    else if (eval->parsed())
    {
        lcsim::SimConfig cfg = dataset_config(eval_data, eval_config);
        auto conditions = lcsim::scan_dataset(eval_data);
        lcsim::MlpModel model = lcsim::read_checkpoint(eval_ckpt);
        auto [rho_sta, rho_dyn] = lcsim::fit_vr_from_dataset(conditions, cfg);
        lcsim::EvalOutcome outcome =
            lcsim::evaluate_dataset(conditions, cfg, model, rho_sta, rho_dyn);

        const lcsim::DatasetIndex &pdp_cond = find_condition(conditions, cfg.pdp_layout, cfg.pdp_vtd);
        lcsim::LinkChannels ch = lcsim::synthesize_link_channels(pdp_cond, cfg.pdp_link, cfg,
                                                                 model, rho_sta, rho_dyn);
        lcsim::PdpComparison pdp =
            lcsim::compare_link_pdp(ch, cfg, cfg.pdp_layout, cfg.pdp_vtd, cfg.pdp_link);

        nlohmann::json report = lcsim::report_to_json(cfg, outcome, pdp);
        auto out = lcsim::ioutil::open_out(eval_report);
        out << report.dump(1) << "\n";
        for (const auto &c : outcome.conditions)
            std::printf("%-10s %-6s P=%.4f baseline=%.4f binary=%.4f regression=%.4f\n",
                        lcsim::to_string(c.layout), lcsim::to_string(c.vtd), c.P, c.P_baseline,
                        c.binary, c.regression);
        std::printf("pooled P=%.4f mass(|err|<=1)=%.4f pdp_rmse=%.3f dB\n", outcome.pooled_P,
                    outcome.mass01, pdp.rmse_db);
    }
    else if (sim->parsed())
    {
        lcsim::SimConfig cfg = dataset_config(sim_data, sim_config);
        LinkRef ref = parse_link_id(sim_link);
        auto conditions = lcsim::scan_dataset(sim_data);
        lcsim::MlpModel model = lcsim::read_checkpoint(sim_ckpt);
        auto [rho_sta, rho_dyn] = lcsim::fit_vr_from_dataset(conditions, cfg);
        const lcsim::DatasetIndex &cond = find_condition(conditions, ref.layout, ref.vtd);

        lcsim::LinkChannels ch =
            lcsim::synthesize_link_channels(cond, ref.link, cfg, model, rho_sta, rho_dyn);
        fs::create_directories(sim_out);
        {
            auto out = lcsim::ioutil::open_out(sim_out + "/cir_recognized.csv");
            lcsim::write_cir_header(out);
            for (const auto &cir : ch.recognized)
                lcsim::write_cir_rows(out, cir);
        }
        {
            auto out = lcsim::ioutil::open_out(sim_out + "/cir_truth.csv");
            lcsim::write_cir_header(out);
            for (const auto &cir : ch.truth)
                lcsim::write_cir_rows(out, cir);
        }
        lcsim::PdpComparison pdp = lcsim::compare_link_pdp(ch, cfg, ref.layout, ref.vtd, ref.link);
        {
            auto out = lcsim::ioutil::open_out(sim_out + "/pdp_recognized.csv");
            lcsim::write_pdp_header(out);
            for (size_t s = 0; s < pdp.sim_pdps.size(); ++s)
                lcsim::write_pdp_rows(out, pdp.snapshots[s], pdp.sim_pdps[s]);
        }
        {
            auto out = lcsim::ioutil::open_out(sim_out + "/pdp_truth.csv");
            lcsim::write_pdp_header(out);
            for (size_t s = 0; s < pdp.truth_pdps.size(); ++s)
                lcsim::write_pdp_rows(out, pdp.snapshots[s], pdp.truth_pdps[s]);
        }
        {
            // per-snapshot cluster dump for the simulated link
            auto out = lcsim::ioutil::open_out(sim_out + "/clusters.txt");
            const std::string ldir = lcsim::paths::link_dir(cond.dir, ref.link);
            for (int s = 0; s < cond.snapshots; ++s)
            {
                lcsim::PointCloud cloud = lcsim::read_point_cloud(lcsim::paths::cloud_path(ldir, s));
                lcsim::DbscanResult db = lcsim::dbscan(cloud, cfg.dbscan_eps, cfg.dbscan_min_pts);
                std::vector<lcsim::ClusterCuboid> cuboids;
                for (const auto &cl : db.clusters)
                    cuboids.push_back(lcsim::fit_cuboid(cloud, cl));
                out << "# snapshot " << s << "\n";
                lcsim::write_clusters(out, db.clusters, cuboids);
            }
        }
        std::printf("simulated link %s: %zu snapshots, pdp_rmse=%.3f dB -> %s\n",
                    sim_link.c_str(), ch.snapshots.size(), pdp.rmse_db, sim_out.c_str());
    }
    else if (rep->parsed())
    {
        std::string path = rep_in + "/report.json";
        auto in = lcsim::ioutil::open_in(path);
        nlohmann::json report;
        try
        {
            in >> report;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw lcsim::data_error(std::string("report.json parse error: ") + e.what());
        }
        lcsim::emit_report_csvs(report, rep_in);
        std::printf("figure CSVs written to %s\n", rep_in.c_str());
    }
    else if (pipe->parsed())
    {
        lcsim::SimConfig cfg = load_or_default(pipe_config);
        if (pipe_threads >= 0)
            cfg.threads = pipe_threads;
        lcsim::PipelineResult result = lcsim::run_pipeline(cfg, pipe_out);
        for (const auto &c : result.eval.conditions)
            std::printf("%-10s %-6s P=%.4f baseline=%.4f\n", lcsim::to_string(c.layout),
                        lcsim::to_string(c.vtd), c.P, c.P_baseline);
        std::printf("pooled P=%.4f mass(|err|<=1)=%.4f pdp_rmse=%.3f dB report=%s\n",
                    result.eval.pooled_P, result.eval.mass01, result.pdp.rmse_db,
                    result.report_path.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    try
    {
        return run(argc, argv);
    }
    catch (const lcsim::config_error &e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    }
    catch (const std::invalid_argument &e)
    {
        std::fprintf(stderr, "invalid argument: %s\n", e.what());
        return 1;
    }
    catch (const lcsim::data_error &e)
    {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
