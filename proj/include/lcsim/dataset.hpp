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

#ifndef LCSIM_DATASET_HPP
#define LCSIM_DATASET_HPP

#include <atomic>
#include <filesystem>
#include <mutex>
#include <thread>

#include "config.hpp"
#include "io.hpp"
#include "lidar.hpp"
#include "recognizer.hpp"

namespace lcsim
{

// ---------- Parallel map over snapshot indices ----------

template <typename Fn>
inline void parallel_for(int n, int threads, Fn &&fn)
{
    if (threads <= 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, n));
    if (threads == 1)
    {
        for (int i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(
            [&]
            {
                try
                {
                    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                        fn(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            });
    for (auto &th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

// ---------- Split assignment ----------

enum class Split
{
    train,
    val,
    test
};

inline const char *to_string(Split s)
{
    switch (s)
    {
    case Split::train: return "train";
    case Split::val: return "val";
    default: return "test";
    }
}

// Deterministic per-link 3:1:1 split: a seeded permutation of the snapshot
// indices is cut at the exact split fractions, so the assignment is a pure
// function of (seed, condition, link, snapshot, n_snapshots).
inline std::vector<Split> make_split_assignment(uint64_t seed, StreetLayout layout, Vtd vtd,
                                                int link, int n_snapshots,
                                                const TrainConfig &cfg)
{
    std::vector<int> perm(static_cast<size_t>(n_snapshots));
    for (int i = 0; i < n_snapshots; ++i)
        perm[static_cast<size_t>(i)] = i;
    Rng rng(hash_mix(seed, 0x59117ULL, static_cast<uint64_t>(layout) * 3 + static_cast<uint64_t>(vtd),
                     static_cast<uint64_t>(link)));
    shuffle(perm, rng);

    int n_train = static_cast<int>(std::llround(cfg.split_train * n_snapshots));
    int n_val = static_cast<int>(std::llround((cfg.split_train + cfg.split_val) * n_snapshots)) - n_train;

    std::vector<Split> out(static_cast<size_t>(n_snapshots), Split::test);
    for (int rank = 0; rank < n_snapshots; ++rank)
    {
        int snap = perm[static_cast<size_t>(rank)];
        out[static_cast<size_t>(snap)] = rank < n_train          ? Split::train
                                         : rank < n_train + n_val ? Split::val
                                                                  : Split::test;
    }
    return out;
}

// ---------- Per-snapshot processing (Fig. 2 Steps 1-4 plus labeling) ----------

struct LinkSnapshot
{
    int snapshot = 0;
    TransceiverPose pose;
    PointCloud processed; // concatenated, ground-removed, downsampled, quantized
    std::vector<Cluster> clusters;
    std::vector<ClusterCuboid> cuboids;
    std::vector<int> truth_counts; // matched ground-truth scatterers per cluster
    GroundTruth truth;
};

// Match each ground-truth scatterer to the cluster whose (inflated) cuboid
// contains it; containment ties go to the nearest cuboid center. Unmatched
// scatterers are dropped from the labels.
inline std::vector<int> match_scatterer_counts(const std::vector<ClusterCuboid> &cuboids,
                                               const GroundTruth &truth, double inflation)
{
    std::vector<int> counts(cuboids.size(), 0);
    for (const auto &sc : truth.scatterers)
    {
        int best = -1;
        double best_d = 1e300;
        for (size_t i = 0; i < cuboids.size(); ++i)
        {
            if (!cuboids[i].cuboid().contains(sc.position, inflation))
                continue;
            double d = norm(cuboids[i].center - sc.position);
            if (d < best_d)
            {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        if (best >= 0)
            counts[static_cast<size_t>(best)]++;
    }
    return counts;
}

// LiDAR scan of one communication vehicle (deterministic per slot/snapshot)
inline PointCloud comm_vehicle_scan(const Scene &scene, int comm_slot, const SimConfig &cfg)
{
    const SceneObject &v = object_by_id(scene, scene.comm_ids[static_cast<size_t>(comm_slot)]);
    Vec3 origin = antenna_position(scene, v, cfg.lidar.mount_height);
    uint64_t scan_seed = hash_mix(cfg.seed, 0x11da2ULL, static_cast<uint64_t>(scene.layout) * 3 +
                                                            static_cast<uint64_t>(scene.vtd),
                                  static_cast<uint64_t>(scene.snapshot_index),
                                  static_cast<uint64_t>(comm_slot));
    return simulate_lidar(scene, origin, cfg.lidar, scan_seed, v.id);
}

// Steps 1-4 for one link at one snapshot given the two vehicle scans
inline LinkSnapshot process_link_snapshot(const Scene &scene, int link, const PointCloud &tx_scan,
                                          const PointCloud &rx_scan, const SimConfig &cfg)
{
    LinkSnapshot out;
    out.snapshot = scene.snapshot_index;
    out.pose = link_pose(scene, link, cfg.scene.antenna_offset);

    PointCloud cloud = concatenate(tx_scan, rx_scan);
    cloud = remove_ground(cloud, cfg.ground_z_threshold);
    cloud = voxel_downsample(cloud, cfg.voxel_size);
    out.processed = quantize_to_file_precision(cloud);

    DbscanResult db = dbscan(out.processed, cfg.dbscan_eps, cfg.dbscan_min_pts);
    out.clusters = std::move(db.clusters);
    out.cuboids.reserve(out.clusters.size());
    for (const auto &cl : out.clusters)
        out.cuboids.push_back(fit_cuboid(out.processed, cl));

    out.truth = trace_ground_truth(scene, out.pose, cfg.reflection_loss);
    out.truth_counts = match_scatterer_counts(out.cuboids, out.truth, cfg.count_match_inflation);
    return out;
}

// ---------- Dataset directory layout ----------

namespace paths
{

inline std::string condition_dir(const std::string &root, StreetLayout l, Vtd v)
{
    return root + "/" + to_string(l) + "_" + to_string(v);
}

inline std::string link_dir(const std::string &cond_dir, int link)
{
    return cond_dir + "/link_" + std::to_string(link);
}

inline std::string snap_tag(int snapshot)
{
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d", snapshot);
    return buf;
}

inline std::string cloud_path(const std::string &ldir, int snapshot)
{
    return ldir + "/clouds/cloud_" + snap_tag(snapshot) + ".txt";
}

inline std::string truth_path(const std::string &ldir, int snapshot)
{
    return ldir + "/truth/truth_" + snap_tag(snapshot) + ".json";
}

inline std::string labels_path(const std::string &ldir) { return ldir + "/labels.csv"; }
inline std::string poses_path(const std::string &ldir) { return ldir + "/poses.csv"; }

} // namespace paths

constexpr std::array<StreetLayout, 3> kAllLayouts{StreetLayout::vertical, StreetLayout::horizontal,
                                                  StreetLayout::crossing};
constexpr std::array<Vtd, 3> kAllVtds{Vtd::low, Vtd::medium, Vtd::high};

// ---------- Generation ----------

namespace detail
{

inline void write_labels_csv(const std::string &path, const std::vector<LinkSnapshot> &snaps)
{
    auto out = ioutil::open_out(path);
    out << "snapshot,label,member_count,cx,cy,cz,length,width,height,ox,oy,truth_count\n";
    for (const auto &ls : snaps)
        for (size_t i = 0; i < ls.clusters.size(); ++i)
        {
            const auto &cb = ls.cuboids[i];
            out << ls.snapshot << "," << ls.clusters[i].label << ","
                << ls.clusters[i].member_indices.size() << "," << ioutil::fmt(cb.center.x, 17)
                << "," << ioutil::fmt(cb.center.y, 17) << "," << ioutil::fmt(cb.center.z, 17)
                << "," << ioutil::fmt(cb.length, 17) << "," << ioutil::fmt(cb.width, 17) << ","
                << ioutil::fmt(cb.height, 17) << "," << ioutil::fmt(cb.orient_x, 17) << ","
                << ioutil::fmt(cb.orient_y, 17) << "," << ls.truth_counts[i] << "\n";
        }
}

inline void write_poses_csv(const std::string &path, const std::vector<LinkSnapshot> &snaps)
{
    auto out = ioutil::open_out(path);
    out << "snapshot,tx_x,tx_y,tx_z,txv_x,txv_y,txv_z,rx_x,rx_y,rx_z,rxv_x,rxv_y,rxv_z,"
           "los_blocked,gr_valid\n";
    for (const auto &ls : snaps)
    {
        const auto &p = ls.pose;
        out << ls.snapshot;
        for (double v : {p.tx_position.x, p.tx_position.y, p.tx_position.z, p.tx_velocity.x,
                         p.tx_velocity.y, p.tx_velocity.z, p.rx_position.x, p.rx_position.y,
                         p.rx_position.z, p.rx_velocity.x, p.rx_velocity.y, p.rx_velocity.z})
            out << "," << ioutil::fmt(v, 17);
        out << "," << (ls.truth.los_blocked ? 1 : 0) << "," << (ls.truth.gr_valid ? 1 : 0) << "\n";
    }
}

} // namespace detail

// Generate one (layout, vtd) condition: all six links, snapshots_per_link
// snapshots each. Writes the scene, per-snapshot processed clouds and
// ground truths, and per-link labels/poses tables.
inline void gen_condition(const SimConfig &cfg, StreetLayout layout, Vtd vtd,
                          const std::string &root)
{
    namespace fs = std::filesystem;
    cfg.validate();

    const std::string cdir = paths::condition_dir(root, layout, vtd);
    for (int link = 0; link < kLinksPerScene; ++link)
    {
        fs::create_directories(paths::link_dir(cdir, link) + "/clouds");
        fs::create_directories(paths::link_dir(cdir, link) + "/truth");
    }

    Scene scene0 = build_scene(layout, vtd, cfg.seed, cfg.scene);
    validate_scene(scene0);
    write_scene(cdir + "/scene.json", scene0);

    const int n = cfg.snapshots_per_link;
    std::vector<std::vector<LinkSnapshot>> per_link(kLinksPerScene);
    for (auto &v : per_link)
        v.resize(static_cast<size_t>(n));

    parallel_for(n, cfg.threads,
                 [&](int s)
                 {
                     Scene scene = advance_scene(scene0, s);
                     std::array<PointCloud, 4> scans;
                     for (int v = 0; v < 4; ++v)
                         scans[static_cast<size_t>(v)] = comm_vehicle_scan(scene, v, cfg);
                     for (int link = 0; link < kLinksPerScene; ++link)
                     {
                         auto [a, b] = link_pair(link);
                         LinkSnapshot ls = process_link_snapshot(
                             scene, link, scans[static_cast<size_t>(a)],
                             scans[static_cast<size_t>(b)], cfg);
                         const std::string ldir = paths::link_dir(cdir, link);
                         write_point_cloud(paths::cloud_path(ldir, s), ls.processed);
                         write_ground_truth(paths::truth_path(ldir, s), ls.truth);
                         // clouds are re-read on demand; keep the rest
                         ls.processed = PointCloud{};
                         per_link[static_cast<size_t>(link)][static_cast<size_t>(s)] = std::move(ls);
                     }
                 });

    nlohmann::json index{{"layout", to_string(layout)},
                         {"vtd", to_string(vtd)},
                         {"seed", cfg.seed},
                         {"snapshots", n},
                         {"links", kLinksPerScene},
                         {"snapshot_period", cfg.scene.snapshot_period}};
    {
        auto out = ioutil::open_out(cdir + "/index.json");
        out << index.dump(2) << "\n";
    }

    for (int link = 0; link < kLinksPerScene; ++link)
    {
        const std::string ldir = paths::link_dir(cdir, link);
        detail::write_labels_csv(paths::labels_path(ldir), per_link[static_cast<size_t>(link)]);
        detail::write_poses_csv(paths::poses_path(ldir), per_link[static_cast<size_t>(link)]);
    }
}

// ---------- Loading ----------

struct DatasetIndex
{
    StreetLayout layout = StreetLayout::vertical;
    Vtd vtd = Vtd::low;
    std::string dir;
    uint64_t seed = 0;
    int snapshots = 0;
    int links = 0;
};

inline DatasetIndex read_condition_index(const std::string &cdir)
{
    auto in = ioutil::open_in(cdir + "/index.json");
    nlohmann::json j;
    try
    {
        in >> j;
        DatasetIndex idx;
        idx.layout = layout_from_string(j.at("layout").get<std::string>());
        idx.vtd = vtd_from_string(j.at("vtd").get<std::string>());
        idx.seed = j.at("seed").get<uint64_t>();
        idx.snapshots = j.at("snapshots").get<int>();
        idx.links = j.at("links").get<int>();
        idx.dir = cdir;
        return idx;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw data_error(std::string("dataset index parse error: ") + e.what());
    }
}

// All conditions present under the dataset root, with file existence checks
inline std::vector<DatasetIndex> scan_dataset(const std::string &root)
{
    namespace fs = std::filesystem;
    std::vector<DatasetIndex> out;
    for (StreetLayout l : kAllLayouts)
        for (Vtd v : kAllVtds)
        {
            std::string cdir = paths::condition_dir(root, l, v);
            if (!fs::exists(cdir + "/index.json"))
                continue;
            DatasetIndex idx = read_condition_index(cdir);
            for (int link = 0; link < idx.links; ++link)
            {
                std::string ldir = paths::link_dir(cdir, link);
                if (!fs::exists(paths::labels_path(ldir)) || !fs::exists(paths::poses_path(ldir)))
                    throw data_error("dataset: missing labels/poses for " + ldir);
                for (int s = 0; s < idx.snapshots; ++s)
                    if (!fs::exists(paths::cloud_path(ldir, s)) ||
                        !fs::exists(paths::truth_path(ldir, s)))
                        throw data_error("dataset: missing snapshot files in " + ldir);
            }
            out.push_back(idx);
        }
    if (out.empty())
        throw data_error("dataset: no conditions found under " + root);
    return out;
}

struct LabelRow
{
    int snapshot = 0;
    int label = 0;
    int member_count = 0;
    ClusterCuboid cuboid;
    int truth_count = 0;
};

struct PoseRow
{
    int snapshot = 0;
    TransceiverPose pose;
    bool los_blocked = false;
    bool gr_valid = false;
};

inline std::vector<LabelRow> load_labels(const std::string &ldir)
{
    auto in = ioutil::open_in(paths::labels_path(ldir));
    std::string line;
    std::getline(in, line); // header
    std::vector<LabelRow> rows;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        LabelRow r;
        ClusterCuboid &cb = r.cuboid;
        for (auto &ch : line)
            if (ch == ',')
                ch = ' ';
        std::istringstream ss(line);
        if (!(ss >> r.snapshot >> r.label >> r.member_count >> cb.center.x >> cb.center.y >>
              cb.center.z >> cb.length >> cb.width >> cb.height >> cb.orient_x >> cb.orient_y >>
              r.truth_count))
            throw data_error("labels.csv: malformed row in " + ldir);
        rows.push_back(r);
    }
    return rows;
}

inline std::vector<PoseRow> load_poses(const std::string &ldir)
{
    auto in = ioutil::open_in(paths::poses_path(ldir));
    std::string line;
    std::getline(in, line); // header
    std::vector<PoseRow> rows;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        for (auto &ch : line)
            if (ch == ',')
                ch = ' ';
        PoseRow r;
        auto &p = r.pose;
        int lb = 0, gv = 0;
        std::istringstream ss(line);
        if (!(ss >> r.snapshot >> p.tx_position.x >> p.tx_position.y >> p.tx_position.z >>
              p.tx_velocity.x >> p.tx_velocity.y >> p.tx_velocity.z >> p.rx_position.x >>
              p.rx_position.y >> p.rx_position.z >> p.rx_velocity.x >> p.rx_velocity.y >>
              p.rx_velocity.z >> lb >> gv))
            throw data_error("poses.csv: malformed row in " + ldir);
        r.los_blocked = lb != 0;
        r.gr_valid = gv != 0;
        rows.push_back(r);
    }
    return rows;
}

// Pooled train/val matrices for the recognizer, assembled across all
// conditions and links with the deterministic split.
inline TrainSet build_train_set(const std::vector<DatasetIndex> &conditions, const SimConfig &cfg)
{
    TrainSet ts;
    ts.dim = kFeatureDim;
    for (const auto &cond : conditions)
        for (int link = 0; link < cond.links; ++link)
        {
            const std::string ldir = paths::link_dir(cond.dir, link);
            std::vector<LabelRow> labels = load_labels(ldir);
            std::vector<PoseRow> poses = load_poses(ldir);
            std::vector<Split> split = make_split_assignment(cond.seed, cond.layout, cond.vtd,
                                                             link, cond.snapshots, cfg.train);
            for (const auto &row : labels)
            {
                Split s = split[static_cast<size_t>(row.snapshot)];
                if (s == Split::test)
                    continue;
                FeatureVector f =
                    extract_features(row.cuboid, poses[static_cast<size_t>(row.snapshot)].pose);
                auto &X = s == Split::train ? ts.x_train : ts.x_val;
                auto &y = s == Split::train ? ts.y_train : ts.y_val;
                X.insert(X.end(), f.begin(), f.end());
                y.push_back(static_cast<double>(row.truth_count));
            }
        }
    if (ts.y_train.empty())
        throw data_error("build_train_set: no training samples found");
    return ts;
}

// Training-split ground truths (for VR fitting)
inline std::vector<GroundTruth> load_train_ground_truths(const std::vector<DatasetIndex> &conditions,
                                                         const SimConfig &cfg)
{
    std::vector<GroundTruth> out;
    for (const auto &cond : conditions)
        for (int link = 0; link < cond.links; ++link)
        {
            const std::string ldir = paths::link_dir(cond.dir, link);
            std::vector<Split> split = make_split_assignment(cond.seed, cond.layout, cond.vtd,
                                                             link, cond.snapshots, cfg.train);
            for (int s = 0; s < cond.snapshots; ++s)
                if (split[static_cast<size_t>(s)] == Split::train)
                    out.push_back(read_ground_truth(paths::truth_path(ldir, s)));
        }
    return out;
}

} // namespace lcsim

#endif
