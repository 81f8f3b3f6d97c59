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

#ifndef LCSIM_IO_HPP
#define LCSIM_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "channel.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "mlp.hpp"
#include "pointcloud.hpp"
#include "rt_oracle.hpp"
#include "scene.hpp"

namespace lcsim
{

namespace ioutil
{

inline std::string fmt(double v, int sig)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", sig, v);
    return buf;
}

inline std::ofstream open_out(const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw data_error("cannot open for writing: " + path);
    return out;
}

inline std::ifstream open_in(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw data_error("cannot open for reading: " + path);
    return in;
}

} // namespace ioutil

// ---------- Point cloud: "# count=N" header, one x y z triple per line ----------

inline void write_point_cloud(std::ostream &out, const PointCloud &cloud)
{
    out << "# count=" << cloud.size() << "\n";
    for (const auto &p : cloud.points)
        out << ioutil::fmt(p.x, 9) << " " << ioutil::fmt(p.y, 9) << " " << ioutil::fmt(p.z, 9)
            << "\n";
}

inline void write_point_cloud(const std::string &path, const PointCloud &cloud)
{
    auto out = ioutil::open_out(path);
    write_point_cloud(out, cloud);
}

inline PointCloud read_point_cloud(std::istream &in)
{
    std::string header;
    if (!std::getline(in, header) || header.rfind("# count=", 0) != 0)
        throw data_error("point cloud file: missing '# count=' header");
    size_t count = 0;
    try
    {
        count = std::stoul(header.substr(8));
    }
    catch (const std::exception &)
    {
        throw data_error("point cloud file: bad count header");
    }
    PointCloud cloud;
    cloud.points.resize(count);
    for (size_t i = 0; i < count; ++i)
        if (!(in >> cloud.points[i].x >> cloud.points[i].y >> cloud.points[i].z))
            throw data_error("point cloud file: truncated point list");
    return cloud;
}

inline PointCloud read_point_cloud(const std::string &path)
{
    auto in = ioutil::open_in(path);
    return read_point_cloud(in);
}

// Quantize coordinates to the 9-significant-digit file precision. Applied
// before clustering so in-memory processing and a round trip through the
// cloud file see bit-identical coordinates.
inline PointCloud quantize_to_file_precision(const PointCloud &cloud)
{
    PointCloud out;
    out.points.reserve(cloud.size());
    for (const auto &p : cloud.points)
        out.points.push_back({std::stod(ioutil::fmt(p.x, 9)), std::stod(ioutil::fmt(p.y, 9)),
                              std::stod(ioutil::fmt(p.z, 9))});
    return out;
}

// ---------- Scene file (JSON) ----------

inline nlohmann::json scene_to_json(const Scene &scene)
{
    nlohmann::json objs = nlohmann::json::array();
    for (const auto &o : scene.objects)
        objs.push_back({{"id", o.id},
                        {"kind", to_string(o.kind)},
                        {"center", configio::to_json(o.center)},
                        {"dims", configio::to_json(o.dims)},
                        {"yaw", o.yaw},
                        {"velocity", configio::to_json(o.velocity)}});
    return nlohmann::json{{"layout", to_string(scene.layout)},
                          {"vtd", to_string(scene.vtd)},
                          {"seed", scene.seed},
                          {"snapshot_index", scene.snapshot_index},
                          {"snapshot_period", scene.snapshot_period},
                          {"comm_ids", scene.comm_ids},
                          {"objects", objs}};
}

inline Scene scene_from_json(const nlohmann::json &j)
{
    Scene s;
    try
    {
        s.layout = layout_from_string(j.at("layout").get<std::string>());
        s.vtd = vtd_from_string(j.at("vtd").get<std::string>());
        s.seed = j.at("seed").get<uint64_t>();
        s.snapshot_index = j.value("snapshot_index", 0);
        s.snapshot_period = j.value("snapshot_period", 0.1);
        s.comm_ids = j.value("comm_ids", s.comm_ids);
        for (const auto &jo : j.at("objects"))
        {
            SceneObject o;
            o.id = jo.at("id").get<int>();
            o.kind = object_kind_from_string(jo.at("kind").get<std::string>());
            o.center = configio::vec3_from(jo.at("center"), {});
            o.dims = configio::vec3_from(jo.at("dims"), {});
            o.yaw = jo.at("yaw").get<double>();
            o.velocity = configio::vec3_from(jo.at("velocity"), {});
            s.objects.push_back(o);
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        throw data_error(std::string("scene parse error: ") + e.what());
    }
    validate_scene(s);
    return s;
}

inline void write_scene(const std::string &path, const Scene &scene)
{
    auto out = ioutil::open_out(path);
    out << scene_to_json(scene).dump(1) << "\n";
}

inline Scene read_scene(const std::string &path)
{
    auto in = ioutil::open_in(path);
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw data_error(std::string("scene parse error: ") + e.what());
    }
    return scene_from_json(j);
}

// ---------- Ground-truth file (JSON, one file per snapshot) ----------

inline nlohmann::json ground_truth_to_json(const GroundTruth &gt)
{
    nlohmann::json scs = nlohmann::json::array();
    for (const auto &sc : gt.scatterers)
        scs.push_back({{"position", configio::to_json(sc.position)},
                       {"kind", to_string(sc.kind)},
                       {"source_object_id", sc.source_object_id},
                       {"face_index", sc.face_index},
                       {"reflection_loss", sc.reflection_loss}});
    return nlohmann::json{{"snapshot", gt.snapshot_index},
                          {"los_blocked", gt.los_blocked},
                          {"tx", configio::to_json(gt.tx)},
                          {"rx", configio::to_json(gt.rx)},
                          {"gr_valid", gt.gr_valid},
                          {"gr_point", configio::to_json(gt.gr_point)},
                          {"scatterers", scs}};
}

inline GroundTruth ground_truth_from_json(const nlohmann::json &j)
{
    GroundTruth gt;
    try
    {
        gt.snapshot_index = j.at("snapshot").get<int>();
        gt.los_blocked = j.at("los_blocked").get<bool>();
        gt.tx = configio::vec3_from(j.at("tx"), {});
        gt.rx = configio::vec3_from(j.at("rx"), {});
        gt.gr_valid = j.value("gr_valid", false);
        gt.gr_point = configio::vec3_from(j.value("gr_point", nlohmann::json()), {});
        for (const auto &js : j.at("scatterers"))
        {
            Scatterer sc;
            sc.position = configio::vec3_from(js.at("position"), {});
            sc.kind = scatterer_kind_from_string(js.at("kind").get<std::string>());
            sc.source_object_id = js.at("source_object_id").get<int>();
            sc.face_index = js.value("face_index", 0);
            sc.reflection_loss = js.at("reflection_loss").get<double>();
            gt.scatterers.push_back(sc);
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        throw data_error(std::string("ground truth parse error: ") + e.what());
    }
    return gt;
}

inline void write_ground_truth(const std::string &path, const GroundTruth &gt)
{
    auto out = ioutil::open_out(path);
    out << ground_truth_to_json(gt).dump() << "\n";
}

inline GroundTruth read_ground_truth(const std::string &path)
{
    auto in = ioutil::open_in(path);
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw data_error(std::string("ground truth parse error: ") + e.what());
    }
    return ground_truth_from_json(j);
}

// ---------- Checkpoint: "layers: ..." header, then row-major weights and
// biases per layer, 17 significant digits (lossless round trip) ----------

inline void write_checkpoint(const std::string &path, const MlpModel &m)
{
    auto out = ioutil::open_out(path);
    out << "layers:";
    for (int s : m.layer_sizes)
        out << " " << s;
    out << "\n";
    for (size_t l = 0; l < m.layer_count(); ++l)
    {
        for (double w : m.weights[l])
            out << ioutil::fmt(w, 17) << "\n";
        for (double b : m.biases[l])
            out << ioutil::fmt(b, 17) << "\n";
    }
}

inline MlpModel read_checkpoint(const std::string &path)
{
    auto in = ioutil::open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("layers:", 0) != 0)
        throw data_error("checkpoint: missing 'layers:' header");
    MlpModel m;
    {
        std::istringstream hs(line.substr(7));
        int v;
        while (hs >> v)
            m.layer_sizes.push_back(v);
    }
    if (m.layer_sizes.size() < 2)
        throw data_error("checkpoint: bad layer list");
    for (size_t l = 0; l + 1 < m.layer_sizes.size(); ++l)
    {
        size_t in_dim = static_cast<size_t>(m.layer_sizes[l]);
        size_t out_dim = static_cast<size_t>(m.layer_sizes[l + 1]);
        std::vector<double> w(in_dim * out_dim), b(out_dim);
        for (auto &v : w)
            if (!(in >> v))
                throw data_error("checkpoint: truncated weights");
        for (auto &v : b)
            if (!(in >> v))
                throw data_error("checkpoint: truncated biases");
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::move(b));
    }
    m.validate();
    return m;
}

// ---------- Training log ----------

inline void write_training_log(const std::string &path, const std::vector<EpochStats> &curve)
{
    auto out = ioutil::open_out(path);
    out << "epoch,lr,train_mse,val_mse\n";
    for (const auto &e : curve)
        out << e.epoch << "," << ioutil::fmt(e.lr, 17) << "," << ioutil::fmt(e.train_mse, 17)
            << "," << ioutil::fmt(e.val_mse, 17) << "\n";
}

// ---------- Cluster dump ----------

inline void write_clusters(std::ostream &out, const std::vector<Cluster> &clusters,
                           const std::vector<ClusterCuboid> &cuboids)
{
    out << "# label member_count cx cy cz length width height orientation_rad\n";
    for (size_t i = 0; i < clusters.size(); ++i)
    {
        const auto &cb = cuboids[i];
        out << clusters[i].label << " " << clusters[i].member_indices.size() << " "
            << ioutil::fmt(cb.center.x, 9) << " " << ioutil::fmt(cb.center.y, 9) << " "
            << ioutil::fmt(cb.center.z, 9) << " " << ioutil::fmt(cb.length, 9) << " "
            << ioutil::fmt(cb.width, 9) << " " << ioutil::fmt(cb.height, 9) << " "
            << ioutil::fmt(cb.orientation_angle(), 9) << "\n";
    }
}

// ---------- Channel dumps ----------

inline void write_cir_header(std::ostream &out)
{
    out << "snapshot,kind,cluster,index,delay_s,power,doppler_hz,phase0,aod_az,aod_el,aoa_az,aoa_el\n";
}

inline void write_cir_rows(std::ostream &out, const Cir &cir)
{
    for (const auto &p : cir.paths)
        out << cir.snapshot_index << "," << to_string(p.kind) << "," << p.cluster_index << ","
            << p.scatterer_index << "," << ioutil::fmt(p.delay, 12) << ","
            << ioutil::fmt(p.power, 12) << "," << ioutil::fmt(p.doppler, 12) << ","
            << ioutil::fmt(p.phase0, 12) << "," << ioutil::fmt(p.aod_az, 9) << ","
            << ioutil::fmt(p.aod_el, 9) << "," << ioutil::fmt(p.aoa_az, 9) << ","
            << ioutil::fmt(p.aoa_el, 9) << "\n";
}

inline void write_pdp_header(std::ostream &out)
{
    out << "snapshot,delay_s,power\n";
}

inline void write_pdp_rows(std::ostream &out, int snapshot, const Pdp &pdp)
{
    for (size_t k = 0; k < pdp.delay_bins.size(); ++k)
        out << snapshot << "," << ioutil::fmt(pdp.delay_bins[k], 12) << ","
            << ioutil::fmt(pdp.powers[k], 12) << "\n";
}

} // namespace lcsim

#endif
