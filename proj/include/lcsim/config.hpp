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

#ifndef LCSIM_CONFIG_HPP
#define LCSIM_CONFIG_HPP

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "channel.hpp"
#include "errors.hpp"
#include "mlp.hpp"
#include "recognizer.hpp"
#include "rt_oracle.hpp"
#include "scene.hpp"

namespace lcsim
{

// Full simulator configuration. Every knob has a default; a saved config
// file names all of them.
struct SimConfig
{
    uint64_t seed = 1;
    int snapshots_per_link = 100;
    int threads = 0; // 0 = use hardware concurrency

    SceneGenParams scene;
    LidarConfig lidar;

    // point-cloud processing (Steps 2-3)
    double ground_z_threshold = 0.2; // m
    double voxel_size = 0.3;         // m
    double dbscan_eps = 1.0;         // m
    int dbscan_min_pts = 8;

    ReflectionLossDb reflection_loss;

    // recognizer (Steps 5-6)
    std::vector<int> mlp_layers{14, 64, 64, 1};
    TrainConfig train;
    double vr_coverage_q = 0.95;
    VehicleEnvelope vehicle_envelope;
    double count_match_inflation = 0.2; // m, scatterer-to-cuboid matching
    double position_spacing = 0.8;      // m, recognized scatterer separation

    ChannelParams channel;

    // harness: which link feeds the PDP comparison
    StreetLayout pdp_layout = StreetLayout::crossing;
    Vtd pdp_vtd = Vtd::high;
    int pdp_link = 1;

    void validate() const
    {
        if (snapshots_per_link < 1)
            throw config_error("SimConfig: snapshots_per_link must be >= 1");
        if (mlp_layers.size() < 2 || mlp_layers.front() != kFeatureDim || mlp_layers.back() != 1)
            throw config_error("SimConfig: mlp_layers must map 14 features to 1 output");
        if (voxel_size <= 0.0 || dbscan_eps <= 0.0 || dbscan_min_pts < 1 ||
            ground_z_threshold < 0.0)
            throw config_error("SimConfig: invalid point-cloud processing parameters");
        if (vr_coverage_q < 0.0 || vr_coverage_q > 1.0)
            throw config_error("SimConfig: vr_coverage_q must be in [0, 1]");
        try
        {
            lidar.validate();
            train.validate();
            channel.validate();
        }
        catch (const std::exception &e)
        {
            throw config_error(e.what());
        }
    }
};

// ---------- JSON round trips ----------

namespace configio
{

using json = nlohmann::json;

inline json to_json(const Vec3 &v) { return json::array({v.x, v.y, v.z}); }

inline Vec3 vec3_from(const json &j, const Vec3 &def)
{
    if (j.is_null())
        return def;
    if (!j.is_array() || j.size() != 3)
        throw config_error("expected a 3-element array for a vector");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline json to_json(const SceneGenParams &p)
{
    return json{{"street_half_width", p.street_half_width},
                {"street_half_length", p.street_half_length},
                {"lane_lat", p.lane_lat},
                {"lane_speed", p.lane_speed},
                {"building_front", p.building_front},
                {"building_front_jitter", p.building_front_jitter},
                {"building_depth_min", p.building_depth_min},
                {"building_depth_max", p.building_depth_max},
                {"building_len_min", p.building_len_min},
                {"building_len_max", p.building_len_max},
                {"building_height_min", p.building_height_min},
                {"building_height_max", p.building_height_max},
                {"building_gap_min", p.building_gap_min},
                {"building_gap_max", p.building_gap_max},
                {"tree_spacing", p.tree_spacing},
                {"tree_lat", p.tree_lat},
                {"tree_dims", to_json(p.tree_dims)},
                {"crossing_clear", p.crossing_clear},
                {"tree_clear", p.tree_clear},
                {"car_dims", to_json(p.car_dims)},
                {"bus_dims", to_json(p.bus_dims)},
                {"vehicles_low", p.vehicles_low},
                {"vehicles_medium", p.vehicles_medium},
                {"vehicles_high", p.vehicles_high},
                {"bus_fraction", p.bus_fraction},
                {"vehicle_clearance", p.vehicle_clearance},
                {"vehicle_span", p.vehicle_span},
                {"antenna_offset", p.antenna_offset},
                {"snapshot_period", p.snapshot_period}};
}

inline SceneGenParams scenegen_from(const json &j)
{
    SceneGenParams p;
    p.street_half_width = j.value("street_half_width", p.street_half_width);
    p.street_half_length = j.value("street_half_length", p.street_half_length);
    p.lane_lat = j.value("lane_lat", p.lane_lat);
    p.lane_speed = j.value("lane_speed", p.lane_speed);
    p.building_front = j.value("building_front", p.building_front);
    p.building_front_jitter = j.value("building_front_jitter", p.building_front_jitter);
    p.building_depth_min = j.value("building_depth_min", p.building_depth_min);
    p.building_depth_max = j.value("building_depth_max", p.building_depth_max);
    p.building_len_min = j.value("building_len_min", p.building_len_min);
    p.building_len_max = j.value("building_len_max", p.building_len_max);
    p.building_height_min = j.value("building_height_min", p.building_height_min);
    p.building_height_max = j.value("building_height_max", p.building_height_max);
    p.building_gap_min = j.value("building_gap_min", p.building_gap_min);
    p.building_gap_max = j.value("building_gap_max", p.building_gap_max);
    p.tree_spacing = j.value("tree_spacing", p.tree_spacing);
    p.tree_lat = j.value("tree_lat", p.tree_lat);
    p.tree_dims = vec3_from(j.value("tree_dims", json()), p.tree_dims);
    p.crossing_clear = j.value("crossing_clear", p.crossing_clear);
    p.tree_clear = j.value("tree_clear", p.tree_clear);
    p.car_dims = vec3_from(j.value("car_dims", json()), p.car_dims);
    p.bus_dims = vec3_from(j.value("bus_dims", json()), p.bus_dims);
    p.vehicles_low = j.value("vehicles_low", p.vehicles_low);
    p.vehicles_medium = j.value("vehicles_medium", p.vehicles_medium);
    p.vehicles_high = j.value("vehicles_high", p.vehicles_high);
    p.bus_fraction = j.value("bus_fraction", p.bus_fraction);
    p.vehicle_clearance = j.value("vehicle_clearance", p.vehicle_clearance);
    p.vehicle_span = j.value("vehicle_span", p.vehicle_span);
    p.antenna_offset = j.value("antenna_offset", p.antenna_offset);
    p.snapshot_period = j.value("snapshot_period", p.snapshot_period);
    return p;
}

inline json to_json(const LidarConfig &c)
{
    return json{{"channels", c.channels},
                {"scan_rate", c.scan_rate},
                {"points_per_second", c.points_per_second},
                {"fov_up", c.fov_up},
                {"fov_down", c.fov_down},
                {"max_range", c.max_range},
                {"mount_height", c.mount_height},
                {"range_noise_sigma", c.range_noise_sigma}};
}

inline LidarConfig lidar_from(const json &j)
{
    LidarConfig c;
    c.channels = j.value("channels", c.channels);
    c.scan_rate = j.value("scan_rate", c.scan_rate);
    c.points_per_second = j.value("points_per_second", c.points_per_second);
    c.fov_up = j.value("fov_up", c.fov_up);
    c.fov_down = j.value("fov_down", c.fov_down);
    c.max_range = j.value("max_range", c.max_range);
    c.mount_height = j.value("mount_height", c.mount_height);
    c.range_noise_sigma = j.value("range_noise_sigma", c.range_noise_sigma);
    return c;
}

inline json to_json(const TrainConfig &c)
{
    return json{{"batch_size", c.batch_size},
                {"lr0", c.lr0},
                {"lr_decay", c.lr_decay},
                {"lr_decay_every", c.lr_decay_every},
                {"epochs", c.epochs},
                {"adam_beta1", c.adam_beta1},
                {"adam_beta2", c.adam_beta2},
                {"adam_eps", c.adam_eps},
                {"split_train", c.split_train},
                {"split_val", c.split_val},
                {"split_test", c.split_test},
                {"seed", c.seed}};
}

inline TrainConfig train_from(const json &j)
{
    TrainConfig c;
    c.batch_size = j.value("batch_size", c.batch_size);
    c.lr0 = j.value("lr0", c.lr0);
    c.lr_decay = j.value("lr_decay", c.lr_decay);
    c.lr_decay_every = j.value("lr_decay_every", c.lr_decay_every);
    c.epochs = j.value("epochs", c.epochs);
    c.adam_beta1 = j.value("adam_beta1", c.adam_beta1);
    c.adam_beta2 = j.value("adam_beta2", c.adam_beta2);
    c.adam_eps = j.value("adam_eps", c.adam_eps);
    c.split_train = j.value("split_train", c.split_train);
    c.split_val = j.value("split_val", c.split_val);
    c.split_test = j.value("split_test", c.split_test);
    c.seed = j.value("seed", c.seed);
    return c;
}

inline json to_json(const ChannelParams &c)
{
    return json{{"f_c", c.f_c},
                {"bandwidth", c.bandwidth},
                {"ricean_omega", c.ricean_omega},
                {"eta_gr", c.eta_gr},
                {"eta_sta", c.eta_sta},
                {"eta_dyn", c.eta_dyn},
                {"chi", c.chi},
                {"delay_decay", c.delay_decay},
                {"l_t", c.l_t},
                {"l_r", c.l_r}};
}

inline ChannelParams channel_from(const json &j)
{
    ChannelParams c;
    c.f_c = j.value("f_c", c.f_c);
    c.bandwidth = j.value("bandwidth", c.bandwidth);
    c.ricean_omega = j.value("ricean_omega", c.ricean_omega);
    c.eta_gr = j.value("eta_gr", c.eta_gr);
    c.eta_sta = j.value("eta_sta", c.eta_sta);
    c.eta_dyn = j.value("eta_dyn", c.eta_dyn);
    c.chi = j.value("chi", c.chi);
    c.delay_decay = j.value("delay_decay", c.delay_decay);
    c.l_t = j.value("l_t", c.l_t);
    c.l_r = j.value("l_r", c.l_r);
    return c;
}

inline json to_json(const ReflectionLossDb &r)
{
    return json{{"building", r.building}, {"vehicle", r.vehicle}, {"tree", r.tree}};
}

inline ReflectionLossDb reflection_from(const json &j)
{
    ReflectionLossDb r;
    r.building = j.value("building", r.building);
    r.vehicle = j.value("vehicle", r.vehicle);
    r.tree = j.value("tree", r.tree);
    return r;
}

inline json to_json(const VehicleEnvelope &e)
{
    return json{{"len_min", e.len_min}, {"len_max", e.len_max}, {"wid_min", e.wid_min},
                {"wid_max", e.wid_max}, {"hgt_min", e.hgt_min}, {"hgt_max", e.hgt_max}};
}

inline VehicleEnvelope envelope_from(const json &j)
{
    VehicleEnvelope e;
    e.len_min = j.value("len_min", e.len_min);
    e.len_max = j.value("len_max", e.len_max);
    e.wid_min = j.value("wid_min", e.wid_min);
    e.wid_max = j.value("wid_max", e.wid_max);
    e.hgt_min = j.value("hgt_min", e.hgt_min);
    e.hgt_max = j.value("hgt_max", e.hgt_max);
    return e;
}

} // namespace configio

inline nlohmann::json to_json(const SimConfig &c)
{
    return nlohmann::json{{"seed", c.seed},
                          {"snapshots_per_link", c.snapshots_per_link},
                          {"threads", c.threads},
                          {"scene", configio::to_json(c.scene)},
                          {"lidar", configio::to_json(c.lidar)},
                          {"ground_z_threshold", c.ground_z_threshold},
                          {"voxel_size", c.voxel_size},
                          {"dbscan_eps", c.dbscan_eps},
                          {"dbscan_min_pts", c.dbscan_min_pts},
                          {"reflection_loss", configio::to_json(c.reflection_loss)},
                          {"mlp_layers", c.mlp_layers},
                          {"train", configio::to_json(c.train)},
                          {"vr_coverage_q", c.vr_coverage_q},
                          {"vehicle_envelope", configio::to_json(c.vehicle_envelope)},
                          {"count_match_inflation", c.count_match_inflation},
                          {"position_spacing", c.position_spacing},
                          {"channel", configio::to_json(c.channel)},
                          {"pdp_layout", to_string(c.pdp_layout)},
                          {"pdp_vtd", to_string(c.pdp_vtd)},
                          {"pdp_link", c.pdp_link}};
}

inline SimConfig config_from_json(const nlohmann::json &j)
{
    SimConfig c;
    try
    {
        c.seed = j.value("seed", c.seed);
        c.snapshots_per_link = j.value("snapshots_per_link", c.snapshots_per_link);
        c.threads = j.value("threads", c.threads);
        if (j.contains("scene"))
            c.scene = configio::scenegen_from(j.at("scene"));
        if (j.contains("lidar"))
            c.lidar = configio::lidar_from(j.at("lidar"));
        c.ground_z_threshold = j.value("ground_z_threshold", c.ground_z_threshold);
        c.voxel_size = j.value("voxel_size", c.voxel_size);
        c.dbscan_eps = j.value("dbscan_eps", c.dbscan_eps);
        c.dbscan_min_pts = j.value("dbscan_min_pts", c.dbscan_min_pts);
        if (j.contains("reflection_loss"))
            c.reflection_loss = configio::reflection_from(j.at("reflection_loss"));
        c.mlp_layers = j.value("mlp_layers", c.mlp_layers);
        if (j.contains("train"))
            c.train = configio::train_from(j.at("train"));
        c.vr_coverage_q = j.value("vr_coverage_q", c.vr_coverage_q);
        if (j.contains("vehicle_envelope"))
            c.vehicle_envelope = configio::envelope_from(j.at("vehicle_envelope"));
        c.count_match_inflation = j.value("count_match_inflation", c.count_match_inflation);
        c.position_spacing = j.value("position_spacing", c.position_spacing);
        if (j.contains("channel"))
            c.channel = configio::channel_from(j.at("channel"));
        c.pdp_layout = layout_from_string(j.value("pdp_layout", std::string(to_string(c.pdp_layout))));
        c.pdp_vtd = vtd_from_string(j.value("pdp_vtd", std::string(to_string(c.pdp_vtd))));
        c.pdp_link = j.value("pdp_link", c.pdp_link);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    c.validate();
    return c;
}

inline SimConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file: " + path);
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    return config_from_json(j);
}

inline void save_config(const SimConfig &c, const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw data_error("cannot write config file: " + path);
    out << to_json(c).dump(2) << "\n";
}

} // namespace lcsim

#endif
