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

#ifndef LCSIM_SCENE_HPP
#define LCSIM_SCENE_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "rng.hpp"

namespace lcsim
{

enum class ObjectKind
{
    building,
    car,
    bus,
    tree,
    ground
};

enum class StreetLayout
{
    vertical,  // street along the x-axis
    horizontal, // street along the y-axis
    crossing   // both
};

enum class Vtd
{
    low,
    medium,
    high
};

inline const char *to_string(ObjectKind k)
{
    switch (k)
    {
    case ObjectKind::building: return "building";
    case ObjectKind::car: return "car";
    case ObjectKind::bus: return "bus";
    case ObjectKind::tree: return "tree";
    default: return "ground";
    }
}

inline const char *to_string(StreetLayout l)
{
    switch (l)
    {
    case StreetLayout::vertical: return "vertical";
    case StreetLayout::horizontal: return "horizontal";
    default: return "crossing";
    }
}

inline const char *to_string(Vtd v)
{
    switch (v)
    {
    case Vtd::low: return "low";
    case Vtd::medium: return "medium";
    default: return "high";
    }
}

inline ObjectKind object_kind_from_string(const std::string &s)
{
    if (s == "building") return ObjectKind::building;
    if (s == "car") return ObjectKind::car;
    if (s == "bus") return ObjectKind::bus;
    if (s == "tree") return ObjectKind::tree;
    if (s == "ground") return ObjectKind::ground;
    throw std::invalid_argument("unknown object kind: " + s);
}

inline StreetLayout layout_from_string(const std::string &s)
{
    if (s == "vertical") return StreetLayout::vertical;
    if (s == "horizontal") return StreetLayout::horizontal;
    if (s == "crossing") return StreetLayout::crossing;
    throw std::invalid_argument("unknown street layout: " + s);
}

inline Vtd vtd_from_string(const std::string &s)
{
    if (s == "low") return Vtd::low;
    if (s == "medium") return Vtd::medium;
    if (s == "high") return Vtd::high;
    throw std::invalid_argument("unknown VTD level: " + s);
}

inline bool is_vehicle(ObjectKind k) { return k == ObjectKind::car || k == ObjectKind::bus; }

struct SceneObject
{
    int id = 0;
    ObjectKind kind = ObjectKind::building;
    Vec3 center;   // position at snapshot 0
    Vec3 dims;     // length / width / height
    double yaw = 0.0;
    Vec3 velocity; // zero for static kinds

    Cuboid cuboid() const { return Cuboid{center, dims, yaw}; }
};

struct Scene
{
    std::vector<SceneObject> objects; // centers refer to snapshot 0
    StreetLayout layout = StreetLayout::crossing;
    Vtd vtd = Vtd::low;
    uint64_t seed = 0;
    int snapshot_index = 0;
    double snapshot_period = 0.1; // seconds
    std::array<int, 4> comm_ids{}; // designated communication vehicles

    double time() const { return snapshot_index * snapshot_period; }

    // Object pose at the scene's current snapshot
    Vec3 center_of(const SceneObject &o) const { return o.center + o.velocity * time(); }

    Cuboid cuboid_of(const SceneObject &o) const { return Cuboid{center_of(o), o.dims, o.yaw}; }
};

struct TransceiverPose
{
    Vec3 tx_position, rx_position;
    Vec3 tx_velocity, rx_velocity;
};

struct LidarConfig
{
    int channels = 16;
    double scan_rate = 10.0;          // Hz
    int points_per_second = 240000;
    double fov_up = 15.0;             // degrees
    double fov_down = -25.0;          // degrees
    double max_range = 120.0;         // m
    double mount_height = 0.5;        // above the carrier roof, m
    double range_noise_sigma = 0.0;   // m, 0 disables noise

    void validate() const
    {
        if (channels < 1)
            throw std::invalid_argument("LidarConfig: channels must be >= 1");
        if (fov_down >= fov_up)
            throw std::invalid_argument("LidarConfig: fov_down must be below fov_up");
        if (points_per_second % channels != 0)
            throw std::invalid_argument("LidarConfig: points_per_second must be divisible by channels");
        if (scan_rate <= 0.0 || max_range <= 0.0)
            throw std::invalid_argument("LidarConfig: scan_rate and max_range must be positive");
    }

    int rays_per_channel() const
    {
        return static_cast<int>(points_per_second / scan_rate) / channels;
    }
};

// Everything the scene generator needs to lay out a crossroad world.
// These are artifact defaults, not measured values; all are configurable.
struct SceneGenParams
{
    double street_half_width = 10.0;
    double street_half_length = 200.0;
    std::array<double, 4> lane_lat{2.5, 6.0, -2.5, -6.0};   // lateral lane centers
    std::array<double, 4> lane_speed{10.0, 9.0, -10.0, -12.0}; // signed along-axis speed
    double building_front = 13.0;      // minimum lateral distance of building front faces
    double building_front_jitter = 5.0; // per-building setback, breaks wall coplanarity
    double building_depth_min = 8.0, building_depth_max = 16.0;
    double building_len_min = 12.0, building_len_max = 24.0;
    double building_height_min = 10.0, building_height_max = 30.0;
    double building_gap_min = 4.0, building_gap_max = 10.0;
    double tree_spacing = 15.0;
    double tree_lat = 11.0;
    double tree_lat_jitter = 1.5; // toward the road, breaks coplanar canopies
    Vec3 tree_dims{1.0, 1.0, 6.0};
    double crossing_clear = 30.0; // keep buildings this far from the crossing center
    double tree_clear = 14.0;
    Vec3 car_dims{4.5, 1.8, 2.0};
    Vec3 bus_dims{12.0, 2.5, 3.0};
    int vehicles_low = 4, vehicles_medium = 10, vehicles_high = 20;
    double bus_fraction = 0.25;
    double vehicle_clearance = 4.0; // bumper-to-bumper gap within a lane
    double vehicle_span = 150.0;    // fillers spawn within +/- this along the street
    double antenna_offset = 0.9;    // antenna / LiDAR mast above the roof; high enough
                                    // that the ground bounce clears the own body
    double snapshot_period = 0.1;   // s, one LiDAR revolution at 10 Hz

    int vehicle_count(Vtd v) const
    {
        switch (v)
        {
        case Vtd::low: return vehicles_low;
        case Vtd::medium: return vehicles_medium;
        default: return vehicles_high;
        }
    }
};

namespace detail
{

// street axis 0 = along x, 1 = along y
inline Vec3 street_point(int axis, double along, double lat, double z)
{
    return axis == 0 ? Vec3{along, lat, z} : Vec3{lat, along, z};
}

inline void place_buildings(std::vector<SceneObject> &objects, int &next_id, int axis,
                            bool carve_center, const SceneGenParams &p, Rng &rng)
{
    for (double side : {-1.0, 1.0})
    {
        double cursor = -p.street_half_length;
        while (true)
        {
            double len = rng.uniform(p.building_len_min, p.building_len_max);
            if (cursor + len > p.street_half_length)
                break;
            double depth = rng.uniform(p.building_depth_min, p.building_depth_max);
            double height = rng.uniform(p.building_height_min, p.building_height_max);
            double setback = rng.uniform(0.0, p.building_front_jitter);
            double along = cursor + 0.5 * len;
            cursor += len + rng.uniform(p.building_gap_min, p.building_gap_max);
            if (carve_center && std::abs(along) < p.crossing_clear + 0.5 * len)
                continue;
            SceneObject b;
            b.id = next_id++;
            b.kind = ObjectKind::building;
            double lat = side * (p.building_front + setback + 0.5 * depth);
            b.center = street_point(axis, along, lat, 0.5 * height);
            b.dims = axis == 0 ? Vec3{len, depth, height} : Vec3{depth, len, height};
            objects.push_back(b);
        }
    }
}

inline void place_trees(std::vector<SceneObject> &objects, int &next_id, int axis,
                        bool carve_center, const SceneGenParams &p, Rng &rng)
{
    for (double side : {-1.0, 1.0})
        for (double along = -p.street_half_length + 0.5 * p.tree_spacing;
             along <= p.street_half_length; along += p.tree_spacing)
        {
            double lat = p.tree_lat - rng.uniform(0.0, p.tree_lat_jitter);
            if (carve_center && std::abs(along) < p.tree_clear)
                continue;
            SceneObject t;
            t.id = next_id++;
            t.kind = ObjectKind::tree;
            t.center = street_point(axis, along, side * lat, 0.5 * p.tree_dims.z);
            t.dims = p.tree_dims;
            objects.push_back(t);
        }
}

struct LaneSlot
{
    int axis;
    int lane;
    double along;
    double half_len;
};

inline bool lane_fits(const std::vector<LaneSlot> &used, const LaneSlot &cand, double clearance)
{
    for (const auto &u : used)
        if (u.axis == cand.axis && u.lane == cand.lane &&
            std::abs(u.along - cand.along) < u.half_len + cand.half_len + clearance)
            return false;
    return true;
}

inline SceneObject make_vehicle(int id, ObjectKind kind, int axis, double lat, double along,
                                double speed, const SceneGenParams &p)
{
    SceneObject v;
    v.id = id;
    v.kind = kind;
    v.dims = kind == ObjectKind::bus ? p.bus_dims : p.car_dims;
    v.center = street_point(axis, along, lat, 0.5 * v.dims.z);
    v.velocity = axis == 0 ? Vec3{speed, 0.0, 0.0} : Vec3{0.0, speed, 0.0};
    v.yaw = axis == 0 ? (speed >= 0.0 ? 0.0 : 3.14159265358979323846)
                      : (speed >= 0.0 ? 1.5707963267948966 : -1.5707963267948966);
    return v;
}

} // namespace detail

// Deterministic procedural crossroad scene. Buildings line the street(s),
// trees sit on the sidewalks, vehicles follow straight lanes at per-lane
// speeds. The first four vehicles are the designated communication cars;
// the six transceiver links are the pairs among them.
inline Scene build_scene(StreetLayout layout, Vtd vtd, uint64_t seed,
                         const SceneGenParams &p = SceneGenParams{})
{
    Rng rng(hash_mix(seed, static_cast<uint64_t>(layout) + 11, static_cast<uint64_t>(vtd) + 37));

    Scene scene;
    scene.layout = layout;
    scene.vtd = vtd;
    scene.seed = seed;
    scene.snapshot_period = p.snapshot_period;

    int next_id = 0;

    SceneObject ground;
    ground.id = next_id++;
    ground.kind = ObjectKind::ground;
    ground.center = {0.0, 0.0, -0.5};
    ground.dims = {2.5 * p.street_half_length, 2.5 * p.street_half_length, 1.0};
    scene.objects.push_back(ground);

    bool has_x = layout != StreetLayout::horizontal;
    bool has_y = layout != StreetLayout::vertical;
    bool carve = layout == StreetLayout::crossing;

    if (has_x)
    {
        detail::place_buildings(scene.objects, next_id, 0, carve, p, rng);
        detail::place_trees(scene.objects, next_id, 0, carve, p);
    }
    if (has_y)
    {
        detail::place_buildings(scene.objects, next_id, 1, carve, p, rng);
        detail::place_trees(scene.objects, next_id, 1, carve, p);
    }

    // Communication cars: two on the primary street sharing a lane, one
    // oncoming, one on the outer lane (crossing puts the last two on the
    // second street so cross-street links exist).
    int axis_a = has_x ? 0 : 1;
    int axis_b = carve ? 1 : axis_a;
    std::vector<detail::LaneSlot> used;
    struct CommSpec
    {
        int axis, lane;
        double along;
    };
    const CommSpec comm[4] = {{axis_a, 0, -40.0}, {axis_a, 0, -100.0}, {axis_b, 2, 60.0}, {axis_b, 1, -80.0}};
    for (int k = 0; k < 4; ++k)
    {
        const auto &cs = comm[k];
        SceneObject v = detail::make_vehicle(next_id, ObjectKind::car, cs.axis, p.lane_lat[cs.lane],
                                             cs.along, p.lane_speed[cs.lane], p);
        next_id++;
        scene.comm_ids[static_cast<size_t>(k)] = v.id;
        used.push_back({cs.axis, cs.lane, cs.along, 0.5 * v.dims.x});
        scene.objects.push_back(v);
    }

    int total_vehicles = p.vehicle_count(vtd);
    for (int k = 4; k < total_vehicles; ++k)
    {
        ObjectKind kind = rng.uniform() < p.bus_fraction ? ObjectKind::bus : ObjectKind::car;
        double half_len = 0.5 * (kind == ObjectKind::bus ? p.bus_dims.x : p.car_dims.x);
        int axis = carve ? static_cast<int>(rng.below(2)) : axis_a;
        int lane = static_cast<int>(rng.below(4));
        double along = 0.0;
        bool placed = false;
        for (int attempt = 0; attempt < 200 && !placed; ++attempt)
        {
            along = rng.uniform(-p.vehicle_span, p.vehicle_span);
            detail::LaneSlot cand{axis, lane, along, half_len};
            if (detail::lane_fits(used, cand, p.vehicle_clearance))
            {
                used.push_back(cand);
                placed = true;
            }
        }
        if (!placed)
        {
            // deterministic overflow slot well outside the busy span
            along = p.vehicle_span + 20.0 * (k + 1);
            used.push_back({axis, lane, along, half_len});
        }
        scene.objects.push_back(
            detail::make_vehicle(next_id, kind, axis, p.lane_lat[lane], along, p.lane_speed[lane], p));
        next_id++;
    }

    return scene;
}

// Advance the scene by n snapshots. Object base centers stay fixed at their
// snapshot-0 values; poses are materialized from snapshot_index, so
// advance(advance(s, a), b) is bit-identical to advance(s, a + b).
inline Scene advance_scene(const Scene &scene, int n)
{
    if (n < 0)
        throw std::invalid_argument("advance_scene: n must be >= 0");
    Scene out = scene;
    out.snapshot_index += n;
    return out;
}

// Copy of the scene objects with centers moved to the current snapshot
inline std::vector<SceneObject> materialize(const Scene &scene)
{
    std::vector<SceneObject> out = scene.objects;
    for (auto &o : out)
        o.center = scene.center_of(o);
    return out;
}

inline const SceneObject &object_by_id(const Scene &scene, int id)
{
    for (const auto &o : scene.objects)
        if (o.id == id)
            return o;
    throw std::out_of_range("object_by_id: no object with id " + std::to_string(id));
}

constexpr int kLinksPerScene = 6;

// The six transceiver links are the unordered pairs of the four
// communication cars, in lexicographic order.
inline std::pair<int, int> link_pair(int link_index)
{
    static const std::pair<int, int> pairs[kLinksPerScene] = {{0, 1}, {0, 2}, {0, 3},
                                                              {1, 2}, {1, 3}, {2, 3}};
    if (link_index < 0 || link_index >= kLinksPerScene)
        throw std::out_of_range("link_pair: link index out of range");
    return pairs[link_index];
}

inline Vec3 antenna_position(const Scene &scene, const SceneObject &vehicle, double antenna_offset)
{
    Vec3 c = scene.center_of(vehicle);
    return {c.x, c.y, c.z + 0.5 * vehicle.dims.z + antenna_offset};
}

inline TransceiverPose link_pose(const Scene &scene, int link_index, double antenna_offset = 0.5)
{
    auto [a, b] = link_pair(link_index);
    const SceneObject &va = object_by_id(scene, scene.comm_ids[static_cast<size_t>(a)]);
    const SceneObject &vb = object_by_id(scene, scene.comm_ids[static_cast<size_t>(b)]);
    TransceiverPose pose;
    pose.tx_position = antenna_position(scene, va, antenna_offset);
    pose.rx_position = antenna_position(scene, vb, antenna_offset);
    pose.tx_velocity = va.velocity;
    pose.rx_velocity = vb.velocity;
    return pose;
}

inline void validate_scene(const Scene &scene)
{
    int grounds = 0;
    for (const auto &o : scene.objects)
    {
        if (o.dims.x <= 0.0 || o.dims.y <= 0.0 || o.dims.z <= 0.0)
            throw std::invalid_argument("scene object dims must be strictly positive");
        if (!is_vehicle(o.kind) && norm(o.velocity) != 0.0)
            throw std::invalid_argument("static scene objects must have zero velocity");
        if (o.kind == ObjectKind::ground)
            ++grounds;
    }
    if (grounds != 1)
        throw std::invalid_argument("scene must contain exactly one ground object");
}

} // namespace lcsim

#endif
