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

#include <lcsim/io.hpp>
#include <lcsim/scene.hpp>

using namespace lcsim;

namespace
{

int vehicle_count(const Scene &s)
{
    int n = 0;
    for (const auto &o : s.objects)
        if (is_vehicle(o.kind))
            ++n;
    return n;
}

} // namespace

TEST_CASE("build_scene is deterministic")
{
    Scene a = build_scene(StreetLayout::crossing, Vtd::high, 7);
    Scene b = build_scene(StreetLayout::crossing, Vtd::high, 7);
    CHECK(scene_to_json(a).dump() == scene_to_json(b).dump());
}

TEST_CASE("vehicle counts are monotone across VTD levels")
{
    for (uint64_t seed = 0; seed < 100; ++seed)
    {
        int lo = vehicle_count(build_scene(StreetLayout::vertical, Vtd::low, seed));
        int mid = vehicle_count(build_scene(StreetLayout::vertical, Vtd::medium, seed));
        int hi = vehicle_count(build_scene(StreetLayout::vertical, Vtd::high, seed));
        REQUIRE(lo <= mid);
        REQUIRE(mid <= hi);
    }
}

TEST_CASE("buildings stay within the generator's placement bounds")
{
    SceneGenParams p;
    Scene s = build_scene(StreetLayout::vertical, Vtd::low, 1, p);
    double lat_min = p.building_front + 0.5 * p.building_depth_min;
    double lat_max = p.building_front + p.building_front_jitter + 0.5 * p.building_depth_max;
    int buildings = 0;
    for (const auto &o : s.objects)
    {
        if (o.kind != ObjectKind::building)
            continue;
        ++buildings;
        REQUIRE(std::abs(o.center.y) >= lat_min - 1e-9);
        REQUIRE(std::abs(o.center.y) <= lat_max + 1e-9);
        REQUIRE(std::abs(o.center.x) <= p.street_half_length);
        REQUIRE(o.center.z == Catch::Approx(0.5 * o.dims.z));
        REQUIRE(o.dims.z >= p.building_height_min);
        REQUIRE(o.dims.z <= p.building_height_max);
    }
    CHECK(buildings > 10);
}

TEST_CASE("generated scenes validate for all nine conditions")
{
    for (StreetLayout l : {StreetLayout::vertical, StreetLayout::horizontal, StreetLayout::crossing})
        for (Vtd v : {Vtd::low, Vtd::medium, Vtd::high})
        {
            Scene s = build_scene(l, v, 3);
            REQUIRE_NOTHROW(validate_scene(s));
            CHECK(vehicle_count(s) == SceneGenParams{}.vehicle_count(v));
            // default heights: cars 2 m, buses 3 m
            for (const auto &o : s.objects)
            {
                if (o.kind == ObjectKind::car)
                    CHECK(o.dims.z == 2.0);
                if (o.kind == ObjectKind::bus)
                    CHECK(o.dims.z == 3.0);
                if (is_vehicle(o.kind))
                    CHECK(o.center.z > 0.0); // above the ground plane
            }
        }
}

TEST_CASE("advance_scene is the identity for n = 0")
{
    Scene s = build_scene(StreetLayout::crossing, Vtd::medium, 11);
    Scene t = advance_scene(s, 0);
    CHECK(scene_to_json(s).dump() == scene_to_json(t).dump());
}

TEST_CASE("advance_scene moves dynamics linearly and keeps statics fixed")
{
    Scene s;
    s.snapshot_period = 0.1;
    SceneObject ground;
    ground.id = 0;
    ground.kind = ObjectKind::ground;
    ground.center = {0, 0, -0.5};
    ground.dims = {100, 100, 1};
    SceneObject car;
    car.id = 1;
    car.kind = ObjectKind::car;
    car.center = {0, 0, 1};
    car.dims = {4.5, 1.8, 2.0};
    car.velocity = {10, 0, 0};
    s.objects = {ground, car};

    Scene t = advance_scene(s, 5);
    Vec3 c = t.center_of(t.objects[1]);
    CHECK(c.x == Catch::Approx(5.0));
    CHECK(c.y == 0.0);
    CHECK(c.z == 1.0);
    CHECK(t.snapshot_index == 5);
    Vec3 g = t.center_of(t.objects[0]);
    CHECK(g.x == 0.0);

    // composition is bit-identical
    Scene u = advance_scene(advance_scene(s, 2), 3);
    CHECK(u.snapshot_index == t.snapshot_index);
    Vec3 cu = u.center_of(u.objects[1]);
    CHECK(cu.x == c.x);
    CHECK(cu.y == c.y);
    CHECK(cu.z == c.z);
}

TEST_CASE("advance_scene rejects negative steps")
{
    Scene s = build_scene(StreetLayout::vertical, Vtd::low, 2);
    CHECK_THROWS_AS(advance_scene(s, -1), std::invalid_argument);
}

TEST_CASE("link poses: six distinct pairs of communication cars")
{
    Scene s = build_scene(StreetLayout::crossing, Vtd::low, 5);
    for (int link = 0; link < kLinksPerScene; ++link)
    {
        TransceiverPose pose = link_pose(s, link);
        REQUIRE(norm(pose.rx_position - pose.tx_position) > 1.0);
        CHECK(pose.tx_position.z > 0.0);
        CHECK(pose.rx_position.z > 0.0);
    }
    auto [a0, b0] = link_pair(0);
    CHECK(a0 == 0);
    CHECK(b0 == 1);
    CHECK_THROWS_AS(link_pair(6), std::out_of_range);
}

TEST_CASE("materialize moves only dynamic objects")
{
    Scene s = build_scene(StreetLayout::vertical, Vtd::high, 9);
    Scene later = advance_scene(s, 50);
    auto before = materialize(s);
    auto after = materialize(later);
    REQUIRE(before.size() == after.size());
    for (size_t i = 0; i < before.size(); ++i)
    {
        if (is_vehicle(before[i].kind))
            continue;
        CHECK(norm(after[i].center - before[i].center) == 0.0);
    }
}
