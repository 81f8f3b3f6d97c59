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

#include <set>
#include <tuple>

#include <lcsim/pointcloud.hpp>
#include <lcsim/rng.hpp>

#include "test_oracles.hpp"

using namespace lcsim;

namespace
{

PointCloud cloud_of(std::vector<Vec3> pts)
{
    PointCloud c;
    c.points = std::move(pts);
    return c;
}

PointCloud random_blob(Rng &rng, Vec3 center, double radius, int n)
{
    PointCloud c;
    for (int i = 0; i < n; ++i)
        c.points.push_back(center + Vec3{rng.uniform(-radius, radius), rng.uniform(-radius, radius),
                                         rng.uniform(-radius, radius)});
    return c;
}

} // namespace

TEST_CASE("concatenate preserves order and cardinality")
{
    CHECK(concatenate({}, {}).empty());
    PointCloud a = cloud_of({{1, 2, 3}});
    PointCloud b = cloud_of({{4, 5, 6}});
    PointCloud ab = concatenate(a, b);
    REQUIRE(ab.size() == 2);
    CHECK(ab.points[0] == Vec3{1, 2, 3});
    CHECK(ab.points[1] == Vec3{4, 5, 6});

    Rng rng(1);
    PointCloud big_a = random_blob(rng, {0, 0, 0}, 5, 1000);
    PointCloud big_b = random_blob(rng, {9, 9, 9}, 5, 800);
    CHECK(concatenate(big_a, big_b).size() == 1800);
}

TEST_CASE("remove_ground keeps exactly the points above the threshold")
{
    PointCloud c = cloud_of({{0, 0, 0.0}, {1, 0, 0.1}, {2, 0, 0.5}, {3, 0, 2.0}});
    PointCloud f = remove_ground(c, 0.2);
    REQUIRE(f.size() == 2);
    CHECK(f.points[0].z == 0.5);
    CHECK(f.points[1].z == 2.0);

    PointCloud all_ground = cloud_of({{0, 0, 0}, {1, 1, 0}});
    CHECK(remove_ground(all_ground, 0.2).empty());

    PointCloud positive = cloud_of({{0, 0, 0.3}, {0, 0, 1.0}});
    CHECK(remove_ground(positive, 0.0).size() == 2);
    CHECK_THROWS_AS(remove_ground(c, -0.1), std::invalid_argument);
}

TEST_CASE("voxel_downsample: centroid per occupied voxel")
{
    PointCloud two = cloud_of({{0.1, 0.1, 0.1}, {0.2, 0.2, 0.2}});
    PointCloud d = voxel_downsample(two, 0.5);
    REQUIRE(d.size() == 1);
    CHECK(norm(d.points[0] - Vec3{0.15, 0.15, 0.15}) < 1e-12);

    // far-apart points survive unchanged
    PointCloud sparse = cloud_of({{0, 0, 0}, {5, 0, 0}, {0, 5, 0}});
    PointCloud ds = voxel_downsample(sparse, 1.0);
    CHECK(ds.size() == 3);

    CHECK_THROWS_AS(voxel_downsample(two, 0.0), std::invalid_argument);
}

TEST_CASE("voxel_downsample count equals brute-force distinct cells")
{
    Rng rng(42);
    PointCloud c;
    for (int i = 0; i < 10000; ++i)
        c.points.push_back({rng.uniform(-8, 8), rng.uniform(-8, 8), rng.uniform(-2, 2)});
    double voxel = 0.5;
    std::set<std::tuple<long long, long long, long long>> cells;
    for (const auto &p : c.points)
        cells.insert({static_cast<long long>(std::floor(p.x / voxel)),
                      static_cast<long long>(std::floor(p.y / voxel)),
                      static_cast<long long>(std::floor(p.z / voxel))});
    CHECK(voxel_downsample(c, voxel).size() == cells.size());
}

TEST_CASE("dbscan separates distant blobs and flags isolated points")
{
    Rng rng(7);
    PointCloud c = random_blob(rng, {0, 0, 0}, 0.5, 50);
    PointCloud b = random_blob(rng, {10, 0, 0}, 0.5, 50);
    c.points.insert(c.points.end(), b.points.begin(), b.points.end());
    DbscanResult r = dbscan(c, 1.0, 5);
    CHECK(r.clusters.size() == 2);
    CHECK(r.noise_indices.empty());

    PointCloud lonely = cloud_of({{0, 0, 0}});
    DbscanResult r2 = dbscan(lonely, 1.0, 2);
    CHECK(r2.clusters.empty());
    REQUIRE(r2.noise_indices.size() == 1);
}

TEST_CASE("dbscan matches the quadratic reference on random clouds")
{
    Rng rng(2025);
    for (int it = 0; it < 20; ++it)
    {
        PointCloud c;
        int blobs = 2 + static_cast<int>(rng.below(4));
        for (int b = 0; b < blobs; ++b)
        {
            Vec3 ctr{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-2, 2)};
            PointCloud blob = random_blob(rng, ctr, rng.uniform(0.3, 2.5), 40 + static_cast<int>(rng.below(150)));
            c.points.insert(c.points.end(), blob.points.begin(), blob.points.end());
        }
        for (int i = 0; i < 30; ++i) // scattered noise
            c.points.push_back({rng.uniform(-40, 40), rng.uniform(-40, 40), rng.uniform(-5, 5)});

        double eps = rng.uniform(0.4, 1.2);
        int min_pts = 3 + static_cast<int>(rng.below(6));
        DbscanResult fast = dbscan(c, eps, min_pts);
        DbscanResult ref = testoracle::dbscan_reference(c, eps, min_pts);

        REQUIRE(fast.clusters.size() == ref.clusters.size());
        REQUIRE(fast.noise_indices == ref.noise_indices);
        for (size_t k = 0; k < fast.clusters.size(); ++k)
        {
            CHECK(fast.clusters[k].label == ref.clusters[k].label);
            REQUIRE(fast.clusters[k].member_indices == ref.clusters[k].member_indices);
        }
    }
}

TEST_CASE("fit_cuboid: axis-aligned unit square")
{
    PointCloud c = cloud_of({{0, 0, 0}, {1, 0, 0.5}, {1, 1, 1}, {0, 1, 0.2}});
    Cluster cl;
    cl.label = 0;
    cl.member_indices = {0, 1, 2, 3};
    ClusterCuboid cb = fit_cuboid(c, cl);
    CHECK(cb.length == Catch::Approx(1.0));
    CHECK(cb.width == Catch::Approx(1.0));
    CHECK(cb.height == Catch::Approx(1.0));
    CHECK(2.0 * (cb.length + cb.width) == Catch::Approx(4.0));
    CHECK(cb.center.x == Catch::Approx(0.5));
    CHECK(cb.center.y == Catch::Approx(0.5));
    CHECK(cb.center.z == Catch::Approx(0.5));
    CHECK(std::hypot(cb.orient_x, cb.orient_y) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("fit_cuboid: rotated square keeps its dimensions and orientation")
{
    double phi = 30.0 * 3.14159265358979323846 / 180.0;
    PointCloud c;
    Cluster cl;
    int idx = 0;
    for (auto &p : std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}, {1, 1, 1}, {0, 1, 1}})
    {
        c.points.push_back(rotate_z(p, phi));
        cl.member_indices.push_back(idx++);
    }
    ClusterCuboid cb = fit_cuboid(c, cl);
    CHECK(cb.length == Catch::Approx(1.0));
    CHECK(cb.width == Catch::Approx(1.0));
    double angle = cb.orientation_angle();
    double diff = std::fmod(std::abs(angle - phi), 1.5707963267948966);
    diff = std::min(diff, 1.5707963267948966 - diff);
    CHECK(diff < 1e-9);
}

TEST_CASE("fit_cuboid perimeter matches the brute-force direction sweep")
{
    Rng rng(31337);
    for (int it = 0; it < 100; ++it)
    {
        int n = 5 + static_cast<int>(rng.below(55));
        PointCloud c;
        Cluster cl;
        for (int i = 0; i < n; ++i)
        {
            c.points.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(0, 3)});
            cl.member_indices.push_back(i);
        }
        ClusterCuboid cb = fit_cuboid(c, cl);
        double perimeter = 2.0 * (cb.length + cb.width);
        double ref = testoracle::min_perimeter_bruteforce(c, cl);
        CHECK(std::abs(perimeter - ref) < 1e-9);

        // never worse than the axis-aligned rectangle
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (int i : cl.member_indices)
        {
            xmin = std::min(xmin, c.points[static_cast<size_t>(i)].x);
            xmax = std::max(xmax, c.points[static_cast<size_t>(i)].x);
            ymin = std::min(ymin, c.points[static_cast<size_t>(i)].y);
            ymax = std::max(ymax, c.points[static_cast<size_t>(i)].y);
        }
        CHECK(perimeter <= 2.0 * ((xmax - xmin) + (ymax - ymin)) + 1e-9);

        // containment of every member (inflated 1e-9)
        Cuboid box = cb.cuboid();
        for (int i : cl.member_indices)
            CHECK(box.contains(c.points[static_cast<size_t>(i)], 1e-9));
    }
}

TEST_CASE("fit_cuboid rotation equivariance")
{
    Rng rng(991);
    for (int it = 0; it < 30; ++it)
    {
        int n = 10 + static_cast<int>(rng.below(40));
        PointCloud c, cr;
        Cluster cl;
        double phi = rng.uniform(0, 3.14159265358979323846);
        for (int i = 0; i < n; ++i)
        {
            Vec3 p{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0, 2)};
            c.points.push_back(p);
            cr.points.push_back(rotate_z(p, phi));
            cl.member_indices.push_back(i);
        }
        ClusterCuboid a = fit_cuboid(c, cl);
        ClusterCuboid b = fit_cuboid(cr, cl);
        CHECK(std::abs(a.length - b.length) < 1e-9);
        CHECK(std::abs(a.width - b.width) < 1e-9);
        CHECK(std::abs(a.height - b.height) < 1e-9);
        double diff = std::fmod(std::abs(b.orientation_angle() - a.orientation_angle() - phi),
                                1.5707963267948966);
        diff = std::min(std::abs(diff), std::abs(1.5707963267948966 - diff));
        CHECK(diff < 1e-9);
    }
}

TEST_CASE("fit_cuboid degenerate clusters get 0.01 m floors")
{
    PointCloud c = cloud_of({{1, 2, 3}});
    Cluster cl;
    cl.member_indices = {0};
    ClusterCuboid cb = fit_cuboid(c, cl);
    CHECK(cb.length == 0.01);
    CHECK(cb.width == 0.01);
    CHECK(cb.height == 0.01);

    PointCloud seg = cloud_of({{0, 0, 0}, {3, 3, 0}, {1.5, 1.5, 0}});
    Cluster cl2;
    cl2.member_indices = {0, 1, 2};
    ClusterCuboid cb2 = fit_cuboid(seg, cl2);
    CHECK(cb2.length == Catch::Approx(std::sqrt(18.0)));
    CHECK(cb2.width == 0.01);
    CHECK(cb2.height == 0.01);

    Cluster empty;
    CHECK_THROWS_AS(fit_cuboid(c, empty), std::invalid_argument);
}
