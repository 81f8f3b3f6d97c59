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

#ifndef LCSIM_POINTCLOUD_HPP
#define LCSIM_POINTCLOUD_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "geometry.hpp"

namespace lcsim
{

struct PointCloud
{
    std::vector<Vec3> points;

    size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

struct Cluster
{
    int label = 0;
    std::vector<int> member_indices; // indices into the parent cloud
};

// Oriented bounding cuboid of one cluster: minimum-perimeter rectangle of
// the ground-plane projection, extruded over the cluster's z-extent.
struct ClusterCuboid
{
    Vec3 center;                 // rectangle center, z at mid-height
    double length = 0.0;         // along orientation, >= width
    double width = 0.0;
    double height = 0.0;
    double orient_x = 1.0, orient_y = 0.0; // unit vector of the long side

    double orientation_angle() const { return std::atan2(orient_y, orient_x); }

    Cuboid cuboid() const
    {
        return Cuboid{center, {length, width, height}, orientation_angle()};
    }
};

// ---------- Steps 1-2: concatenation and pre-processing ----------

inline PointCloud concatenate(const PointCloud &tx_cloud, const PointCloud &rx_cloud)
{
    PointCloud out;
    out.points.reserve(tx_cloud.size() + rx_cloud.size());
    out.points.insert(out.points.end(), tx_cloud.points.begin(), tx_cloud.points.end());
    out.points.insert(out.points.end(), rx_cloud.points.begin(), rx_cloud.points.end());
    return out;
}

inline PointCloud remove_ground(const PointCloud &cloud, double z_threshold)
{
    if (z_threshold < 0.0)
        throw std::invalid_argument("remove_ground: z_threshold must be >= 0");
    PointCloud out;
    out.points.reserve(cloud.size());
    for (const auto &p : cloud.points)
        if (p.z > z_threshold)
            out.points.push_back(p);
    return out;
}

namespace detail
{

struct VoxelKey
{
    int64_t x, y, z;
    bool operator==(const VoxelKey &o) const { return x == o.x && y == o.y && z == o.z; }
};

struct VoxelKeyHash
{
    size_t operator()(const VoxelKey &k) const
    {
        uint64_t h = 1469598103934665603ULL;
        for (int64_t v : {k.x, k.y, k.z})
        {
            h ^= static_cast<uint64_t>(v);
            h *= 1099511628211ULL;
        }
        return static_cast<size_t>(h);
    }
};

inline VoxelKey voxel_of(const Vec3 &p, double voxel)
{
    return {static_cast<int64_t>(std::floor(p.x / voxel)),
            static_cast<int64_t>(std::floor(p.y / voxel)),
            static_cast<int64_t>(std::floor(p.z / voxel))};
}

} // namespace detail

// One representative point (member centroid) per occupied voxel. Output is
// ordered by first occurrence of each voxel in the input, so the result is a
// deterministic function of the input sequence.
inline PointCloud voxel_downsample(const PointCloud &cloud, double voxel)
{
    if (voxel <= 0.0)
        throw std::invalid_argument("voxel_downsample: voxel size must be > 0");

    struct Acc
    {
        Vec3 sum;
        int count = 0;
        size_t order = 0;
    };
    std::unordered_map<detail::VoxelKey, Acc, detail::VoxelKeyHash> cells;
    cells.reserve(cloud.size());
    size_t next_order = 0;
    for (const auto &p : cloud.points)
    {
        auto &acc = cells[detail::voxel_of(p, voxel)];
        if (acc.count == 0)
            acc.order = next_order++;
        acc.sum += p;
        acc.count++;
    }

    PointCloud out;
    out.points.resize(cells.size());
    for (const auto &[key, acc] : cells)
        out.points[acc.order] = acc.sum / static_cast<double>(acc.count);
    return out;
}

// ---------- Step 3: DBSCAN ----------

struct DbscanResult
{
    std::vector<Cluster> clusters;
    std::vector<int> noise_indices;
};

namespace detail
{

// 3D grid index over cells of size eps; neighbor queries return candidate
// indices in ascending order, which the caller relies on for the
// deterministic border-point rule.
class GridIndex
{
  public:
    GridIndex(const std::vector<Vec3> &pts, double eps) : pts_(pts), eps_(eps)
    {
        cells_.reserve(pts.size());
        for (size_t i = 0; i < pts.size(); ++i)
            cells_[voxel_of(pts[i], eps)].push_back(static_cast<int>(i));
    }

    void neighbors(int i, std::vector<int> &out) const
    {
        out.clear();
        const Vec3 &p = pts_[static_cast<size_t>(i)];
        VoxelKey c = voxel_of(p, eps_);
        double e2 = eps_ * eps_;
        for (int64_t dx = -1; dx <= 1; ++dx)
            for (int64_t dy = -1; dy <= 1; ++dy)
                for (int64_t dz = -1; dz <= 1; ++dz)
                {
                    auto it = cells_.find({c.x + dx, c.y + dy, c.z + dz});
                    if (it == cells_.end())
                        continue;
                    for (int j : it->second)
                    {
                        Vec3 d = pts_[static_cast<size_t>(j)] - p;
                        if (dot(d, d) <= e2)
                            out.push_back(j);
                    }
                }
        std::sort(out.begin(), out.end());
    }

  private:
    const std::vector<Vec3> &pts_;
    double eps_;
    std::unordered_map<VoxelKey, std::vector<int>, VoxelKeyHash> cells_;
};

} // namespace detail

// Standard DBSCAN over 3D Euclidean distance. Points are scanned in index
// order; cluster expansion visits neighbors in ascending index order, so
// border points always join the first core cluster that reaches them and the
// partition is bit-deterministic.
inline DbscanResult dbscan(const PointCloud &cloud, double eps, int min_pts)
{
    if (eps <= 0.0)
        throw std::invalid_argument("dbscan: eps must be > 0");
    if (min_pts < 1)
        throw std::invalid_argument("dbscan: min_pts must be >= 1");

    const int n = static_cast<int>(cloud.size());
    constexpr int kUnvisited = -2, kNoise = -1;
    std::vector<int> label(static_cast<size_t>(n), kUnvisited);
    detail::GridIndex index(cloud.points, eps);

    DbscanResult result;
    std::vector<int> neigh, frontier_neigh;
    int next_label = 0;

    for (int i = 0; i < n; ++i)
    {
        if (label[static_cast<size_t>(i)] != kUnvisited)
            continue;
        index.neighbors(i, neigh);
        if (static_cast<int>(neigh.size()) < min_pts)
        {
            label[static_cast<size_t>(i)] = kNoise;
            continue;
        }

        int cluster_id = next_label++;
        label[static_cast<size_t>(i)] = cluster_id;
        std::vector<int> queue = neigh;
        for (size_t qi = 0; qi < queue.size(); ++qi)
        {
            int j = queue[qi];
            int &lj = label[static_cast<size_t>(j)];
            if (lj == kNoise)
                lj = cluster_id; // border point: first cluster to reach it wins
            if (lj != kUnvisited)
                continue;
            lj = cluster_id;
            index.neighbors(j, frontier_neigh);
            if (static_cast<int>(frontier_neigh.size()) >= min_pts)
                queue.insert(queue.end(), frontier_neigh.begin(), frontier_neigh.end());
        }
    }

    result.clusters.resize(static_cast<size_t>(next_label));
    for (int c = 0; c < next_label; ++c)
        result.clusters[static_cast<size_t>(c)].label = c;
    for (int i = 0; i < n; ++i)
    {
        int l = label[static_cast<size_t>(i)];
        if (l >= 0)
            result.clusters[static_cast<size_t>(l)].member_indices.push_back(i);
        else
            result.noise_indices.push_back(i);
    }
    return result;
}

// ---------- Step 4: minimum-perimeter circumscribed cuboid ----------

namespace detail
{

struct Pt2
{
    double x, y;
};

inline double cross2(const Pt2 &o, const Pt2 &a, const Pt2 &b)
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew monotone chain; returns hull in counter-clockwise order without
// repeating the first point. Collinear points are dropped.
inline std::vector<Pt2> convex_hull(std::vector<Pt2> pts)
{
    std::sort(pts.begin(), pts.end(), [](const Pt2 &a, const Pt2 &b)
              { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end(), [](const Pt2 &a, const Pt2 &b)
                          { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const size_t n = pts.size();
    if (n < 3)
        return pts;
    std::vector<Pt2> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i)
    {
        while (k >= 2 && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0)
            k--;
        hull[k++] = pts[i];
    }
    size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;)
    {
        while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0)
            k--;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

struct RectFit
{
    double angle = 0.0; // direction of the rectangle side used as reference
    double len_u = 0.0, len_v = 0.0;
    double cu = 0.0, cv = 0.0; // rectangle center in the (u, v) frame
};

// Extents of the hull along direction theta and its perpendicular
inline RectFit rect_at_angle(const std::vector<Pt2> &hull, double theta)
{
    double c = std::cos(theta), s = std::sin(theta);
    double umin = 1e300, umax = -1e300, vmin = 1e300, vmax = -1e300;
    for (const auto &p : hull)
    {
        double u = c * p.x + s * p.y;
        double v = -s * p.x + c * p.y;
        umin = std::min(umin, u), umax = std::max(umax, u);
        vmin = std::min(vmin, v), vmax = std::max(vmax, v);
    }
    RectFit r;
    r.angle = theta;
    r.len_u = umax - umin;
    r.len_v = vmax - vmin;
    r.cu = 0.5 * (umin + umax);
    r.cv = 0.5 * (vmin + vmax);
    return r;
}

} // namespace detail

// Minimum-perimeter oriented bounding rectangle of the cluster's ground-plane
// projection (candidate orientations are the hull edge directions), extruded
// to the cluster's z-extent. Orientation points along the longer side; ties
// between equal-perimeter candidates resolve to the smaller angle in
// [0, pi/2). Degenerate clusters get 0.01 m width/height floors.
inline ClusterCuboid fit_cuboid(const PointCloud &cloud, const Cluster &cluster)
{
    if (cluster.member_indices.empty())
        throw std::invalid_argument("fit_cuboid: cluster is empty");

    std::vector<detail::Pt2> proj;
    proj.reserve(cluster.member_indices.size());
    double zmin = 1e300, zmax = -1e300;
    for (int idx : cluster.member_indices)
    {
        const Vec3 &p = cloud.points[static_cast<size_t>(idx)];
        proj.push_back({p.x, p.y});
        zmin = std::min(zmin, p.z);
        zmax = std::max(zmax, p.z);
    }

    std::vector<detail::Pt2> hull = detail::convex_hull(proj);

    detail::RectFit best;
    if (hull.size() < 3)
    {
        // Degenerate: collinear or single point. Align with the segment.
        double theta = 0.0;
        if (hull.size() == 2)
        {
            theta = std::atan2(hull[1].y - hull[0].y, hull[1].x - hull[0].x);
            theta = std::fmod(theta + 3.14159265358979323846, 3.14159265358979323846);
            if (theta >= 1.5707963267948966)
                theta -= 1.5707963267948966; // reduce into [0, pi/2)
        }
        best = detail::rect_at_angle(proj, theta);
    }
    else
    {
        double best_perimeter = 1e300;
        const size_t h = hull.size();
        for (size_t e = 0; e < h; ++e)
        {
            const auto &a = hull[e];
            const auto &b = hull[(e + 1) % h];
            double theta = std::atan2(b.y - a.y, b.x - a.x);
            // edge direction is a candidate modulo 90 degrees
            theta = std::fmod(theta + 6.283185307179586, 1.5707963267948966);
            detail::RectFit cand = detail::rect_at_angle(hull, theta);
            double perimeter = 2.0 * (cand.len_u + cand.len_v);
            if (perimeter < best_perimeter - 1e-12 ||
                (perimeter < best_perimeter + 1e-12 && cand.angle < best.angle))
            {
                best_perimeter = perimeter;
                best = cand;
            }
        }
    }

    ClusterCuboid out;
    double angle = best.angle;
    double len = best.len_u, wid = best.len_v;
    if (wid > len)
    {
        std::swap(len, wid);
        angle += 1.5707963267948966;
    }
    angle = std::fmod(angle + 6.283185307179586, 3.14159265358979323846);

    out.length = std::max(len, 0.01);
    out.width = std::max(wid, 0.01);
    out.height = std::max(zmax - zmin, 0.01);
    out.orient_x = std::cos(angle);
    out.orient_y = std::sin(angle);

    // rectangle center back in world coordinates (from the fit frame)
    double c = std::cos(best.angle), s = std::sin(best.angle);
    out.center = {c * best.cu - s * best.cv, s * best.cu + c * best.cv, 0.5 * (zmin + zmax)};
    return out;
}

} // namespace lcsim

#endif
