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

#ifndef LCSIM_RECOGNIZER_HPP
#define LCSIM_RECOGNIZER_HPP

#include <array>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "mlp.hpp"
#include "pointcloud.hpp"
#include "rt_oracle.hpp"
#include "scene.hpp"

namespace lcsim
{

constexpr int kFeatureDim = 14;

// length, width, height, center (3), orientation (2), tx (3), rx (3) with
// all positions in the link-canonical frame: origin at the Tx-Rx midpoint,
// x-axis along the ground-plane projection of Tx->Rx.
using FeatureVector = std::array<double, kFeatureDim>;

inline FeatureVector extract_features(const ClusterCuboid &cuboid, const TransceiverPose &pose)
{
    Vec3 mid = (pose.tx_position + pose.rx_position) * 0.5;
    Vec3 d = pose.rx_position - pose.tx_position;
    double phi = norm_xy(d) > 1e-12 ? std::atan2(d.y, d.x) : 0.0;

    Vec3 ctr = rotate_z(cuboid.center - mid, -phi);
    Vec3 txc = rotate_z(pose.tx_position - mid, -phi);
    Vec3 rxc = rotate_z(pose.rx_position - mid, -phi);

    // orientation is a line direction (mod pi); canonicalize into [0, pi)
    double c = std::cos(phi), s = std::sin(phi);
    double ox = c * cuboid.orient_x + s * cuboid.orient_y;
    double oy = -s * cuboid.orient_x + c * cuboid.orient_y;
    if (oy < 0.0 || (oy == 0.0 && ox < 0.0))
    {
        ox = -ox;
        oy = -oy;
    }

    return {cuboid.length, cuboid.width, cuboid.height,
            ctr.x, ctr.y, ctr.z,
            ox, oy,
            txc.x, txc.y, txc.z,
            rxc.x, rxc.y, rxc.z};
}

// round half up on a non-negative estimate
inline int round_count(double v)
{
    return static_cast<int>(std::floor(v + 0.5));
}

inline std::vector<int> predict_counts(const MlpModel &model,
                                       const std::vector<ClusterCuboid> &cuboids,
                                       const TransceiverPose &pose)
{
    std::vector<int> out;
    out.reserve(cuboids.size());
    for (const auto &cb : cuboids)
    {
        FeatureVector f = extract_features(cb, pose);
        out.push_back(round_count(mlp_forward(model, f)));
    }
    return out;
}

// Cuboid dimension envelope that separates vehicle-sized clusters from
// buildings and trees
struct VehicleEnvelope
{
    double len_min = 3.0, len_max = 14.0;
    double wid_min = 1.5, wid_max = 3.0;
    double hgt_min = 1.2, hgt_max = 3.5;
};

inline ScattererKind classify_cluster(const ClusterCuboid &cb,
                                      const VehicleEnvelope &env = VehicleEnvelope{})
{
    bool dyn = cb.length >= env.len_min && cb.length <= env.len_max &&
               cb.width >= env.wid_min && cb.width <= env.wid_max &&
               cb.height >= env.hgt_min && cb.height <= env.hgt_max;
    return dyn ? ScattererKind::dynamic_kind : ScattererKind::static_kind;
}

// ---------- Visibility regions ----------

// Ellipsoid of revolution with the transceivers at the foci. A point is
// visible when its distance sum to the foci is at most the major axis 2a.
struct VREllipsoid
{
    Vec3 focus_tx, focus_rx;
    double a = 0.0; // semi-major
    double c = 0.0; // semi-focal = half link distance
    double b = 0.0; // sqrt(a^2 - c^2)
    ScattererKind klass = ScattererKind::static_kind;

    bool contains(const Vec3 &p) const
    {
        return norm(p - focus_tx) + norm(p - focus_rx) <= 2.0 * a;
    }
};

inline VREllipsoid make_vr(const TransceiverPose &pose, double rho, ScattererKind klass)
{
    if (rho < 1.0 + 1e-12)
        rho = 1.0 + 1e-12; // keep a > c
    VREllipsoid vr;
    vr.focus_tx = pose.tx_position;
    vr.focus_rx = pose.rx_position;
    vr.c = 0.5 * norm(pose.rx_position - pose.tx_position);
    vr.a = rho * vr.c;
    vr.b = std::sqrt(vr.a * vr.a - vr.c * vr.c);
    vr.klass = klass;
    return vr;
}

// Smallest axis ratio rho = a/c such that at least fraction q of the class
// scatterers across the snapshots satisfy |P-Tx| + |P-Rx| <= 2 rho c.
inline double fit_vr(const std::vector<GroundTruth> &ground_truths, ScattererKind klass,
                     double coverage_q)
{
    if (coverage_q < 0.0 || coverage_q > 1.0)
        throw config_error("fit_vr: coverage must be in [0, 1]");
    std::vector<double> ratios;
    for (const auto &gt : ground_truths)
    {
        double c2 = norm(gt.rx - gt.tx); // = 2c
        if (c2 <= 0.0)
            continue;
        for (const auto &sc : gt.scatterers)
            if (sc.kind == klass)
                ratios.push_back((norm(sc.position - gt.tx) + norm(sc.position - gt.rx)) / c2);
    }
    if (ratios.empty())
        throw data_error("fit_vr: no scatterers of the requested class");
    std::sort(ratios.begin(), ratios.end());
    double k = std::ceil(coverage_q * static_cast<double>(ratios.size()));
    size_t idx = k < 1.0 ? 0 : static_cast<size_t>(k) - 1;
    idx = std::min(idx, ratios.size() - 1);
    return ratios[idx];
}

// Zero the count of every cluster whose cuboid center falls outside the
// visibility region of its class.
inline std::vector<int> vr_filter(const std::vector<ClusterCuboid> &cuboids,
                                  const std::vector<int> &counts, const VREllipsoid &vr_static,
                                  const VREllipsoid &vr_dynamic,
                                  const VehicleEnvelope &env = VehicleEnvelope{})
{
    if (cuboids.size() != counts.size())
        throw std::invalid_argument("vr_filter: counts not aligned with cuboids");
    std::vector<int> out = counts;
    for (size_t i = 0; i < cuboids.size(); ++i)
    {
        const VREllipsoid &vr =
            classify_cluster(cuboids[i], env) == ScattererKind::dynamic_kind ? vr_dynamic : vr_static;
        if (!vr.contains(cuboids[i].center))
            out[i] = 0;
    }
    return out;
}

// ---------- Scatterer position assignment ----------

// Place `count` recognized scatterers on member points of the cluster.
// Points are ranked by their Tx->P->Rx detour (the specular point of a
// planar reflection minimizes it), and a spacing rule spreads multiple
// picks across distinct local minima; cycles with repetition when the
// cluster has fewer members than requested. Deterministic for fixed inputs.
inline std::vector<Vec3> assign_positions(const PointCloud &cloud, const Cluster &cluster,
                                          int count, const TransceiverPose &pose,
                                          uint64_t /*seed*/ = 0, double spacing = 0.8)
{
    if (count < 0)
        throw std::invalid_argument("assign_positions: count must be >= 0");
    std::vector<Vec3> picked;
    if (count == 0 || cluster.member_indices.empty())
        return picked;

    struct Ranked
    {
        double detour;
        int index;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(cluster.member_indices.size());
    for (int idx : cluster.member_indices)
    {
        const Vec3 &p = cloud.points[static_cast<size_t>(idx)];
        ranked.push_back({norm(p - pose.tx_position) + norm(p - pose.rx_position), idx});
    }
    std::sort(ranked.begin(), ranked.end(), [](const Ranked &a, const Ranked &b)
              { return a.detour < b.detour || (a.detour == b.detour && a.index < b.index); });

    // first pass honors the spacing, second pass fills, then wrap around
    for (const auto &r : ranked)
    {
        if (static_cast<int>(picked.size()) == count)
            return picked;
        const Vec3 &p = cloud.points[static_cast<size_t>(r.index)];
        bool clear = true;
        for (const auto &q : picked)
            if (norm(p - q) < spacing)
            {
                clear = false;
                break;
            }
        if (clear)
            picked.push_back(p);
    }
    for (const auto &r : ranked)
    {
        if (static_cast<int>(picked.size()) == count)
            return picked;
        const Vec3 &p = cloud.points[static_cast<size_t>(r.index)];
        bool dup = false;
        for (const auto &q : picked)
            if (p == q)
            {
                dup = true;
                break;
            }
        if (!dup)
            picked.push_back(p);
    }
    while (static_cast<int>(picked.size()) < count)
        picked.push_back(cloud.points[static_cast<size_t>(ranked[picked.size() % ranked.size()].index)]);
    return picked;
}

} // namespace lcsim

#endif
