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

#ifndef LCSIM_LIDAR_HPP
#define LCSIM_LIDAR_HPP

#include <cmath>
#include <vector>

#include "pointcloud.hpp"
#include "rng.hpp"
#include "scene.hpp"

namespace lcsim
{

namespace detail
{

// Coarse azimuth-bucketed candidate lists so each ray only tests the few
// objects whose footprint overlaps its bearing.
class AzimuthCulling
{
  public:
    AzimuthCulling(const std::vector<SceneObject> &objects, const Vec3 &origin,
                   double max_range, int exclude_id)
    {
        bins_.resize(kBins);
        for (size_t oi = 0; oi < objects.size(); ++oi)
        {
            const SceneObject &o = objects[oi];
            if (o.kind == ObjectKind::ground || o.id == exclude_id)
                continue;
            double dx = o.center.x - origin.x, dy = o.center.y - origin.y;
            double dist = std::hypot(dx, dy);
            double radius = 0.5 * std::hypot(o.dims.x, o.dims.y);
            if (dist - radius > max_range)
                continue;
            if (dist <= radius + 1e-9)
            {
                for (auto &bin : bins_)
                    bin.push_back(static_cast<int>(oi));
                continue;
            }
            double az = std::atan2(dy, dx);
            double halfwidth = std::asin(std::min(1.0, radius / dist));
            int lo = bin_of(az - halfwidth) - 1;
            int hi = bin_of(az + halfwidth) + 1;
            for (int b = lo; b <= hi; ++b)
                bins_[static_cast<size_t>((b % kBins + kBins) % kBins)].push_back(static_cast<int>(oi));
        }
    }

    const std::vector<int> &candidates(double azimuth) const
    {
        return bins_[static_cast<size_t>(bin_of(azimuth))];
    }

  private:
    static constexpr int kBins = 512;

    static int bin_of(double az)
    {
        double t = az * (kBins / 6.283185307179586);
        int b = static_cast<int>(std::floor(t));
        return (b % kBins + kBins) % kBins;
    }

    std::vector<std::vector<int>> bins_;
};

} // namespace detail

// Simulate one revolution of a spinning multi-channel LiDAR at the given
// origin. Rays sweep 360 degrees of azimuth; elevations span
// [fov_down, fov_up] uniformly across the channels. Each ray reports the
// nearest object or ground intersection within max_range. With
// range_noise_sigma = 0 (the default) every returned point lies exactly on a
// surface. exclude_object_id removes the carrier vehicle from the scan.
inline PointCloud simulate_lidar(const Scene &scene, const Vec3 &origin, const LidarConfig &config,
                                 uint64_t seed, int exclude_object_id = -1)
{
    config.validate();

    const std::vector<SceneObject> objects = materialize(scene);
    detail::AzimuthCulling culling(objects, origin, config.max_range, exclude_object_id);

    const SceneObject *ground = nullptr;
    for (const auto &o : objects)
        if (o.kind == ObjectKind::ground)
            ground = &o;

    const int n_az = config.rays_per_channel();
    const int n_ch = config.channels;
    const double deg = 3.14159265358979323846 / 180.0;

    std::vector<double> sin_el(static_cast<size_t>(n_ch)), cos_el(static_cast<size_t>(n_ch));
    for (int c = 0; c < n_ch; ++c)
    {
        double el = n_ch == 1 ? 0.5 * (config.fov_down + config.fov_up)
                              : config.fov_down + (config.fov_up - config.fov_down) * c / (n_ch - 1.0);
        sin_el[static_cast<size_t>(c)] = std::sin(el * deg);
        cos_el[static_cast<size_t>(c)] = std::cos(el * deg);
    }

    Rng noise_rng(hash_mix(seed, 0x11da5ULL));
    const bool noisy = config.range_noise_sigma > 0.0;

    PointCloud out;
    out.points.reserve(static_cast<size_t>(n_az) * static_cast<size_t>(n_ch) / 2);

    for (int a = 0; a < n_az; ++a)
    {
        double az = 6.283185307179586 * a / n_az;
        double caz = std::cos(az), saz = std::sin(az);
        const std::vector<int> &cand = culling.candidates(az);

        for (int c = 0; c < n_ch; ++c)
        {
            Vec3 dir{cos_el[static_cast<size_t>(c)] * caz, cos_el[static_cast<size_t>(c)] * saz,
                     sin_el[static_cast<size_t>(c)]};

            double best = config.max_range;
            bool hit = false;
            for (int oi : cand)
            {
                auto t = objects[static_cast<size_t>(oi)].cuboid().ray_hit(origin, dir);
                if (t && *t > 1e-9 && *t < best)
                {
                    best = *t;
                    hit = true;
                }
            }
            if (ground)
            {
                auto t = ground->cuboid().ray_hit(origin, dir);
                if (t && *t > 1e-9 && *t < best)
                {
                    best = *t;
                    hit = true;
                }
            }
            if (!hit)
                continue;
            if (noisy)
                best += config.range_noise_sigma * noise_rng.gaussian();
            out.points.push_back(origin + dir * best);
        }
    }
    return out;
}

} // namespace lcsim

#endif
