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

#ifndef LCSIM_CHANNEL_HPP
#define LCSIM_CHANNEL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"
#include "scene.hpp"

namespace lcsim
{

constexpr double kSpeedOfLight = 299792458.0; // m/s
constexpr double kTwoPi = 6.283185307179586;

struct ChannelParams
{
    double f_c = 28e9;        // carrier, Hz
    double bandwidth = 2e9;   // Hz
    double ricean_omega = 1.0; // LoS-to-NLoS power ratio Omega(t)
    double eta_gr = 0.2;      // NLoS share of the ground bounce
    double eta_sta = 0.5;     // NLoS share of static scatterers
    double eta_dyn = 0.3;     // NLoS share of dynamic scatterers
    double chi = 0.0;         // frequency-dependence exponent, disabled by default
    double delay_decay = 1e7; // 1/s, intra-group exponential power decay
    int l_t = 1, l_r = 1;     // single antennas at both ends

    void validate() const
    {
        if (f_c <= 0.0 || bandwidth <= 0.0)
            throw config_error("ChannelParams: carrier and bandwidth must be positive");
        if (ricean_omega <= 0.0)
            throw config_error("ChannelParams: ricean_omega must be positive");
        if (eta_gr < 0.0 || eta_sta < 0.0 || eta_dyn < 0.0 ||
            std::abs(eta_gr + eta_sta + eta_dyn - 1.0) > 1e-12)
            throw config_error("ChannelParams: eta shares must be >= 0 and sum to 1");
        if (delay_decay < 0.0)
            throw config_error("ChannelParams: delay_decay must be >= 0");
        if (l_t != 1 || l_r != 1)
            throw config_error("ChannelParams: only single-antenna terminals are supported");
    }
};

enum class PathKind
{
    los,
    ground,
    static_nlos,
    dynamic_nlos
};

inline const char *to_string(PathKind k)
{
    switch (k)
    {
    case PathKind::los: return "los";
    case PathKind::ground: return "ground";
    case PathKind::static_nlos: return "static";
    default: return "dynamic";
    }
}

struct PathGeometry
{
    double delay = 0.0; // s
    double aod_az = 0.0, aod_el = 0.0;
    double aoa_az = 0.0, aoa_el = 0.0;
};

struct PathComponent
{
    PathKind kind = PathKind::los;
    int cluster_index = -1;
    int scatterer_index = -1;
    double delay = 0.0;   // s
    double power = 0.0;   // linear, all paths sum to 1
    double doppler = 0.0; // Hz
    double phase0 = 0.0;  // rad
    double aod_az = 0.0, aod_el = 0.0, aoa_az = 0.0, aoa_el = 0.0;
    uint64_t identity = 0; // persistent across snapshots for the same interaction

    std::complex<double> amplitude(double t, double f_c) const
    {
        double phase = phase0 + kTwoPi * doppler * t - kTwoPi * f_c * delay;
        return std::sqrt(power) * std::complex<double>(std::cos(phase), std::sin(phase));
    }
};

struct Cir
{
    int snapshot_index = 0;
    double t = 0.0;
    double tau_los = 0.0; // geometric LoS delay, defined even when blocked
    std::vector<PathComponent> paths;
};

struct Tvtf
{
    double t = 0.0;
    std::vector<double> freqs;
    std::vector<std::complex<double>> values;
};

struct Pdp
{
    std::vector<double> delay_bins; // bin start delays, width 1/bandwidth
    std::vector<double> powers;
};

// ---------- Path geometry ----------

namespace detail
{

inline void fill_angles(PathGeometry &g, const Vec3 &dep_dir, const Vec3 &arr_rev_dir)
{
    Vec3 d = normalized(dep_dir);
    Vec3 a = normalized(arr_rev_dir);
    g.aod_az = std::atan2(d.y, d.x);
    g.aod_el = std::asin(std::clamp(d.z, -1.0, 1.0));
    g.aoa_az = std::atan2(a.y, a.x);
    g.aoa_el = std::asin(std::clamp(a.z, -1.0, 1.0));
}

} // namespace detail

inline PathGeometry los_geometry(const TransceiverPose &pose)
{
    Vec3 d = pose.rx_position - pose.tx_position;
    double dist = norm(d);
    if (dist <= 0.0)
        throw std::invalid_argument("los_geometry: tx and rx coincide");
    PathGeometry g;
    g.delay = dist / kSpeedOfLight;
    detail::fill_angles(g, d, -1.0 * d);
    return g;
}

// Ground bounce via the image of Rx in the z = 0 plane
inline PathGeometry ground_geometry(const TransceiverPose &pose)
{
    if (pose.tx_position.z <= 0.0 || pose.rx_position.z <= 0.0)
        throw std::invalid_argument("ground_geometry: terminals must be above the ground plane");
    Vec3 rx_image = pose.rx_position;
    rx_image.z = -rx_image.z;
    double dist = norm(rx_image - pose.tx_position);
    double s = pose.tx_position.z / (pose.tx_position.z + pose.rx_position.z);
    Vec3 g_point = pose.tx_position + (pose.rx_position - pose.tx_position) * s;
    g_point.z = 0.0;
    PathGeometry g;
    g.delay = dist / kSpeedOfLight;
    detail::fill_angles(g, g_point - pose.tx_position, g_point - pose.rx_position);
    return g;
}

inline PathGeometry bounce_geometry(const TransceiverPose &pose, const Vec3 &scatterer)
{
    Vec3 leg1 = scatterer - pose.tx_position;
    Vec3 leg2 = pose.rx_position - scatterer;
    if (norm(leg1) < 1e-12 || norm(leg2) < 1e-12)
        throw std::invalid_argument("bounce_geometry: scatterer coincides with a terminal");
    PathGeometry g;
    g.delay = (norm(leg1) + norm(leg2)) / kSpeedOfLight;
    detail::fill_angles(g, leg1, scatterer - pose.rx_position);
    return g;
}

// Per-path delays and angles for a set of scatterer positions (LoS first,
// then ground, then one entry per scatterer)
inline std::vector<PathGeometry> geometric_delays(const TransceiverPose &pose,
                                                  const std::vector<Vec3> &scatterers)
{
    std::vector<PathGeometry> out;
    out.reserve(scatterers.size() + 2);
    out.push_back(los_geometry(pose));
    out.push_back(ground_geometry(pose));
    for (const auto &s : scatterers)
        out.push_back(bounce_geometry(pose, s));
    return out;
}

// Geometry-driven Doppler: projection of the terminal velocities onto the
// departure direction and the reversed arrival direction.
inline double doppler_of(const PathGeometry &g, const TransceiverPose &pose, double f_c)
{
    Vec3 dep{std::cos(g.aod_el) * std::cos(g.aod_az), std::cos(g.aod_el) * std::sin(g.aod_az),
             std::sin(g.aod_el)};
    Vec3 arr{std::cos(g.aoa_el) * std::cos(g.aoa_az), std::cos(g.aoa_el) * std::sin(g.aoa_az),
             std::sin(g.aoa_el)};
    return f_c / kSpeedOfLight * (dot(pose.tx_velocity, dep) + dot(pose.rx_velocity, arr));
}

// ---------- Synthesis ----------

// One recognized or ground-truth scatterer feeding the channel
struct PathScatterer
{
    Vec3 position;
    double reflection_loss_db = 0.0;
    uint64_t identity = 0; // stable key, e.g. (object, face) or (cluster, pick)
};

// clusters of scatterers, outer index = cluster
using ScattererGroups = std::vector<std::vector<PathScatterer>>;

namespace detail
{

// Split the unit power budget: LoS takes Omega/(Omega+1) when present, the
// NLoS remainder splits eta_gr : eta_sta : eta_dyn across the non-empty
// groups (shares of empty groups redistribute proportionally). Within a
// group, weights decay exponentially in excess delay and with reflection
// loss.
inline void allocate_power(std::vector<PathComponent> &paths,
                           const std::vector<double> &reflection_loss_db,
                           const ChannelParams &params, bool los_present)
{
    double omega = los_present ? params.ricean_omega : 0.0;
    double los_budget = omega / (omega + 1.0);
    double nlos_budget = 1.0 - los_budget;

    const PathKind group_kinds[3] = {PathKind::ground, PathKind::static_nlos,
                                     PathKind::dynamic_nlos};
    const double group_eta[3] = {params.eta_gr, params.eta_sta, params.eta_dyn};

    bool group_active[3] = {false, false, false};
    double tau_min[3];
    for (double &t : tau_min)
        t = 1e300;
    for (const auto &p : paths)
        for (int gk = 0; gk < 3; ++gk)
            if (p.kind == group_kinds[gk])
            {
                group_active[gk] = true;
                tau_min[gk] = std::min(tau_min[gk], p.delay);
            }

    double eta_active = 0.0;
    int n_active = 0;
    for (int gk = 0; gk < 3; ++gk)
        if (group_active[gk])
        {
            eta_active += group_eta[gk];
            ++n_active;
        }

    if (n_active == 0)
    {
        if (!los_present)
            throw data_error("allocate_power: no propagation paths at all");
        los_budget = 1.0; // everything redistributes into the LoS ray
        nlos_budget = 0.0;
    }

    double budget[3] = {0.0, 0.0, 0.0};
    for (int gk = 0; gk < 3; ++gk)
        if (group_active[gk])
            budget[gk] = eta_active > 0.0 ? nlos_budget * group_eta[gk] / eta_active
                                          : nlos_budget / n_active;

    double wsum[3] = {0.0, 0.0, 0.0};
    std::vector<double> w(paths.size(), 0.0);
    for (size_t i = 0; i < paths.size(); ++i)
        for (int gk = 0; gk < 3; ++gk)
            if (paths[i].kind == group_kinds[gk])
            {
                w[i] = std::exp(-params.delay_decay * (paths[i].delay - tau_min[gk])) *
                       std::pow(10.0, -reflection_loss_db[i] / 10.0);
                wsum[gk] += w[i];
            }

    for (size_t i = 0; i < paths.size(); ++i)
    {
        if (paths[i].kind == PathKind::los)
        {
            paths[i].power = los_budget;
            continue;
        }
        for (int gk = 0; gk < 3; ++gk)
            if (paths[i].kind == group_kinds[gk])
                paths[i].power = wsum[gk] > 0.0 ? budget[gk] * w[i] / wsum[gk] : 0.0;
    }
}

} // namespace detail

// Build the full per-snapshot channel impulse response from static and
// dynamic scatterer groups. Initial phases are uniform in [0, 2*pi), keyed
// to (seed, path identity) so the same interaction keeps its phase across
// snapshots.
inline Cir synthesize_cir(const ScattererGroups &static_clusters,
                          const ScattererGroups &dynamic_clusters, const TransceiverPose &pose,
                          const ChannelParams &params, double t, uint64_t seed,
                          bool los_is_blocked, bool ground_valid = true)
{
    params.validate();

    Cir cir;
    cir.t = t;
    cir.tau_los = norm(pose.rx_position - pose.tx_position) / kSpeedOfLight;

    std::vector<PathComponent> paths;
    std::vector<double> losses;

    auto push = [&](PathKind kind, const PathGeometry &g, int ci, int si, double loss_db,
                    uint64_t identity)
    {
        PathComponent p;
        p.kind = kind;
        p.cluster_index = ci;
        p.scatterer_index = si;
        p.delay = g.delay;
        p.aod_az = g.aod_az;
        p.aod_el = g.aod_el;
        p.aoa_az = g.aoa_az;
        p.aoa_el = g.aoa_el;
        p.doppler = doppler_of(g, pose, params.f_c);
        p.identity = identity;
        p.phase0 = phase_from_key(hash_mix(seed, identity));
        paths.push_back(p);
        losses.push_back(loss_db);
    };

    if (!los_is_blocked)
        push(PathKind::los, los_geometry(pose), -1, -1, 0.0, hash_mix(0x105ULL, 1));
    if (ground_valid)
        push(PathKind::ground, ground_geometry(pose), -1, -1, 0.0, hash_mix(0x6e0ULL, 2));

    auto push_group = [&](const ScattererGroups &groups, PathKind kind, uint64_t tag)
    {
        for (size_t ci = 0; ci < groups.size(); ++ci)
            for (size_t si = 0; si < groups[ci].size(); ++si)
            {
                const PathScatterer &s = groups[ci][si];
                push(kind, bounce_geometry(pose, s.position), static_cast<int>(ci),
                     static_cast<int>(si), s.reflection_loss_db, hash_mix(tag, s.identity));
            }
    };
    push_group(static_clusters, PathKind::static_nlos, 0x57aULL);
    push_group(dynamic_clusters, PathKind::dynamic_nlos, 0xd1aULL);

    detail::allocate_power(paths, losses, params, !los_is_blocked);
    cir.paths = std::move(paths);
    return cir;
}

// Time-varying transfer function: Fourier transform of the delta-train CIR
// with the (f/f_c)^chi frequency-dependence factor.
inline Tvtf tvtf(const Cir &cir, const ChannelParams &params, const std::vector<double> &freqs)
{
    Tvtf out;
    out.t = cir.t;
    out.freqs = freqs;
    out.values.resize(freqs.size());
    for (size_t k = 0; k < freqs.size(); ++k)
    {
        double f = freqs[k];
        if (f <= 0.0)
            throw std::invalid_argument("tvtf: frequencies must be positive");
        double factor = params.chi == 0.0 ? 1.0 : std::pow(f / params.f_c, params.chi);
        std::complex<double> acc{0.0, 0.0};
        for (const auto &p : cir.paths)
        {
            double phase = -kTwoPi * (f - params.f_c) * p.delay;
            acc += p.amplitude(cir.t, params.f_c) *
                   std::complex<double>(std::cos(phase), std::sin(phase));
        }
        out.values[k] = acc * factor;
    }
    return out;
}

// Power delay profile: delta binning at the system delay resolution
// 1/bandwidth, anchored at the geometric LoS delay. Bin powers sum exactly
// to the path power sum. min_bins extends the grid (zero-padded) so
// profiles of different snapshots can share a grid.
inline Pdp pdp(const Cir &cir, const ChannelParams &params, size_t min_bins = 0)
{
    double width = 1.0 / params.bandwidth;
    double tau_max = cir.tau_los;
    for (const auto &p : cir.paths)
        tau_max = std::max(tau_max, p.delay);

    size_t n = static_cast<size_t>(std::floor((tau_max - cir.tau_los) / width)) + 1;
    n = std::max(n, std::max(min_bins, size_t{1}));

    Pdp out;
    out.delay_bins.resize(n);
    out.powers.assign(n, 0.0);
    for (size_t k = 0; k < n; ++k)
        out.delay_bins[k] = cir.tau_los + static_cast<double>(k) * width;
    for (const auto &p : cir.paths)
    {
        double off = (p.delay - cir.tau_los) / width;
        size_t bin = off <= 0.0 ? 0 : std::min(n - 1, static_cast<size_t>(off));
        out.powers[bin] += p.power;
    }
    return out;
}

// Band-limited PDP estimate on the same grid as pdp(): each path's power is
// spread with the squared Dirichlet kernel of an M-point sweep across the
// bandwidth (the expected magnitude of the inverse transform of the TVTF
// over random path phases). Used for profile comparisons, where true delta
// binning would turn sub-bin delay differences into unbounded dB gaps.
inline Pdp pdp_bandlimited(const Cir &cir, const ChannelParams &params, size_t n_bins,
                           size_t m_points = 4096)
{
    double width = 1.0 / params.bandwidth;
    Pdp out;
    out.delay_bins.resize(n_bins);
    out.powers.assign(n_bins, 0.0);
    const double md = static_cast<double>(m_points);
    for (size_t k = 0; k < n_bins; ++k)
        out.delay_bins[k] = cir.tau_los + static_cast<double>(k) * width;
    for (const auto &p : cir.paths)
        for (size_t k = 0; k < n_bins; ++k)
        {
            double x = params.bandwidth * (out.delay_bins[k] - p.delay); // in bins
            double num = std::sin(3.14159265358979323846 * x);
            double den = md * std::sin(3.14159265358979323846 * x / md);
            double kern = std::abs(x) < 1e-12 ? 1.0 : num / den;
            out.powers[k] += p.power * kern * kern;
        }
    return out;
}

} // namespace lcsim

#endif
