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

#ifndef LCSIM_GEOMETRY_HPP
#define LCSIM_GEOMETRY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

namespace lcsim
{

struct Vec3
{
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 &operator+=(const Vec3 &o) { x += o.x, y += o.y, z += o.z; return *this; }
    Vec3 &operator-=(const Vec3 &o) { x -= o.x, y -= o.y, z -= o.z; return *this; }
    bool operator==(const Vec3 &o) const { return x == o.x && y == o.y && z == o.z; }
};

inline Vec3 operator*(double s, const Vec3 &v) { return v * s; }

inline double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3 &a, const Vec3 &b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3 &v) { return std::sqrt(dot(v, v)); }
inline double norm_xy(const Vec3 &v) { return std::hypot(v.x, v.y); }

inline Vec3 normalized(const Vec3 &v)
{
    double n = norm(v);
    return n > 0.0 ? v / n : Vec3{0.0, 0.0, 0.0};
}

// Rotation about the z-axis (ground plane)
inline Vec3 rotate_z(const Vec3 &v, double angle)
{
    double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

// Mirror a point across the plane through q with unit normal n
inline Vec3 mirror_point(const Vec3 &p, const Vec3 &q, const Vec3 &n)
{
    return p - 2.0 * dot(p - q, n) * n;
}

// A planar rectangular face of a cuboid: center, outward unit normal and two
// in-plane half-axes (u, v are unit vectors, hu/hv the half extents).
struct Face
{
    Vec3 center;
    Vec3 normal;
    Vec3 u, v;
    double hu = 0.0, hv = 0.0;
    int index = 0; // 0..5, stable per cuboid

    bool contains(const Vec3 &p, double tol = 1e-9) const
    {
        Vec3 d = p - center;
        return std::abs(dot(d, u)) <= hu + tol && std::abs(dot(d, v)) <= hv + tol;
    }
};

// Oriented cuboid: axis-aligned box of size dims, rotated by yaw about z,
// centered at center. The workhorse primitive of the whole simulator.
struct Cuboid
{
    Vec3 center;
    Vec3 dims; // full lengths along the local x/y/z axes
    double yaw = 0.0;

    Vec3 to_local(const Vec3 &p) const { return rotate_z(p - center, -yaw); }
    Vec3 to_world(const Vec3 &p) const { return rotate_z(p, yaw) + center; }

    bool contains(const Vec3 &p, double inflate = 0.0) const
    {
        Vec3 l = to_local(p);
        return std::abs(l.x) <= 0.5 * dims.x + inflate &&
               std::abs(l.y) <= 0.5 * dims.y + inflate &&
               std::abs(l.z) <= 0.5 * dims.z + inflate;
    }

    // Unsigned distance from p to the cuboid surface
    double surface_distance(const Vec3 &p) const
    {
        Vec3 l = to_local(p);
        double qx = std::abs(l.x) - 0.5 * dims.x;
        double qy = std::abs(l.y) - 0.5 * dims.y;
        double qz = std::abs(l.z) - 0.5 * dims.z;
        double ox = std::max(qx, 0.0), oy = std::max(qy, 0.0), oz = std::max(qz, 0.0);
        double outside = std::sqrt(ox * ox + oy * oy + oz * oz);
        double inside = std::min(std::max({qx, qy, qz}), 0.0);
        return std::abs(outside + inside);
    }

    // Slab intersection of the ray origin + t*dir (dir need not be unit) with
    // this cuboid; returns the smallest t >= 0 at which the ray crosses the
    // boundary, or nullopt. Rays starting inside hit the exit face.
    std::optional<double> ray_hit(const Vec3 &origin, const Vec3 &dir) const
    {
        Vec3 o = to_local(origin);
        Vec3 d = rotate_z(dir, -yaw);
        double tmin = -std::numeric_limits<double>::infinity();
        double tmax = std::numeric_limits<double>::infinity();
        const double oc[3] = {o.x, o.y, o.z};
        const double dc[3] = {d.x, d.y, d.z};
        const double hc[3] = {0.5 * dims.x, 0.5 * dims.y, 0.5 * dims.z};
        for (int k = 0; k < 3; ++k)
        {
            if (std::abs(dc[k]) < 1e-300)
            {
                if (std::abs(oc[k]) > hc[k])
                    return std::nullopt;
                continue;
            }
            double inv = 1.0 / dc[k];
            double t1 = (-hc[k] - oc[k]) * inv;
            double t2 = (hc[k] - oc[k]) * inv;
            if (t1 > t2)
                std::swap(t1, t2);
            tmin = std::max(tmin, t1);
            tmax = std::min(tmax, t2);
            if (tmin > tmax)
                return std::nullopt;
        }
        if (tmax < 0.0)
            return std::nullopt;
        return tmin >= 0.0 ? tmin : tmax;
    }

    // True if the open segment a->b passes through the cuboid interior.
    // Endpoints (and glancing surface touches) do not count; eps shrinks the
    // segment parameter range so legs ending exactly on a face stay clear.
    bool segment_intersects(const Vec3 &a, const Vec3 &b, double eps = 1e-9) const
    {
        Vec3 o = to_local(a);
        Vec3 d = rotate_z(b - a, -yaw);
        double tmin = eps, tmax = 1.0 - eps;
        const double oc[3] = {o.x, o.y, o.z};
        const double dc[3] = {d.x, d.y, d.z};
        const double hc[3] = {0.5 * dims.x, 0.5 * dims.y, 0.5 * dims.z};
        for (int k = 0; k < 3; ++k)
        {
            if (std::abs(dc[k]) < 1e-300)
            {
                if (std::abs(oc[k]) > hc[k])
                    return false;
                continue;
            }
            double inv = 1.0 / dc[k];
            double t1 = (-hc[k] - oc[k]) * inv;
            double t2 = (hc[k] - oc[k]) * inv;
            if (t1 > t2)
                std::swap(t1, t2);
            tmin = std::max(tmin, t1);
            tmax = std::min(tmax, t2);
            if (tmin >= tmax)
                return false;
        }
        return tmax - tmin > 1e-12;
    }

    // The six faces in a stable order: -x, +x, -y, +y, -z, +z (local axes)
    std::array<Face, 6> faces() const
    {
        Vec3 ax[3] = {rotate_z({1, 0, 0}, yaw), rotate_z({0, 1, 0}, yaw), {0, 0, 1}};
        double h[3] = {0.5 * dims.x, 0.5 * dims.y, 0.5 * dims.z};
        std::array<Face, 6> out;
        int idx = 0;
        for (int k = 0; k < 3; ++k)
            for (double s : {-1.0, 1.0})
            {
                Face f;
                f.normal = ax[k] * s;
                f.center = center + f.normal * h[k];
                f.u = ax[(k + 1) % 3];
                f.v = ax[(k + 2) % 3];
                f.hu = h[(k + 1) % 3];
                f.hv = h[(k + 2) % 3];
                f.index = idx++;
                out[static_cast<size_t>(f.index)] = f;
            }
        return out;
    }
};

} // namespace lcsim

#endif
