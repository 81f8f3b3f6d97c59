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

#ifndef LCSIM_RT_ORACLE_HPP
#define LCSIM_RT_ORACLE_HPP

#include <stdexcept>
#include <vector>

#include "geometry.hpp"
#include "scene.hpp"

namespace lcsim
{

enum class ScattererKind
{
    static_kind,
    dynamic_kind
};

inline const char *to_string(ScattererKind k)
{
    return k == ScattererKind::static_kind ? "static" : "dynamic";
}

inline ScattererKind scatterer_kind_from_string(const std::string &s)
{
    if (s == "static") return ScattererKind::static_kind;
    if (s == "dynamic") return ScattererKind::dynamic_kind;
    throw std::invalid_argument("unknown scatterer kind: " + s);
}

// Per-kind specular reflection loss in dB. The absolute values only shape
// relative PDP levels; they are not measured material constants.
struct ReflectionLossDb
{
    double building = 6.0;
    double vehicle = 3.0;
    double tree = 10.0;

    double loss_for(ObjectKind kind) const
    {
        switch (kind)
        {
        case ObjectKind::building: return building;
        case ObjectKind::car:
        case ObjectKind::bus: return vehicle;
        case ObjectKind::tree: return tree;
        default: return 0.0;
        }
    }
};

struct Scatterer
{
    Vec3 position;
    ScattererKind kind = ScattererKind::static_kind;
    int source_object_id = -1;
    int face_index = 0; // stable face id on the source object
    double reflection_loss = 0.0; // dB
};

struct GroundTruth
{
    int snapshot_index = 0;
    std::vector<Scatterer> scatterers;
    bool los_blocked = false;
    Vec3 tx, rx;
    bool gr_valid = false; // ground bounce kept separate from scatterers
    Vec3 gr_point;
};

namespace detail
{

inline bool segment_blocked(const std::vector<SceneObject> &objects, const Vec3 &a, const Vec3 &b)
{
    for (const auto &o : objects)
    {
        if (o.kind == ObjectKind::ground)
            continue;
        if (o.cuboid().segment_intersects(a, b))
            return true;
    }
    return false;
}

} // namespace detail

// True iff the open segment tx -> rx passes through any non-ground object
inline bool los_blocked(const Scene &scene, const Vec3 &tx, const Vec3 &rx)
{
    if (tx == rx)
        throw std::invalid_argument("los_blocked: tx and rx coincide");
    return detail::segment_blocked(materialize(scene), tx, rx);
}

// Single-bounce geometrical-optics ground truth via the image method: for
// every outward face of every non-ground object, mirror Tx across the face
// plane; if the image-to-Rx segment crosses the face within bounds and both
// legs are unoccluded, the crossing point is a specular scatterer. The
// ground bounce is computed the same way on the z = 0 plane and reported
// separately.
inline GroundTruth trace_ground_truth(const Scene &scene, const TransceiverPose &pose,
                                      const ReflectionLossDb &loss = ReflectionLossDb{})
{
    const Vec3 tx = pose.tx_position, rx = pose.rx_position;
    if (tx.z <= 0.0 || rx.z <= 0.0)
        throw std::invalid_argument("trace_ground_truth: tx and rx must be above ground");

    const std::vector<SceneObject> objects = materialize(scene);

    GroundTruth gt;
    gt.snapshot_index = scene.snapshot_index;
    gt.tx = tx;
    gt.rx = rx;
    gt.los_blocked = detail::segment_blocked(objects, tx, rx);

    for (const auto &obj : objects)
    {
        if (obj.kind == ObjectKind::ground)
            continue;
        for (const Face &f : obj.cuboid().faces())
        {
            // both terminals must sit on the reflective (outer) side
            if (dot(f.normal, tx - f.center) <= 0.0 || dot(f.normal, rx - f.center) <= 0.0)
                continue;
            Vec3 image = mirror_point(tx, f.center, f.normal);
            Vec3 seg = rx - image;
            double denom = dot(f.normal, seg);
            if (std::abs(denom) < 1e-300)
                continue;
            double s = dot(f.normal, f.center - image) / denom;
            if (s <= 0.0 || s >= 1.0)
                continue;
            Vec3 p = image + seg * s;
            if (!f.contains(p, 1e-12))
                continue;
            if (detail::segment_blocked(objects, tx, p) || detail::segment_blocked(objects, p, rx))
                continue;

            Scatterer sc;
            sc.position = p;
            sc.kind = is_vehicle(obj.kind) ? ScattererKind::dynamic_kind : ScattererKind::static_kind;
            sc.source_object_id = obj.id;
            sc.face_index = f.index;
            sc.reflection_loss = loss.loss_for(obj.kind);
            gt.scatterers.push_back(sc);
        }
    }

    // ground bounce on z = 0, one image-method pass against the plane
    double s = tx.z / (tx.z + rx.z);
    Vec3 g{tx.x + s * (rx.x - tx.x), tx.y + s * (rx.y - tx.y), 0.0};
    gt.gr_point = g;
    gt.gr_valid =
        !detail::segment_blocked(objects, tx, g) && !detail::segment_blocked(objects, g, rx);

    return gt;
}

} // namespace lcsim

#endif
