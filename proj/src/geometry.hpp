/*
 * geometry.hpp
 *
 * This source file is part of the hrcguard open source project
 *
 * Copyright 2026 The hrcguard Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace hrcguard {

// World frame: z up, floor at z = 0, all lengths in millimeters.
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline Vec2 floor_point(const Vec3& p) { return p.head<2>(); }

inline double horizontal_distance(const Vec3& a, const Vec3& b) {
    return (a.head<2>() - b.head<2>()).norm();
}

struct RigidTransform {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
    Vec3 apply_inverse(const Vec3& p) const { return rotation.transpose() * (p - translation); }

    RigidTransform compose(const RigidTransform& inner) const {
        return {rotation * inner.rotation, rotation * inner.translation + translation};
    }
};

// Axis-aligned image box in pixels.
struct Bbox {
    double u_min = 0.0;
    double v_min = 0.0;
    double u_max = 0.0;
    double v_max = 0.0;

    double width() const { return u_max - u_min; }
    double height() const { return v_max - v_min; }
    double area() const { return width() > 0.0 && height() > 0.0 ? width() * height() : 0.0; }
    Vec2 center() const { return {0.5 * (u_min + u_max), 0.5 * (v_min + v_max)}; }

    static Bbox from_center(const Vec2& c, double w, double h) {
        return {c.x() - 0.5 * w, c.y() - 0.5 * h, c.x() + 0.5 * w, c.y() + 0.5 * h};
    }

    bool operator==(const Bbox&) const = default;
};

}  // namespace hrcguard
