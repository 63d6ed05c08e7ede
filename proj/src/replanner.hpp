/*
 * replanner.hpp
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

#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "geometry.hpp"
#include "kinematics.hpp"
#include "monitor.hpp"

namespace hrcguard {

struct DetourPlan {
    enum class Status { Clear, Detour, Hold };

    Status status = Status::Clear;
    std::vector<Vec2> path;  // empty on Hold
};

std::string_view to_string(DetourPlan::Status status);

/// Via-points must stay within max_radius of origin (floor plane).
struct ReplanLimits {
    Vec2 origin = Vec2::Zero();
    double max_radius = std::numeric_limits<double>::infinity();
};

/// Floor-plane TCP detour. Segments crossing a cylinder inflated by `margin`
/// are replaced by a chain of lines tangent to the inflated circle, on the
/// shorter side (ties go counterclockwise). Endpoints inside an inflated
/// circle, or no clearing path within the limits, give Hold.
DetourPlan replan_tcp_path(std::span<const Vec2> path,
                           std::span<const CollisionCylinder> cylinders, double margin,
                           const ReplanLimits& limits = {});

/// Smallest distance from the polyline to any cylinder surface (negative
/// inside). Infinity when there are no cylinders.
double path_clearance(std::span<const Vec2> path, std::span<const CollisionCylinder> cylinders);

double path_length(std::span<const Vec2> path);

/// Moves the TCP to a floor point by adjusting the base and elbow joints,
/// compensating wrist-1 so the tool keeps its pitch. Damped Newton from the
/// seed; nullopt if the residual stays above tolerance.
std::optional<JointVector> retarget_tcp_floor(const RobotGeometry& geom, const JointVector& seed,
                                              const Vec2& target, double tolerance = 0.5);

}  // namespace hrcguard
