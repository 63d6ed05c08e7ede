/*
 * kinematics.hpp
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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "geometry.hpp"

namespace hrcguard {

/// Joint angles q1..q6 in radians.
using JointVector = std::array<double, 6>;

/// Wraps into (-pi, pi].
double normalize_angle(double angle);
JointVector normalize(const JointVector& q);

/// Standard Denavit-Hartenberg link: Rz(q) Tz(d) Tx(a) Rx(alpha).
struct DhLink {
    double a = 0.0;
    double d = 0.0;
    double alpha = 0.0;
};

/// Published UR3 link lengths shrink by this factor so that the flange
/// envelope, measured from the shoulder, matches the rated 500 mm reach.
/// The unscaled chain extends to 588.8 mm.
inline constexpr double kUr3LinkScale = 0.849;

struct RobotGeometry {
    std::array<DhLink, 6> links{};
    RigidTransform base_pose;       // base -> world
    double reach = 500.0;           // flange envelope radius
    double reach_with_tool = 662.8; // TCP envelope radius with the default gripper

    double tool_length() const { return reach_with_tool - reach; }
    /// Center of the reach envelope: the shoulder, on the base axis.
    Vec3 reach_origin() const;
    Vec2 base_floor_position() const { return floor_point(base_pose.translation); }
    void validate() const;

    static RobotGeometry ur3(const Vec3& base_position = Vec3::Zero(),
                             double link_scale = kUr3LinkScale);
};

struct ArmPoints {
    Vec3 shoulder;
    Vec3 elbow;   // elbow joint origin
    Vec3 wrist;   // wrist-1 joint origin
    Vec3 flange;
    Vec3 tcp;     // flange offset by the tool length along the flange z axis
};

ArmPoints forward_kinematics(const RobotGeometry& geom, const JointVector& q);

/// Linear joint-space motion through a list of waypoints at
/// nominal_speed * speed_fraction (rad/s, max-norm). A zero fraction holds
/// position with progress retained.
class JointPathInterpolator {
public:
    JointPathInterpolator(std::vector<JointVector> waypoints, double nominal_speed,
                          bool loop = true);

    JointVector step(double speed_fraction, double dt);

    const JointVector& current() const { return current_; }
    const JointVector& target() const { return waypoints_[target_]; }
    std::size_t target_index() const { return target_; }
    const std::vector<JointVector>& waypoints() const { return waypoints_; }
    double nominal_speed() const { return nominal_speed_; }
    /// Segment index plus the fraction covered within it.
    double progress() const;
    /// Moves the current joints without touching the target (detours).
    void set_current(const JointVector& q);

private:
    void advance_target();

    std::vector<JointVector> waypoints_;
    double nominal_speed_;
    bool loop_;
    JointVector current_{};
    std::size_t target_ = 0;
    double segment_length_ = 0.0;
    std::size_t completed_segments_ = 0;
};

/// Joint speed (rad/s) giving the requested mean TCP speed over one loop of
/// the routine.
double calibrate_joint_speed(const RobotGeometry& geom, std::span<const JointVector> waypoints,
                             double tcp_speed);

/// Table-top pick-and-place routine, every arm point within 300 mm of the
/// base axis.
std::vector<JointVector> default_routine();

JointVector from_degrees(const std::array<double, 6>& degrees);

}  // namespace hrcguard
