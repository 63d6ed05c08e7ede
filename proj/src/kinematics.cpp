/*
 * kinematics.cpp
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

#include "kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.hpp"

namespace hrcguard {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Isometry3d dh_transform(const DhLink& link, double q) {
    Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
    t.rotate(Eigen::AngleAxisd(q, Vec3::UnitZ()));
    t.translate(Vec3(0.0, 0.0, link.d));
    t.translate(Vec3(link.a, 0.0, 0.0));
    t.rotate(Eigen::AngleAxisd(link.alpha, Vec3::UnitX()));
    return t;
}

JointVector shortest_difference(const JointVector& from, const JointVector& to) {
    JointVector d{};
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = normalize_angle(to[i] - from[i]);
    return d;
}

double max_norm(const JointVector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

double normalize_angle(double angle) {
    double r = std::remainder(angle, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

JointVector normalize(const JointVector& q) {
    JointVector out{};
    for (std::size_t i = 0; i < q.size(); ++i) out[i] = normalize_angle(q[i]);
    return out;
}

JointVector from_degrees(const std::array<double, 6>& degrees) {
    JointVector q{};
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = normalize_angle(degrees[i] * kPi / 180.0);
    return q;
}

Vec3 RobotGeometry::reach_origin() const {
    return base_pose.apply(Vec3(0.0, 0.0, links[0].d));
}

void RobotGeometry::validate() const {
    require(reach > 0.0 && reach_with_tool >= reach,
            "robot geometry requires 0 < reach <= reach_with_tool");
    for (const auto& l : links) {
        require(std::isfinite(l.a) && std::isfinite(l.d) && std::isfinite(l.alpha),
                "DH parameters must be finite");
    }
}

RobotGeometry RobotGeometry::ur3(const Vec3& base_position, double link_scale) {
    require(link_scale > 0.0, "link scale must be positive");
    const double k = link_scale;
    RobotGeometry g;
    // Manufacturer DH table (mm); d1 only sets the shoulder height.
    g.links = {{
        {0.0, 151.9, kPi / 2.0},
        {-243.65 * k, 0.0, 0.0},
        {-213.25 * k, 0.0, 0.0},
        {0.0, 112.35 * k, kPi / 2.0},
        {0.0, 85.35 * k, -kPi / 2.0},
        {0.0, 81.9 * k, 0.0},
    }};
    g.base_pose.translation = base_position;
    return g;
}

ArmPoints forward_kinematics(const RobotGeometry& geom, const JointVector& q) {
    for (double angle : q) require(std::isfinite(angle), "joint angles must be finite");
    std::array<Eigen::Isometry3d, 6> frames;
    Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
    t.linear() = geom.base_pose.rotation;
    t.translation() = geom.base_pose.translation;
    for (std::size_t i = 0; i < 6; ++i) {
        t = t * dh_transform(geom.links[i], q[i]);
        frames[i] = t;
    }
    ArmPoints p;
    p.shoulder = frames[0].translation();
    p.elbow = frames[1].translation();
    p.wrist = frames[2].translation();
    p.flange = frames[5].translation();
    p.tcp = p.flange + geom.tool_length() * frames[5].linear().col(2);
    return p;
}

JointPathInterpolator::JointPathInterpolator(std::vector<JointVector> waypoints,
                                             double nominal_speed, bool loop)
    : waypoints_(std::move(waypoints)), nominal_speed_(nominal_speed), loop_(loop) {
    require(!waypoints_.empty(), "joint path needs at least one waypoint");
    require(std::isfinite(nominal_speed_) && nominal_speed_ > 0.0,
            "nominal joint speed must be positive");
    for (auto& w : waypoints_) w = normalize(w);
    current_ = waypoints_.front();
    target_ = waypoints_.size() > 1 ? 1 : 0;
    segment_length_ = max_norm(shortest_difference(current_, waypoints_[target_]));
}

void JointPathInterpolator::advance_target() {
    ++completed_segments_;
    if (target_ + 1 < waypoints_.size()) {
        ++target_;
    } else if (loop_) {
        target_ = 0;
    }
    segment_length_ = max_norm(shortest_difference(current_, waypoints_[target_]));
}

JointVector JointPathInterpolator::step(double speed_fraction, double dt) {
    require(speed_fraction >= 0.0 && speed_fraction <= 1.0, "speed fraction must be in [0,1]");
    require(dt > 0.0, "dt must be positive");
    double budget = nominal_speed_ * speed_fraction * dt;
    // Bounded so a degenerate all-equal loop cannot spin.
    for (std::size_t guard = 0; budget > 0.0 && guard <= waypoints_.size() + 1; ++guard) {
        const JointVector diff = shortest_difference(current_, waypoints_[target_]);
        const double dist = max_norm(diff);
        if (dist <= budget) {
            current_ = waypoints_[target_];
            budget -= dist;
            const bool at_end = !loop_ && target_ + 1 >= waypoints_.size();
            if (at_end) break;
            advance_target();
        } else {
            const double s = budget / dist;
            for (std::size_t i = 0; i < current_.size(); ++i) {
                current_[i] = normalize_angle(current_[i] + diff[i] * s);
            }
            budget = 0.0;
        }
    }
    return current_;
}

double JointPathInterpolator::progress() const {
    if (segment_length_ <= 0.0) return static_cast<double>(completed_segments_);
    const double remaining = max_norm(shortest_difference(current_, waypoints_[target_]));
    const double covered = std::clamp(1.0 - remaining / segment_length_, 0.0, 1.0);
    return static_cast<double>(completed_segments_) + covered;
}

void JointPathInterpolator::set_current(const JointVector& q) { current_ = normalize(q); }

double calibrate_joint_speed(const RobotGeometry& geom, std::span<const JointVector> waypoints,
                             double tcp_speed) {
    require(waypoints.size() >= 2, "calibration needs at least two waypoints");
    require(tcp_speed > 0.0, "tcp speed must be positive");
    constexpr int kSamples = 400;
    double joint_travel = 0.0;
    double tcp_travel = 0.0;
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
        const JointVector& a = waypoints[i];
        const JointVector& b = waypoints[(i + 1) % waypoints.size()];
        const JointVector diff = shortest_difference(a, b);
        joint_travel += max_norm(diff);
        Vec3 prev = forward_kinematics(geom, a).tcp;
        for (int s = 1; s <= kSamples; ++s) {
            JointVector q{};
            for (std::size_t j = 0; j < q.size(); ++j) q[j] = a[j] + diff[j] * s / kSamples;
            const Vec3 p = forward_kinematics(geom, q).tcp;
            tcp_travel += (p - prev).norm();
            prev = p;
        }
    }
    require(tcp_travel > 0.0, "routine does not move the TCP");
    return tcp_speed * joint_travel / tcp_travel;
}

std::vector<JointVector> default_routine() {
    const JointVector home = from_degrees({155.5, -94.9, 63.5, -58.6, -90.0, 0.0});
    const JointVector pick_above = from_degrees({197.0, -84.0, 69.7, -75.7, -90.0, 0.0});
    const JointVector pick = from_degrees({197.0, -79.9, 107.2, -117.4, -90.0, 0.0});
    const JointVector place_above = from_degrees({124.0, -84.0, 69.7, -75.7, -90.0, 0.0});
    const JointVector place = from_degrees({124.0, -79.9, 107.2, -117.4, -90.0, 0.0});
    return {home, pick_above, pick, pick_above, place_above, place, place_above};
}

}  // namespace hrcguard
