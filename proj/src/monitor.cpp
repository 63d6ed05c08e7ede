/*
 * monitor.cpp
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

#include "monitor.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace hrcguard {

namespace {

SpeedCommand tier_command(const std::optional<OperatorEstimate>& governing,
                          const ZoneBoundaries& bounds, const ModeSpeeds& speeds) {
    SpeedCommand cmd;
    cmd.fraction = speeds.safe;
    if (!governing) return cmd;
    cmd.governing_operator = governing->track_id;
    cmd.governing_zone = classify_zone(governing->distance_to_base, bounds);
    if (*cmd.governing_zone == SafetyZone::LowRisk) cmd.fraction = speeds.low_risk;
    return cmd;
}

SpeedCommand stop_command(SpeedCommand cmd) {
    cmd.fraction = 0.0;
    cmd.stop = true;
    cmd.replan_required = false;
    return cmd;
}

bool more_restrictive(const SpeedCommand& a, const SpeedCommand& b) {
    if (a.stop != b.stop) return a.stop;
    return a.fraction < b.fraction;
}

}  // namespace

std::string_view to_string(OperationMode mode) {
    switch (mode) {
        case OperationMode::StaticSSM: return "static_ssm";
        case OperationMode::DynamicZones: return "dynamic_zones";
        case OperationMode::ObstacleAvoidance: return "obstacle_avoidance";
    }
    return "unknown";
}

std::optional<OperationMode> parse_mode(std::string_view text) {
    if (text == "static_ssm") return OperationMode::StaticSSM;
    if (text == "dynamic_zones") return OperationMode::DynamicZones;
    if (text == "obstacle_avoidance") return OperationMode::ObstacleAvoidance;
    return std::nullopt;
}

OperatorEstimate make_operator_estimate(int track_id, const Vec2& position, double height,
                                        const Vec2& base, const ZoneBoundaries& bounds) {
    OperatorEstimate e;
    e.track_id = track_id;
    e.position = position;
    e.height = height;
    e.distance_to_base = (position - base).norm();
    e.zone = classify_zone(e.distance_to_base, bounds);
    return e;
}

void ModeSpeeds::validate() const {
    for (double f : {safe, low_risk, dynamic_high_risk, avoidance_high_risk}) {
        require(f >= 0.0 && f <= 1.0, "mode speed fractions must be in [0,1]");
    }
    require(joint_msd >= 0.0, "joint_msd must be >= 0");
}

std::optional<OperatorEstimate> governing_operator(std::span<const OperatorEstimate> operators) {
    if (operators.empty()) return std::nullopt;
    const auto it = std::min_element(
        operators.begin(), operators.end(), [](const OperatorEstimate& a, const OperatorEstimate& b) {
            if (a.distance_to_base != b.distance_to_base) {
                return a.distance_to_base < b.distance_to_base;
            }
            return a.track_id < b.track_id;
        });
    return *it;
}

SpeedCommand static_ssm_command(std::span<const OperatorEstimate> operators,
                                const ZoneBoundaries& bounds, const ModeSpeeds& speeds) {
    SpeedCommand cmd = tier_command(governing_operator(operators), bounds, speeds);
    if (cmd.governing_zone == SafetyZone::HighRisk) return stop_command(cmd);
    return cmd;
}

SpeedCommand dynamic_zones_command(std::span<const OperatorEstimate> operators,
                                   const ZoneBoundaries& bounds, const Vec2& elbow,
                                   const Vec2& wrist, double joint_msd, const ModeSpeeds& speeds) {
    SpeedCommand cmd = tier_command(governing_operator(operators), bounds, speeds);
    if (cmd.governing_zone != SafetyZone::HighRisk) return cmd;
    cmd.fraction = speeds.dynamic_high_risk;
    for (const auto& op : operators) {
        if (classify_zone(op.distance_to_base, bounds) != SafetyZone::HighRisk) continue;
        const double nearest = std::min((op.position - elbow).norm(), (op.position - wrist).norm());
        if (nearest <= joint_msd) return stop_command(cmd);
    }
    return cmd;
}

SpeedCommand obstacle_avoidance_command(std::span<const OperatorEstimate> operators,
                                        const ZoneBoundaries& bounds, const ModeSpeeds& speeds) {
    SpeedCommand cmd = tier_command(governing_operator(operators), bounds, speeds);
    if (cmd.governing_zone == SafetyZone::HighRisk) {
        cmd.fraction = speeds.avoidance_high_risk;
        cmd.replan_required = true;
    }
    return cmd;
}

void MonitorConfig::validate() const {
    speeds.validate();
    require(cylinder_radius > 0.0, "cylinder radius must be positive");
    require(dwell_time >= 0.0, "dwell time must be >= 0");
}

SafetyMonitor::SafetyMonitor(MonitorConfig config, ZoneBoundaries bounds)
    : config_(std::move(config)), bounds_(bounds) {
    config_.validate();
    bounds_.validate();
}

SpeedCommand SafetyMonitor::raw_command(std::span<const OperatorEstimate> operators,
                                        const ArmPoints& arm) const {
    switch (config_.mode) {
        case OperationMode::StaticSSM:
            return static_ssm_command(operators, bounds_, config_.speeds);
        case OperationMode::DynamicZones:
            return dynamic_zones_command(operators, bounds_, floor_point(arm.elbow),
                                         floor_point(arm.wrist), config_.speeds.joint_msd,
                                         config_.speeds);
        case OperationMode::ObstacleAvoidance:
            return obstacle_avoidance_command(operators, bounds_, config_.speeds);
    }
    return {};
}

SpeedCommand SafetyMonitor::evaluate(std::span<const OperatorEstimate> operators,
                                     const ArmPoints& arm, double now) {
    const SpeedCommand raw = raw_command(operators, arm);
    if (config_.dwell_time <= 0.0 || !last_ || !more_restrictive(*last_, raw)) {
        pending_.reset();
        last_ = raw;
        return raw;
    }
    // Relaxation: hold the previous action until the new one has persisted.
    if (!pending_ || !pending_->same_action(raw)) {
        pending_ = raw;
        pending_since_ = now;
    }
    if (now - pending_since_ >= config_.dwell_time) {
        pending_.reset();
        last_ = raw;
        return raw;
    }
    SpeedCommand held = *last_;
    held.governing_operator = raw.governing_operator;
    held.governing_zone = raw.governing_zone;
    return held;
}

CollisionSet::CollisionSet(double radius) : radius_(radius) {
    require(radius_ > 0.0, "cylinder radius must be positive");
}

const std::vector<CollisionCylinder>& CollisionSet::update(
    std::span<const OperatorEstimate> operators) {
    cylinders_.clear();
    for (const auto& op : operators) {
        cylinders_.push_back({op.track_id, op.position, radius_, op.height, op.zone});
    }
    std::sort(cylinders_.begin(), cylinders_.end(),
              [](const CollisionCylinder& a, const CollisionCylinder& b) {
                  return a.track_id < b.track_id;
              });
    return cylinders_;
}

}  // namespace hrcguard
