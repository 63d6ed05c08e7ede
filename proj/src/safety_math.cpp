/*
 * safety_math.cpp
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

#include "safety_math.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace hrcguard {

namespace {

void require_non_negative(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0) {
        fail(ErrorCode::InvalidArgument,
             std::string(name) + " must be finite and >= 0, got " + std::to_string(value));
    }
}

}  // namespace

void SsmParameters::validate() const {
    require_non_negative(human_speed, "human_speed");
    require_non_negative(robot_speed, "robot_speed");
    require_non_negative(reaction_time, "reaction_time");
    require_non_negative(stop_time, "stop_time");
    require_non_negative(intrusion, "intrusion");
    require_non_negative(robot_uncertainty, "robot_uncertainty");
    require_non_negative(operator_uncertainty, "operator_uncertainty");
}

void ZoneBoundaries::validate() const {
    if (!std::isfinite(inner) || !std::isfinite(outer) || !(inner > 0.0) || !(outer > inner)) {
        fail(ErrorCode::InvalidArgument, "zone boundaries require 0 < inner < outer, got inner=" +
                                             std::to_string(inner) +
                                             " outer=" + std::to_string(outer));
    }
}

std::string_view to_string(SafetyZone zone) {
    switch (zone) {
        case SafetyZone::HighRisk: return "high_risk";
        case SafetyZone::LowRisk: return "low_risk";
        case SafetyZone::Safe: return "safe";
    }
    return "unknown";
}

std::string_view zone_color(SafetyZone zone) {
    switch (zone) {
        case SafetyZone::HighRisk: return "red";
        case SafetyZone::LowRisk: return "yellow";
        case SafetyZone::Safe: return "green";
    }
    return "unknown";
}

std::optional<SafetyZone> parse_zone(std::string_view text) {
    if (text == "high_risk") return SafetyZone::HighRisk;
    if (text == "low_risk") return SafetyZone::LowRisk;
    if (text == "safe") return SafetyZone::Safe;
    return std::nullopt;
}

std::string_view to_string(PerformanceLevel level) {
    switch (level) {
        case PerformanceLevel::PLa: return "PLa";
        case PerformanceLevel::PLb: return "PLb";
        case PerformanceLevel::PLc: return "PLc";
        case PerformanceLevel::PLd: return "PLd";
        case PerformanceLevel::PLe: return "PLe";
    }
    return "unknown";
}

double compute_msd(const SsmParameters& p) {
    p.validate();
    const double human_travel = p.human_speed * (p.reaction_time + p.stop_time);
    const double robot_reaction_travel = p.robot_speed * p.reaction_time;
    const double robot_stop_travel = p.robot_speed * p.stop_time / 2.0;
    return human_travel + robot_reaction_travel + robot_stop_travel + p.intrusion +
           p.robot_uncertainty + p.operator_uncertainty;
}

ZoneBoundaries compute_zone_boundaries(const SsmParameters& params, double clearance) {
    if (!std::isfinite(clearance)) {
        fail(ErrorCode::InvalidArgument, "clearance must be finite");
    }
    if (clearance < kMinimumClearance) {
        fail(ErrorCode::StandardViolation,
             "low-risk clearance " + std::to_string(clearance) +
                 " mm is below the ISO/TS 15066 minimum of 500 mm");
    }
    ZoneBoundaries bounds{compute_msd(params), 0.0};
    bounds.outer = bounds.inner + clearance;
    bounds.validate();
    return bounds;
}

SafetyZone classify_zone(double distance, const ZoneBoundaries& bounds) {
    if (!std::isfinite(distance) || distance < 0.0) {
        fail(ErrorCode::InvalidArgument,
             "distance must be finite and >= 0, got " + std::to_string(distance));
    }
    if (distance <= bounds.inner) return SafetyZone::HighRisk;
    if (distance <= bounds.outer) return SafetyZone::LowRisk;
    return SafetyZone::Safe;
}

double collision_time(double margin, double human_speed) {
    if (!std::isfinite(margin) || margin < 0.0) {
        fail(ErrorCode::InvalidArgument, "margin must be finite and >= 0");
    }
    if (!std::isfinite(human_speed) || human_speed <= 0.0) {
        fail(ErrorCode::InvalidArgument, "collision time is undefined for human speed <= 0");
    }
    return margin / human_speed;
}

PerformanceLevel performance_level(const HazardProperties& hazard) {
    // Walk the graph: severity picks the half, frequency the quarter,
    // avoidability the leaf. Each riskier branch shifts the result up one level.
    int level = hazard.severity == Severity::S2 ? 2 : 0;
    if (hazard.frequency == Frequency::F2) ++level;
    if (hazard.avoidance == Avoidance::P2) ++level;
    return static_cast<PerformanceLevel>(level);
}

}  // namespace hrcguard
