/*
 * monitor.hpp
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

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "geometry.hpp"
#include "kinematics.hpp"
#include "safety_math.hpp"

namespace hrcguard {

enum class OperationMode { StaticSSM, DynamicZones, ObstacleAvoidance };

std::string_view to_string(OperationMode mode);
std::optional<OperationMode> parse_mode(std::string_view text);

struct OperatorEstimate {
    int track_id = 0;
    Vec2 position = Vec2::Zero();  // floor plane
    double height = 0.0;
    SafetyZone zone = SafetyZone::Safe;
    double distance_to_base = 0.0;  // horizontal
};

OperatorEstimate make_operator_estimate(int track_id, const Vec2& position, double height,
                                        const Vec2& base, const ZoneBoundaries& bounds);

struct SpeedCommand {
    double fraction = 1.0;
    bool stop = false;
    bool replan_required = false;
    std::optional<int> governing_operator;
    std::optional<SafetyZone> governing_zone;

    bool operator==(const SpeedCommand&) const = default;
    /// Same motion request, ignoring which operator caused it.
    bool same_action(const SpeedCommand& other) const {
        return fraction == other.fraction && stop == other.stop &&
               replan_required == other.replan_required;
    }
};

/// Per-zone speed tables of the three modes.
struct ModeSpeeds {
    double safe = 1.0;
    double low_risk = 0.5;
    double dynamic_high_risk = 0.25;
    double avoidance_high_risk = 0.1;
    double joint_msd = 200.0;  // stop radius around elbow and wrist, mm

    void validate() const;
};

/// Closest operator to the base; ties go to the lowest track id.
std::optional<OperatorEstimate> governing_operator(std::span<const OperatorEstimate> operators);

SpeedCommand static_ssm_command(std::span<const OperatorEstimate> operators,
                                const ZoneBoundaries& bounds, const ModeSpeeds& speeds = {});

/// Base zones pick the tier; in the high-risk tier any operator within
/// joint_msd (horizontal) of the elbow or wrist forces a stop.
SpeedCommand dynamic_zones_command(std::span<const OperatorEstimate> operators,
                                   const ZoneBoundaries& bounds, const Vec2& elbow,
                                   const Vec2& wrist, double joint_msd,
                                   const ModeSpeeds& speeds = {});

SpeedCommand obstacle_avoidance_command(std::span<const OperatorEstimate> operators,
                                        const ZoneBoundaries& bounds,
                                        const ModeSpeeds& speeds = {});

struct MonitorConfig {
    OperationMode mode = OperationMode::StaticSSM;
    ModeSpeeds speeds;
    double cylinder_radius = 300.0;
    double dwell_time = 0.0;  // seconds a relaxation must persist; 0 disables

    void validate() const;
};

/// Mode dispatch plus the optional dwell filter. Restrictions pass through
/// at once; relaxations wait dwell_time.
class SafetyMonitor {
public:
    SafetyMonitor(MonitorConfig config, ZoneBoundaries bounds);

    SpeedCommand evaluate(std::span<const OperatorEstimate> operators, const ArmPoints& arm,
                          double now);
    /// Stateless what-if query for the current mode.
    SpeedCommand raw_command(std::span<const OperatorEstimate> operators,
                             const ArmPoints& arm) const;

    OperationMode mode() const { return config_.mode; }
    void set_mode(OperationMode mode) { config_.mode = mode; }
    const MonitorConfig& config() const { return config_; }
    const ZoneBoundaries& bounds() const { return bounds_; }

private:
    MonitorConfig config_;
    ZoneBoundaries bounds_;
    std::optional<SpeedCommand> last_;
    std::optional<SpeedCommand> pending_;
    double pending_since_ = 0.0;
};

struct CollisionCylinder {
    int track_id = 0;
    Vec2 center = Vec2::Zero();
    double radius = 300.0;
    double height = 0.0;
    SafetyZone zone = SafetyZone::Safe;
};

/// Operators as collision objects, one per reported track.
class CollisionSet {
public:
    explicit CollisionSet(double radius = 300.0);

    const std::vector<CollisionCylinder>& update(std::span<const OperatorEstimate> operators);
    const std::vector<CollisionCylinder>& cylinders() const { return cylinders_; }

private:
    double radius_;
    std::vector<CollisionCylinder> cylinders_;
};

}  // namespace hrcguard
