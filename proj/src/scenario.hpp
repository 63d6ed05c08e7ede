/*
 * scenario.hpp
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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "camera.hpp"
#include "control.hpp"
#include "kinematics.hpp"
#include "monitor.hpp"
#include "safety_math.hpp"
#include "tracker.hpp"

namespace hrcguard {

/// Pipeline delays in seconds. Each is quantized to whole steps when used.
struct LatencyModel {
    double perception = 0.0167;
    double decision = 0.005;
    double actuation = 0.0066;
    double stop_ramp = 0.03;
    double per_operator_decision = 0.0;  // added per tracked operator beyond the first

    void validate() const;
    double reaction_sum() const { return perception + decision + actuation; }

    /// End-to-end figures of the reference hardware: 35.6 ms reaction with
    /// one operator, +17.9 ms per extra operator, 63.7 ms stop.
    static LatencyModel calibrated();
    static LatencyModel zero() { return {0.0, 0.0, 0.0, 0.0, 0.0}; }
};

struct NoiseModel {
    double bbox_jitter = 0.0;       // px, std of the box center
    double depth_noise = 0.0;       // mm, std
    double miss_probability = 0.0;
    double border_miss_band = 0.0;  // px; centers this close to the image edge are dropped

    void validate() const;
    bool enabled() const {
        return bbox_jitter > 0.0 || depth_noise > 0.0 || miss_probability > 0.0 ||
               border_miss_band > 0.0;
    }
};

struct Waypoint {
    Vec2 position = Vec2::Zero();
    double dwell = 0.0;  // seconds spent at the point after arriving
};

struct OperatorScript {
    int id = 0;
    double height = 1700.0;
    double speed = 1600.0;
    bool loop = false;
    std::vector<Waypoint> waypoints;  // the first one is the start position
};

struct ScheduledControl {
    long step = 0;  // applied at the boundary before this step
    ControlMessage msg;
};

struct ScenarioConfig {
    std::string name = "unnamed";
    std::uint64_t seed = 1;
    double dt = 1.0 / 60.0;
    long steps = 3600;

    SsmParameters ssm;
    double clearance = kDefaultClearance;
    MonitorConfig monitor;
    double replan_margin = 100.0;

    CameraModel camera = CameraModel::overhead();
    double head_size = 220.0;  // mm, edge of the synthetic head box

    RobotGeometry robot = RobotGeometry::ur3();
    std::vector<JointVector> routine = default_routine();
    double nominal_tcp_speed = 1000.0;
    std::optional<double> joint_speed;  // rad/s; calibrated from the TCP speed when unset

    TrackerConfig tracker;
    LatencyModel latency;
    NoiseModel noise;

    std::vector<OperatorScript> operators;
    std::vector<ScheduledControl> controls;

    void validate() const;
    ZoneBoundaries bounds() const { return compute_zone_boundaries(ssm, clearance); }
};

/// Parses a JSON scenario. Syntax errors carry line and column; schema errors
/// name the field path. `source` labels messages.
ScenarioConfig parse_scenario(std::string_view text, std::string_view source = "<config>");
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// The canonical JSON form; parse_scenario(dump) reproduces the config.
nlohmann::ordered_json scenario_to_json(const ScenarioConfig& config);

}  // namespace hrcguard
