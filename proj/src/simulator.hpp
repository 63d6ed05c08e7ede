/*
 * simulator.hpp
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

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "events.hpp"
#include "monitor.hpp"
#include "replanner.hpp"
#include "scenario.hpp"
#include "tracker.hpp"

namespace hrcguard {

struct OperatorTruth {
    int id = 0;
    Vec2 position = Vec2::Zero();
    double height = 1700.0;
    double speed = 1600.0;
    std::vector<Waypoint> waypoints;
    std::size_t next = 0;  // index of the waypoint being approached
    double dwell_left = 0.0;
    bool loop = false;

    static OperatorTruth from_script(const OperatorScript& script);
    void advance(double dt);
};

struct RobotState {
    JointVector joints{};
    ArmPoints points;
    double speed_fraction = 0.0;  // effective, including the stop ramp
    bool stopped = true;          // powered hold; the cell starts in a protective stop
    bool ramping = false;
    bool holding = false;         // avoidance found no clearing path this step
    double routine_progress = 0.0;
};

struct WorldState {
    long step = 0;
    double time = 0.0;
    std::vector<OperatorTruth> operators;  // sorted by id
    RobotState robot;
    std::vector<OperatorEstimate> estimates;  // as last reported
    std::vector<CollisionCylinder> cylinders;
    SpeedCommand active_command;
    OperationMode mode = OperationMode::StaticSSM;
    std::optional<DetourPlan> detour;
};

/// Ground truth against the zone the pipeline assigned in the same frame.
struct ZoneSample {
    long step = 0;
    int operator_id = 0;
    SafetyZone truth = SafetyZone::Safe;
    std::optional<SafetyZone> predicted;  // none when the operator was not reported
};

/// Latencies in whole steps for a frame captured with `operators` tracked.
struct PipelineSchedule {
    long report = 0;
    long decide = 0;
    long apply = 0;
    long stop_ramp = 0;
};

PipelineSchedule schedule_for(const LatencyModel& latency, double dt, std::size_t operators);

/// Fixed-step world. Single owner; controls are queued and applied at the
/// next step boundary.
class Simulator {
public:
    explicit Simulator(ScenarioConfig config);

    /// Advances one step and returns the events it produced.
    std::vector<Event> step();
    void run(long steps);
    /// Runs to config().steps.
    void run_to_end();
    bool finished() const { return world_.step >= config_.steps; }

    void enqueue_control(const ControlMessage& msg);

    const WorldState& world() const { return world_; }
    const ScenarioConfig& config() const { return config_; }
    const ZoneBoundaries& bounds() const { return bounds_; }
    const std::vector<Event>& events() const { return events_; }
    std::string event_log() const { return format_event_log(events_); }
    const std::vector<ZoneSample>& zone_samples() const { return samples_; }
    /// Every plan the avoidance executor computed, paired with the
    /// cylinders it was computed against.
    struct PlanRecord {
        long step;
        std::vector<Vec2> request;
        DetourPlan plan;
        std::vector<CollisionCylinder> cylinders;
    };
    const std::vector<PlanRecord>& plans() const { return plans_; }
    long collisions() const { return collisions_; }
    double joint_speed() const { return path_.nominal_speed(); }

private:
    struct Frame {
        long captured = 0;
        PipelineSchedule at;
        std::vector<OperatorEstimate> estimates;
        SpeedCommand command;
        bool reported = false;
        bool decided = false;
        bool applied = false;
    };

    void emit(std::string type, nlohmann::ordered_json data);
    void apply_control(const ControlMessage& msg);
    void update_truth_events();
    void perceive();
    void process_pipeline();
    void report(const Frame& frame);
    void apply_command(const SpeedCommand& cmd, long frame);
    void advance_ramp();
    void move_robot();
    void avoidance_step(double fraction);
    void check_collisions(const JointVector& before);
    void refresh_robot();

    ScenarioConfig config_;
    ZoneBoundaries bounds_;
    Vec2 base_;
    Tracker tracker_;
    SafetyMonitor monitor_;
    CollisionSet collision_set_;
    JointPathInterpolator path_;
    std::mt19937_64 rng_;

    WorldState world_;
    std::vector<Event> events_;
    std::vector<Event>* step_events_ = nullptr;
    std::vector<ControlMessage> queued_;
    std::size_t next_scripted_ = 0;
    int next_operator_id_ = 1;

    std::deque<Frame> pipeline_;
    long last_reported_ = -1;
    long last_decided_ = -1;
    long last_applied_ = -1;
    std::optional<SpeedCommand> decided_;
    SpeedCommand applied_;
    long ramp_start_ = 0;
    double ramp_from_ = 0.0;
    long ramp_steps_ = 0;

    std::map<int, int> track_operator_;
    std::map<int, SafetyZone> truth_zone_;
    std::optional<std::pair<int, SafetyZone>> truth_governing_;
    std::map<int, SafetyZone> reported_zone_;
    std::optional<std::pair<int, SafetyZone>> reported_governing_;
    std::optional<DetourPlan::Status> last_plan_status_;
    std::set<int> colliding_;
    std::set<int> touching_;
    long collisions_ = 0;
    std::vector<ZoneSample> samples_;
    std::vector<PlanRecord> plans_;
};

}  // namespace hrcguard
