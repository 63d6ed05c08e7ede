/*
 * simulator.cpp
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

#include "simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "camera.hpp"
#include "error.hpp"

namespace hrcguard {

namespace {

using ojson = nlohmann::ordered_json;

ojson zone_json(const std::optional<SafetyZone>& z) {
    return z ? ojson(to_string(*z)) : ojson(nullptr);
}

ojson point_json(const Vec2& p) { return ojson::array({p.x(), p.y()}); }

double initial_joint_speed(const ScenarioConfig& c) {
    if (c.joint_speed) return *c.joint_speed;
    if (c.routine.size() < 2) return 1.0;
    return calibrate_joint_speed(c.robot, c.routine, c.nominal_tcp_speed);
}

/// Closest to the base, ties to the lowest id.
template <typename T, typename Dist>
const T* nearest(const std::vector<T>& items, Dist&& dist) {
    const T* best = nullptr;
    double best_d = 0.0;
    for (const auto& item : items) {
        const double d = dist(item);
        if (!best || d < best_d) {
            best = &item;
            best_d = d;
        }
    }
    return best;
}

}  // namespace

OperatorTruth OperatorTruth::from_script(const OperatorScript& script) {
    require(!script.waypoints.empty(), "operator needs at least one waypoint");
    OperatorTruth op;
    op.id = script.id;
    op.height = script.height;
    op.speed = script.speed;
    op.loop = script.loop;
    op.waypoints = script.waypoints;
    op.position = script.waypoints.front().position;
    op.dwell_left = script.waypoints.front().dwell;
    op.next = 1;
    return op;
}

void OperatorTruth::advance(double dt) {
    double t = dt;
    // Each pass either finishes a dwell, reaches a waypoint or spends t.
    for (std::size_t guard = 0; t > 0.0 && guard < 2 * waypoints.size() + 4; ++guard) {
        if (dwell_left > 0.0) {
            const double used = std::min(dwell_left, t);
            dwell_left -= used;
            t -= used;
            continue;
        }
        if (next >= waypoints.size()) {
            if (!loop || waypoints.size() < 2) return;
            next = 0;
        }
        const Vec2 target = waypoints[next].position;
        const double dist = (target - position).norm();
        const double travel = speed * t;
        if (travel >= dist) {
            position = target;
            t -= dist / speed;
            dwell_left = waypoints[next].dwell;
            ++next;
        } else {
            position += (target - position) * (travel / dist);
            t = 0.0;
        }
    }
}

PipelineSchedule schedule_for(const LatencyModel& latency, double dt, std::size_t operators) {
    const double extra =
        latency.per_operator_decision * static_cast<double>(operators > 1 ? operators - 1 : 0);
    const double report = latency.perception;
    const double decide = report + latency.decision + extra;
    const double apply = decide + latency.actuation;
    // Cumulative rounding keeps the stages ordered.
    return {std::lround(report / dt), std::lround(decide / dt), std::lround(apply / dt),
            std::lround(latency.stop_ramp / dt)};
}

Simulator::Simulator(ScenarioConfig config)
    : config_((config.validate(), std::move(config))),
      bounds_(config_.bounds()),
      base_(config_.robot.base_floor_position()),
      tracker_(config_.tracker),
      monitor_(config_.monitor, bounds_),
      collision_set_(config_.monitor.cylinder_radius),
      path_(config_.routine, initial_joint_speed(config_), true),
      rng_(config_.seed) {
    for (const auto& script : config_.operators) {
        world_.operators.push_back(OperatorTruth::from_script(script));
        next_operator_id_ = std::max(next_operator_id_, script.id + 1);
    }
    std::sort(world_.operators.begin(), world_.operators.end(),
              [](const OperatorTruth& a, const OperatorTruth& b) { return a.id < b.id; });
    world_.mode = config_.monitor.mode;
    applied_.fraction = 0.0;
    applied_.stop = true;
    world_.active_command = applied_;
    refresh_robot();
}

void Simulator::emit(std::string type, ojson data) {
    Event e{world_.step, world_.time, std::move(type), std::move(data)};
    if (step_events_) step_events_->push_back(e);
    events_.push_back(std::move(e));
}

void Simulator::enqueue_control(const ControlMessage& msg) { queued_.push_back(msg); }

std::vector<Event> Simulator::step() {
    std::vector<Event> out;
    step_events_ = &out;
    ++world_.step;
    world_.time = static_cast<double>(world_.step) * config_.dt;

    while (next_scripted_ < config_.controls.size() &&
           config_.controls[next_scripted_].step <= world_.step) {
        apply_control(config_.controls[next_scripted_++].msg);
    }
    for (const auto& msg : queued_) apply_control(msg);
    queued_.clear();

    for (auto& op : world_.operators) op.advance(config_.dt);
    update_truth_events();
    perceive();
    process_pipeline();
    advance_ramp();
    const JointVector before = path_.current();
    move_robot();
    refresh_robot();
    check_collisions(before);

    step_events_ = nullptr;
    return out;
}

void Simulator::run(long steps) {
    for (long i = 0; i < steps; ++i) step();
}

void Simulator::run_to_end() {
    while (!finished()) step();
}

void Simulator::apply_control(const ControlMessage& msg) {
    auto find = [&](int id) {
        return std::find_if(world_.operators.begin(), world_.operators.end(),
                            [&](const OperatorTruth& op) { return op.id == id; });
    };
    auto reject = [&](const std::string& reason) {
        emit("control_rejected", {{"msg", to_json(msg)}, {"reason", reason}});
    };
    switch (msg.type) {
        case ControlType::AddOperator: {
            const int id = msg.id.value_or(next_operator_id_);
            if (find(id) != world_.operators.end()) {
                return reject("operator " + std::to_string(id) + " already exists");
            }
            OperatorScript script;
            script.id = id;
            script.height = msg.height;
            script.speed = msg.speed;
            script.waypoints = {{msg.position, 0.0}};
            world_.operators.push_back(OperatorTruth::from_script(script));
            std::sort(world_.operators.begin(), world_.operators.end(),
                      [](const OperatorTruth& a, const OperatorTruth& b) { return a.id < b.id; });
            next_operator_id_ = std::max(next_operator_id_, id + 1);
            auto echo = to_json(msg);
            echo["id"] = id;
            emit("control", echo);
            return;
        }
        case ControlType::RemoveOperator: {
            const auto it = find(msg.id.value_or(-1));
            if (it == world_.operators.end()) return reject("no such operator");
            truth_zone_.erase(it->id);
            world_.operators.erase(it);
            break;
        }
        case ControlType::Drag: {
            const auto it = find(msg.id.value_or(-1));
            if (it == world_.operators.end()) return reject("no such operator");
            it->position = msg.position;
            it->waypoints = {{msg.position, 0.0}};
            it->next = 1;
            it->dwell_left = 0.0;
            break;
        }
        case ControlType::SetMode: {
            const OperationMode from = world_.mode;
            monitor_.set_mode(msg.mode);
            world_.mode = msg.mode;
            world_.detour.reset();
            last_plan_status_.reset();
            emit("mode", {{"from", to_string(from)}, {"to", to_string(msg.mode)}});
            break;
        }
        default:
            return reject("session controls are handled outside the simulator");
    }
    emit("control", to_json(msg));
}

void Simulator::update_truth_events() {
    for (auto it = truth_zone_.begin(); it != truth_zone_.end();) {
        const bool present =
            std::any_of(world_.operators.begin(), world_.operators.end(),
                        [&](const OperatorTruth& op) { return op.id == it->first; });
        it = present ? std::next(it) : truth_zone_.erase(it);
    }
    for (const auto& op : world_.operators) {
        const double d = (op.position - base_).norm();
        const SafetyZone z = classify_zone(d, bounds_);
        const auto it = truth_zone_.find(op.id);
        if (it == truth_zone_.end() || it->second != z) {
            emit("truth_zone", {{"operator", op.id},
                                {"from", it == truth_zone_.end() ? zone_json(std::nullopt)
                                                                 : zone_json(it->second)},
                                {"to", to_string(z)},
                                {"distance", d}});
            truth_zone_[op.id] = z;
        }
    }
    const OperatorTruth* gov = nearest(world_.operators, [&](const OperatorTruth& op) {
        return (op.position - base_).norm();
    });
    std::optional<std::pair<int, SafetyZone>> now;
    if (gov) now = std::pair{gov->id, truth_zone_.at(gov->id)};
    const auto zone_of = [](const auto& g) {
        return g ? std::optional<SafetyZone>(g->second) : std::nullopt;
    };
    if (zone_of(now) != zone_of(truth_governing_)) {
        emit("truth_governing", {{"from", zone_json(zone_of(truth_governing_))},
                                 {"to", zone_json(zone_of(now))},
                                 {"operator", now ? ojson(now->first) : ojson(nullptr)}});
    }
    truth_governing_ = now;
}

void Simulator::perceive() {
    const CameraModel& cam = config_.camera;
    const NoiseModel& noise = config_.noise;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<Detection> dets;
    std::vector<int> owners;
    for (const auto& op : world_.operators) {
        PixelDepth pd;
        try {
            pd = world_to_pixel(cam, Vec3(op.position.x(), op.position.y(), op.height));
        } catch (const Error&) {
            continue;
        }
        double u = pd.u;
        double v = pd.v;
        double depth = pd.depth;
        if (noise.miss_probability > 0.0 && uniform(rng_) < noise.miss_probability) continue;
        if (noise.bbox_jitter > 0.0) {
            std::normal_distribution<double> jitter(0.0, noise.bbox_jitter);
            u += jitter(rng_);
            v += jitter(rng_);
        }
        if (noise.depth_noise > 0.0) {
            std::normal_distribution<double> dn(0.0, noise.depth_noise);
            depth += dn(rng_);
        }
        if (depth <= 0.0 || !cam.in_image(u, v, noise.border_miss_band)) continue;
        const double w = cam.fx * config_.head_size / pd.depth;
        const double h = cam.fy * config_.head_size / pd.depth;
        dets.push_back({Bbox::from_center(Vec2(u, v), w, h), depth, 1.0});
        owners.push_back(op.id);
    }

    const std::vector<TrackReport> reports = tracker_.step(dets);
    std::vector<OperatorEstimate> estimates;
    std::map<int, std::pair<SafetyZone, bool>> predicted;  // operator -> (zone, direct)
    for (const auto& r : reports) {
        if (r.detection) track_operator_[r.track_id] = owners[*r.detection];
        OperatorObservation obs;
        try {
            obs = estimate_operator(cam, Detection{r.box, r.depth, 1.0});
        } catch (const Error&) {
            continue;
        }
        const OperatorEstimate est =
            make_operator_estimate(r.track_id, obs.position, obs.height, base_, bounds_);
        estimates.push_back(est);
        const auto owner = track_operator_.find(r.track_id);
        if (owner == track_operator_.end()) continue;
        const bool direct = r.detection.has_value();
        const auto prev = predicted.find(owner->second);
        if (prev == predicted.end() || (direct && !prev->second.second)) {
            predicted[owner->second] = {est.zone, direct};
        }
    }
    for (auto it = track_operator_.begin(); it != track_operator_.end();) {
        const bool alive = std::any_of(tracker_.tracks().begin(), tracker_.tracks().end(),
                                       [&](const TrackState& t) { return t.id == it->first; });
        it = alive ? std::next(it) : track_operator_.erase(it);
    }
    for (const auto& op : world_.operators) {
        ZoneSample s;
        s.step = world_.step;
        s.operator_id = op.id;
        s.truth = truth_zone_.at(op.id);
        if (const auto p = predicted.find(op.id); p != predicted.end()) s.predicted = p->second.first;
        samples_.push_back(s);
    }

    Frame frame;
    frame.captured = world_.step;
    frame.at = schedule_for(config_.latency, config_.dt, estimates.size());
    frame.at.report += world_.step;
    frame.at.decide += world_.step;
    frame.at.apply += world_.step;
    frame.command = monitor_.evaluate(estimates, world_.robot.points, world_.time);
    frame.estimates = std::move(estimates);
    pipeline_.push_back(std::move(frame));
}

void Simulator::process_pipeline() {
    const long now = world_.step;
    for (auto& f : pipeline_) {
        if (!f.reported && f.at.report <= now) {
            f.reported = true;
            if (f.captured > last_reported_) {
                last_reported_ = f.captured;
                report(f);
            }
        }
        if (!f.decided && f.at.decide <= now) {
            f.decided = true;
            if (f.captured > last_decided_) {
                last_decided_ = f.captured;
                if (!decided_ || !decided_->same_action(f.command)) {
                    emit("command", {{"fraction", f.command.fraction},
                                     {"stop", f.command.stop},
                                     {"replan", f.command.replan_required},
                                     {"zone", zone_json(f.command.governing_zone)},
                                     {"frame", f.captured}});
                }
                decided_ = f.command;
            }
        }
        if (!f.applied && f.at.apply <= now) {
            f.applied = true;
            if (f.captured > last_applied_) {
                last_applied_ = f.captured;
                ramp_steps_ = f.at.stop_ramp;
                apply_command(f.command, f.captured);
            }
        }
    }
    while (!pipeline_.empty() && pipeline_.front().reported && pipeline_.front().decided &&
           pipeline_.front().applied) {
        pipeline_.pop_front();
    }
}

void Simulator::report(const Frame& frame) {
    for (auto it = reported_zone_.begin(); it != reported_zone_.end();) {
        const bool present =
            std::any_of(frame.estimates.begin(), frame.estimates.end(),
                        [&](const OperatorEstimate& e) { return e.track_id == it->first; });
        if (present) {
            ++it;
            continue;
        }
        emit("track_lost", {{"track", it->first}});
        it = reported_zone_.erase(it);
    }
    for (const auto& est : frame.estimates) {
        const auto it = reported_zone_.find(est.track_id);
        if (it == reported_zone_.end()) emit("track_new", {{"track", est.track_id}});
        if (it == reported_zone_.end() || it->second != est.zone) {
            emit("zone", {{"track", est.track_id},
                          {"from", it == reported_zone_.end() ? zone_json(std::nullopt)
                                                              : zone_json(it->second)},
                          {"to", to_string(est.zone)},
                          {"distance", est.distance_to_base}});
        }
        reported_zone_[est.track_id] = est.zone;
    }
    std::optional<std::pair<int, SafetyZone>> now;
    if (const auto gov = governing_operator(frame.estimates)) now = std::pair{gov->track_id, gov->zone};
    const auto zone_of = [](const auto& g) {
        return g ? std::optional<SafetyZone>(g->second) : std::nullopt;
    };
    if (zone_of(now) != zone_of(reported_governing_)) {
        emit("governing", {{"from", zone_json(zone_of(reported_governing_))},
                           {"to", zone_json(zone_of(now))},
                           {"track", now ? ojson(now->first) : ojson(nullptr)},
                           {"frame", frame.captured}});
    }
    reported_governing_ = now;
    world_.estimates = frame.estimates;
    world_.cylinders = collision_set_.update(frame.estimates);
}

void Simulator::apply_command(const SpeedCommand& cmd, long frame) {
    world_.active_command = cmd;
    if (!applied_.same_action(cmd)) {
        emit("speed_applied", {{"fraction", cmd.fraction},
                               {"stop", cmd.stop},
                               {"replan", cmd.replan_required},
                               {"zone", zone_json(cmd.governing_zone)},
                               {"operator", cmd.governing_operator
                                                ? ojson(*cmd.governing_operator)
                                                : ojson(nullptr)},
                               {"frame", frame}});
    }
    applied_ = cmd;
    RobotState& r = world_.robot;
    if (cmd.stop) {
        if (r.stopped || r.ramping) return;
        ramp_from_ = r.speed_fraction;
        ramp_start_ = world_.step;
        emit("stop_begin", {{"from_fraction", ramp_from_}, {"ramp_steps", ramp_steps_}});
        if (ramp_steps_ <= 0) {
            r.speed_fraction = 0.0;
            r.stopped = true;
            emit("stopped", ojson::object());
        } else {
            r.ramping = true;
        }
        return;
    }
    if (r.stopped || r.ramping) {
        r.stopped = false;
        r.ramping = false;
        emit("stop_end", {{"fraction", cmd.fraction}, {"progress", path_.progress()}});
    }
    r.speed_fraction = cmd.fraction;
    if (!cmd.replan_required) {
        world_.detour.reset();
        last_plan_status_.reset();
    }
}

void Simulator::advance_ramp() {
    RobotState& r = world_.robot;
    if (!r.ramping || world_.step <= ramp_start_) return;
    const long i = world_.step - ramp_start_;
    if (i >= ramp_steps_) {
        r.speed_fraction = 0.0;
        r.ramping = false;
        r.stopped = true;
        emit("stopped", ojson::object());
    } else {
        r.speed_fraction =
            ramp_from_ * (1.0 - static_cast<double>(i) / static_cast<double>(ramp_steps_));
    }
}

void Simulator::move_robot() {
    RobotState& r = world_.robot;
    r.holding = false;
    const double f = r.stopped ? 0.0 : r.speed_fraction;
    if (f <= 0.0) return;
    if (world_.mode == OperationMode::ObstacleAvoidance && world_.active_command.replan_required) {
        avoidance_step(f);
    } else {
        path_.step(f, config_.dt);
    }
}

void Simulator::avoidance_step(double fraction) {
    RobotState& r = world_.robot;
    const Vec2 start = floor_point(r.points.tcp);
    const Vec2 goal = floor_point(forward_kinematics(config_.robot, path_.target()).tcp);
    std::vector<Vec2> request{start, goal};
    const ReplanLimits limits{floor_point(config_.robot.reach_origin()),
                              config_.robot.reach_with_tool};
    DetourPlan plan = replan_tcp_path(request, world_.cylinders, config_.replan_margin, limits);
    plans_.push_back({world_.step, request, plan, world_.cylinders});

    auto announce = [&](DetourPlan::Status status, const char* reason) {
        if (last_plan_status_ == status) return;
        ojson via = ojson::array();
        for (std::size_t i = 1; i + 1 < plan.path.size(); ++i) via.push_back(point_json(plan.path[i]));
        emit("replan", {{"status", to_string(status)}, {"via", via}, {"reason", reason}});
        last_plan_status_ = status;
    };

    switch (plan.status) {
        case DetourPlan::Status::Clear: {
            world_.detour = plan;
            JointPathInterpolator trial = path_;
            trial.step(fraction, config_.dt);
            const Vec2 next = floor_point(forward_kinematics(config_.robot, trial.current()).tcp);
            if (path_clearance(std::array{next}, world_.cylinders) >= config_.replan_margin) {
                announce(plan.status, "path clear");
                path_ = std::move(trial);
                return;
            }
            // the joint-space move bows off the checked segment; follow the segment itself
            break;
        }
        case DetourPlan::Status::Hold:
            announce(plan.status, "no clearing path");
            world_.detour = plan;
            r.holding = true;
            return;
        case DetourPlan::Status::Detour:
            break;
    }
    double budget = config_.nominal_tcp_speed * fraction * config_.dt;
    Vec2 p = plan.path.front();
    for (std::size_t i = 1; i < plan.path.size() && budget > 0.0; ++i) {
        const Vec2 seg = plan.path[i] - p;
        const double len = seg.norm();
        if (len >= budget) {
            p += seg * (budget / len);
            budget = 0.0;
        } else {
            budget -= len;
            p = plan.path[i];
        }
    }
    const auto q = retarget_tcp_floor(config_.robot, path_.current(), p);
    world_.detour = plan;
    if (!q || (p - start).norm() < 1e-6) {
        announce(DetourPlan::Status::Hold, q ? "no progress along path" : "via-point out of reach");
        r.holding = true;
        return;
    }
    announce(plan.status, plan.status == DetourPlan::Status::Clear ? "path clear"
                                                                   : "cylinder on path");
    path_.set_current(*q);
}

void Simulator::refresh_robot() {
    RobotState& r = world_.robot;
    r.joints = path_.current();
    r.points = forward_kinematics(config_.robot, r.joints);
    r.routine_progress = path_.progress();
}

void Simulator::check_collisions(const JointVector& before) {
    const bool moving = before != path_.current();
    const double radius = config_.monitor.cylinder_radius;
    const ArmPoints& pts = world_.robot.points;
    const std::pair<const char*, const Vec3*> probes[] = {
        {"elbow", &pts.elbow}, {"wrist", &pts.wrist}, {"tcp", &pts.tcp}};
    for (const auto& op : world_.operators) {
        const char* hit = nullptr;
        double hit_d = 0.0;
        for (const auto& [name, p] : probes) {
            const double d = (floor_point(*p) - op.position).norm();
            if (d <= radius && p->z() >= 0.0 && p->z() <= op.height) {
                hit = name;
                hit_d = d;
                break;
            }
        }
        if (!hit) {
            colliding_.erase(op.id);
            touching_.erase(op.id);
            continue;
        }
        const ojson data = {{"operator", op.id}, {"point", hit}, {"distance", hit_d}};
        if (moving) {
            if (colliding_.insert(op.id).second) {
                ++collisions_;
                emit("collision", data);
            }
        } else if (touching_.insert(op.id).second) {
            emit("contact", data);
        }
    }
}

}  // namespace hrcguard
