/*
 * scenario.cpp
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

#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "error.hpp"

namespace hrcguard {

namespace {

using nlohmann::json;

/// Cursor into the document that knows its own field path.
class Field {
public:
    Field(const json& value, std::string path, const std::string& source)
        : value_(value), path_(std::move(path)), source_(source) {}

    [[noreturn]] void error(const std::string& what) const {
        fail(ErrorCode::Parse, source_ + ": field '" + path_ + "': " + what);
    }

    const json& value() const { return value_; }
    const std::string& path() const { return path_; }

    bool has(const char* key) const { return value_.contains(key); }

    Field at(const char* key) const {
        return {value_.at(key), path_.empty() ? key : path_ + "." + key, source_};
    }
    Field at(std::size_t i) const {
        return {value_.at(i), path_ + "[" + std::to_string(i) + "]", source_};
    }

    void expect_object(std::initializer_list<const char*> allowed) const {
        if (!value_.is_object()) error("expected an object");
        for (const auto& item : value_.items()) {
            const bool known = std::any_of(allowed.begin(), allowed.end(),
                                           [&](const char* k) { return item.key() == k; });
            if (!known) at(item.key().c_str()).error("unknown field");
        }
    }

    std::size_t array_size() const {
        if (!value_.is_array()) error("expected an array");
        return value_.size();
    }

    double number() const {
        if (!value_.is_number()) error("expected a number");
        const double x = value_.get<double>();
        if (!std::isfinite(x)) error("must be finite");
        return x;
    }

    long long integer() const {
        if (!value_.is_number_integer()) error("expected an integer");
        return value_.get<long long>();
    }

    bool boolean() const {
        if (!value_.is_boolean()) error("expected true or false");
        return value_.get<bool>();
    }

    std::string string() const {
        if (!value_.is_string()) error("expected a string");
        return value_.get<std::string>();
    }

    template <int N>
    Eigen::Matrix<double, N, 1> vec() const {
        if (!value_.is_array() || value_.size() != N) {
            error("expected an array of " + std::to_string(N) + " numbers");
        }
        Eigen::Matrix<double, N, 1> v;
        for (int i = 0; i < N; ++i) v[i] = at(static_cast<std::size_t>(i)).number();
        return v;
    }

    void read(const char* key, double& out) const {
        if (has(key)) out = at(key).number();
    }
    void read(const char* key, int& out) const {
        if (has(key)) out = static_cast<int>(at(key).integer());
    }
    void read(const char* key, bool& out) const {
        if (has(key)) out = at(key).boolean();
    }

private:
    const json& value_;
    std::string path_;
    const std::string& source_;
};

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

template <typename Fn>
void guarded(const Field& f, Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Parse) throw;
        f.error(e.what());
    }
}

constexpr double kDeg = std::numbers::pi / 180.0;

void parse_ssm(const Field& f, ScenarioConfig& c) {
    f.expect_object({"human_speed", "robot_speed", "reaction_time", "stop_time", "intrusion",
                     "robot_uncertainty", "operator_uncertainty", "clearance"});
    f.read("human_speed", c.ssm.human_speed);
    f.read("robot_speed", c.ssm.robot_speed);
    f.read("reaction_time", c.ssm.reaction_time);
    f.read("stop_time", c.ssm.stop_time);
    f.read("intrusion", c.ssm.intrusion);
    f.read("robot_uncertainty", c.ssm.robot_uncertainty);
    f.read("operator_uncertainty", c.ssm.operator_uncertainty);
    f.read("clearance", c.clearance);
    guarded(f, [&] { c.ssm.validate(); });
    guarded(f, [&] { compute_zone_boundaries(c.ssm, c.clearance); });
}

void parse_monitor(const Field& f, ScenarioConfig& c) {
    f.expect_object({"safe_fraction", "low_risk_fraction", "dynamic_high_risk_fraction",
                     "avoidance_high_risk_fraction", "joint_msd", "cylinder_radius", "dwell_time",
                     "replan_margin"});
    auto& s = c.monitor.speeds;
    f.read("safe_fraction", s.safe);
    f.read("low_risk_fraction", s.low_risk);
    f.read("dynamic_high_risk_fraction", s.dynamic_high_risk);
    f.read("avoidance_high_risk_fraction", s.avoidance_high_risk);
    f.read("joint_msd", s.joint_msd);
    f.read("cylinder_radius", c.monitor.cylinder_radius);
    f.read("dwell_time", c.monitor.dwell_time);
    f.read("replan_margin", c.replan_margin);
    guarded(f, [&] { c.monitor.validate(); });
    if (c.replan_margin < 0.0) f.at("replan_margin").error("must be >= 0");
}

void parse_camera(const Field& f, ScenarioConfig& c) {
    f.expect_object({"position", "image_size", "footprint", "head_size"});
    Vec3 position(0.0, 0.0, 3450.0);
    Eigen::Vector2d size(640.0, 480.0);
    Eigen::Vector2d footprint(4200.0, 3100.0);
    if (f.has("position")) position = f.at("position").vec<3>();
    if (f.has("image_size")) size = f.at("image_size").vec<2>();
    if (f.has("footprint")) footprint = f.at("footprint").vec<2>();
    f.read("head_size", c.head_size);
    if (size.x() < 1 || size.y() < 1 || size != size.array().round().matrix()) {
        f.at("image_size").error("expected positive integer pixel counts");
    }
    guarded(f, [&] {
        c.camera = CameraModel::overhead(position, static_cast<int>(size.x()),
                                         static_cast<int>(size.y()), footprint.x(), footprint.y());
    });
    if (c.head_size <= 0.0) f.at("head_size").error("must be positive");
}

void parse_robot(const Field& f, ScenarioConfig& c) {
    f.expect_object({"base", "link_scale", "routine_deg", "nominal_tcp_speed", "joint_speed"});
    Vec3 base = Vec3::Zero();
    double scale = kUr3LinkScale;
    if (f.has("base")) base = f.at("base").vec<3>();
    f.read("link_scale", scale);
    guarded(f, [&] { c.robot = RobotGeometry::ur3(base, scale); });
    if (f.has("routine_deg")) {
        const Field r = f.at("routine_deg");
        const std::size_t n = r.array_size();
        if (n == 0) r.error("needs at least one waypoint");
        c.routine.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Matrix<double, 6, 1> d = r.at(i).vec<6>();
            JointVector q{};
            for (int j = 0; j < 6; ++j) q[static_cast<std::size_t>(j)] = d[j] * kDeg;
            c.routine.push_back(normalize(q));
        }
    }
    f.read("nominal_tcp_speed", c.nominal_tcp_speed);
    if (c.nominal_tcp_speed <= 0.0) f.at("nominal_tcp_speed").error("must be positive");
    if (f.has("joint_speed")) {
        c.joint_speed = f.at("joint_speed").number();
        if (*c.joint_speed <= 0.0) f.at("joint_speed").error("must be positive");
    }
}

void parse_tracker(const Field& f, ScenarioConfig& c) {
    f.expect_object({"max_misses", "min_hits", "iou_threshold"});
    f.read("max_misses", c.tracker.max_misses);
    f.read("min_hits", c.tracker.min_hits);
    f.read("iou_threshold", c.tracker.iou_threshold);
    guarded(f, [&] { c.tracker.validate(); });
}

void parse_latency(const Field& f, ScenarioConfig& c) {
    f.expect_object({"profile", "perception", "decision", "actuation", "stop_ramp",
                     "per_operator_decision"});
    if (f.has("profile")) {
        const std::string p = f.at("profile").string();
        if (p == "default") {
            c.latency = LatencyModel{};
        } else if (p == "calibrated") {
            c.latency = LatencyModel::calibrated();
        } else if (p == "zero") {
            c.latency = LatencyModel::zero();
        } else {
            f.at("profile").error("unknown profile '" + p + "' (default, calibrated, zero)");
        }
    }
    f.read("perception", c.latency.perception);
    f.read("decision", c.latency.decision);
    f.read("actuation", c.latency.actuation);
    f.read("stop_ramp", c.latency.stop_ramp);
    f.read("per_operator_decision", c.latency.per_operator_decision);
    guarded(f, [&] { c.latency.validate(); });
}

void parse_noise(const Field& f, ScenarioConfig& c) {
    f.expect_object({"bbox_jitter", "depth_noise", "miss_probability", "border_miss_band"});
    f.read("bbox_jitter", c.noise.bbox_jitter);
    f.read("depth_noise", c.noise.depth_noise);
    f.read("miss_probability", c.noise.miss_probability);
    f.read("border_miss_band", c.noise.border_miss_band);
    guarded(f, [&] { c.noise.validate(); });
}

OperatorScript parse_operator(const Field& f, int default_id) {
    f.expect_object({"id", "height", "speed", "loop", "waypoints"});
    OperatorScript op;
    op.id = default_id;
    f.read("id", op.id);
    f.read("height", op.height);
    f.read("speed", op.speed);
    f.read("loop", op.loop);
    if (op.id < 0) f.at("id").error("must be >= 0");
    if (op.height <= 0.0) f.at("height").error("must be positive");
    if (op.speed <= 0.0) f.at("speed").error("must be positive");
    if (!f.has("waypoints")) f.error("missing 'waypoints'");
    const Field w = f.at("waypoints");
    const std::size_t n = w.array_size();
    if (n == 0) w.error("needs at least one waypoint");
    for (std::size_t i = 0; i < n; ++i) {
        const Field p = w.at(i);
        const std::size_t len = p.array_size();
        if (len != 2 && len != 3) p.error("expected [x, y] or [x, y, dwell_s]");
        Waypoint wp;
        wp.position = Vec2(p.at(std::size_t{0}).number(), p.at(1).number());
        if (len == 3) wp.dwell = p.at(2).number();
        if (wp.dwell < 0.0) p.at(2).error("dwell must be >= 0");
        op.waypoints.push_back(wp);
    }
    return op;
}

}  // namespace

void LatencyModel::validate() const {
    for (double v : {perception, decision, actuation, stop_ramp, per_operator_decision}) {
        require(std::isfinite(v) && v >= 0.0, "latencies must be finite and >= 0");
    }
}

LatencyModel LatencyModel::calibrated() {
    LatencyModel m;
    m.perception = 0.0167;
    m.decision = 0.0189;
    m.actuation = 0.0;
    m.stop_ramp = 0.0448;
    m.per_operator_decision = 0.0179;
    return m;
}

void NoiseModel::validate() const {
    require(std::isfinite(bbox_jitter) && bbox_jitter >= 0.0, "bbox_jitter must be >= 0");
    require(std::isfinite(depth_noise) && depth_noise >= 0.0, "depth_noise must be >= 0");
    require(miss_probability >= 0.0 && miss_probability <= 1.0,
            "miss_probability must be in [0,1]");
    require(std::isfinite(border_miss_band) && border_miss_band >= 0.0,
            "border_miss_band must be >= 0");
}

void ScenarioConfig::validate() const {
    require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
    require(steps >= 0, "steps must be >= 0");
    ssm.validate();
    bounds().validate();
    monitor.validate();
    require(replan_margin >= 0.0, "replan margin must be >= 0");
    camera.validate();
    require(head_size > 0.0, "head size must be positive");
    robot.validate();
    require(!routine.empty(), "routine needs at least one waypoint");
    require(nominal_tcp_speed > 0.0, "nominal TCP speed must be positive");
    tracker.validate();
    latency.validate();
    noise.validate();
    std::set<int> ids;
    for (const auto& op : operators) {
        require(ids.insert(op.id).second, "duplicate operator id " + std::to_string(op.id));
        require(!op.waypoints.empty(), "operator needs at least one waypoint");
        require(op.speed > 0.0 && op.height > 0.0, "operator speed and height must be positive");
    }
    for (const auto& c : controls) {
        require(c.step >= 1, "scripted control step must be >= 1");
        require(!c.msg.session_level(), "session controls cannot be scripted");
    }
}

ScenarioConfig parse_scenario(std::string_view text, std::string_view source_view) {
    const std::string source(source_view);
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::string what = e.what();
        const auto pos = what.find("syntax error");
        if (pos != std::string::npos) what = what.substr(pos);
        fail(ErrorCode::Parse, source + ":" + line_column(text, e.byte) + ": " + what);
    }
    const Field root(doc, "", source);
    if (!doc.is_object()) fail(ErrorCode::Parse, source + ": top level must be an object");
    root.expect_object({"name", "seed", "dt", "duration", "steps", "mode", "ssm", "monitor",
                        "camera", "robot", "tracker", "latency", "noise", "operators",
                        "controls"});
    ScenarioConfig c;
    if (root.has("name")) c.name = root.at("name").string();
    if (root.has("seed")) {
        const Field s = root.at("seed");
        if (!s.value().is_number_unsigned()) s.error("expected a non-negative integer");
        c.seed = s.value().get<std::uint64_t>();
    }
    root.read("dt", c.dt);
    if (c.dt <= 0.0) root.at("dt").error("must be positive");
    if (root.has("duration") && root.has("steps")) {
        root.at("steps").error("give either 'duration' or 'steps', not both");
    }
    if (root.has("duration")) {
        const double d = root.at("duration").number();
        if (d < 0.0) root.at("duration").error("must be >= 0");
        c.steps = std::lround(d / c.dt);
    }
    if (root.has("steps")) {
        c.steps = root.at("steps").integer();
        if (c.steps < 0) root.at("steps").error("must be >= 0");
    }
    if (root.has("mode")) {
        const auto m = parse_mode(root.at("mode").string());
        if (!m) root.at("mode").error("unknown mode (static_ssm, dynamic_zones, obstacle_avoidance)");
        c.monitor.mode = *m;
    }
    if (root.has("ssm")) parse_ssm(root.at("ssm"), c);
    if (root.has("monitor")) parse_monitor(root.at("monitor"), c);
    if (root.has("camera")) parse_camera(root.at("camera"), c);
    if (root.has("robot")) parse_robot(root.at("robot"), c);
    if (root.has("tracker")) parse_tracker(root.at("tracker"), c);
    if (root.has("latency")) parse_latency(root.at("latency"), c);
    if (root.has("noise")) parse_noise(root.at("noise"), c);
    if (root.has("operators")) {
        const Field ops = root.at("operators");
        std::set<int> ids;
        for (std::size_t i = 0; i < ops.array_size(); ++i) {
            OperatorScript op = parse_operator(ops.at(i), static_cast<int>(i) + 1);
            if (!ids.insert(op.id).second) ops.at(i).error("duplicate operator id");
            c.operators.push_back(std::move(op));
        }
    }
    if (root.has("controls")) {
        const Field ctl = root.at("controls");
        for (std::size_t i = 0; i < ctl.array_size(); ++i) {
            const Field item = ctl.at(i);
            item.expect_object({"step", "msg"});
            if (!item.has("step") || !item.has("msg")) item.error("needs 'step' and 'msg'");
            ScheduledControl sc;
            sc.step = item.at("step").integer();
            if (sc.step < 1) item.at("step").error("must be >= 1");
            try {
                sc.msg = parse_control(item.at("msg").value());
            } catch (const Error& e) {
                item.at("msg").error(e.what());
            }
            if (sc.msg.session_level()) item.at("msg").error("session controls cannot be scripted");
            c.controls.push_back(sc);
        }
        std::stable_sort(c.controls.begin(), c.controls.end(),
                         [](const ScheduledControl& a, const ScheduledControl& b) {
                             return a.step < b.step;
                         });
    }
    guarded(root, [&] { c.validate(); });
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open scenario file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path.string());
}

nlohmann::ordered_json scenario_to_json(const ScenarioConfig& c) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["seed"] = c.seed;
    j["dt"] = c.dt;
    j["steps"] = c.steps;
    j["mode"] = to_string(c.monitor.mode);
    j["ssm"] = {{"human_speed", c.ssm.human_speed},
                {"robot_speed", c.ssm.robot_speed},
                {"reaction_time", c.ssm.reaction_time},
                {"stop_time", c.ssm.stop_time},
                {"intrusion", c.ssm.intrusion},
                {"robot_uncertainty", c.ssm.robot_uncertainty},
                {"operator_uncertainty", c.ssm.operator_uncertainty},
                {"clearance", c.clearance}};
    const auto& s = c.monitor.speeds;
    j["monitor"] = {{"safe_fraction", s.safe},
                    {"low_risk_fraction", s.low_risk},
                    {"dynamic_high_risk_fraction", s.dynamic_high_risk},
                    {"avoidance_high_risk_fraction", s.avoidance_high_risk},
                    {"joint_msd", s.joint_msd},
                    {"cylinder_radius", c.monitor.cylinder_radius},
                    {"dwell_time", c.monitor.dwell_time},
                    {"replan_margin", c.replan_margin}};
    const Vec3& cp = c.camera.pose.translation;
    const double depth = c.camera.mount_height;
    j["camera"] = {{"position", {cp.x(), cp.y(), cp.z()}},
                   {"image_size", {c.camera.image_width, c.camera.image_height}},
                   {"footprint",
                    {c.camera.image_width * depth / c.camera.fx,
                     c.camera.image_height * depth / c.camera.fy}},
                   {"head_size", c.head_size}};
    const Vec3& b = c.robot.base_pose.translation;
    nlohmann::ordered_json routine = nlohmann::ordered_json::array();
    for (const auto& q : c.routine) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (double a : q) row.push_back(a / kDeg);
        routine.push_back(row);
    }
    j["robot"] = {{"base", {b.x(), b.y(), b.z()}},
                  {"link_scale", c.robot.links[1].a / -243.65},
                  {"routine_deg", routine},
                  {"nominal_tcp_speed", c.nominal_tcp_speed}};
    if (c.joint_speed) j["robot"]["joint_speed"] = *c.joint_speed;
    j["tracker"] = {{"max_misses", c.tracker.max_misses},
                    {"min_hits", c.tracker.min_hits},
                    {"iou_threshold", c.tracker.iou_threshold}};
    j["latency"] = {{"perception", c.latency.perception},
                    {"decision", c.latency.decision},
                    {"actuation", c.latency.actuation},
                    {"stop_ramp", c.latency.stop_ramp},
                    {"per_operator_decision", c.latency.per_operator_decision}};
    j["noise"] = {{"bbox_jitter", c.noise.bbox_jitter},
                  {"depth_noise", c.noise.depth_noise},
                  {"miss_probability", c.noise.miss_probability},
                  {"border_miss_band", c.noise.border_miss_band}};
    j["operators"] = nlohmann::ordered_json::array();
    for (const auto& op : c.operators) {
        nlohmann::ordered_json w = nlohmann::ordered_json::array();
        for (const auto& p : op.waypoints) {
            w.push_back({p.position.x(), p.position.y(), p.dwell});
        }
        j["operators"].push_back({{"id", op.id},
                                  {"height", op.height},
                                  {"speed", op.speed},
                                  {"loop", op.loop},
                                  {"waypoints", w}});
    }
    j["controls"] = nlohmann::ordered_json::array();
    for (const auto& sc : c.controls) {
        j["controls"].push_back({{"step", sc.step}, {"msg", to_json(sc.msg)}});
    }
    return j;
}

}  // namespace hrcguard
