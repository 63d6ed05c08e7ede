/*
 * telemetry.cpp
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

#include "telemetry.hpp"

#include <charconv>

#include "error.hpp"

namespace hrcguard {

namespace {

using ojson = nlohmann::ordered_json;

ojson xy(const Vec2& p) { return ojson::array({p.x(), p.y()}); }
ojson xyz(const Vec3& p) { return ojson::array({p.x(), p.y(), p.z()}); }

}  // namespace

ojson telemetry_snapshot(const Simulator& sim, bool paused, std::span<const Event> recent_events) {
    const WorldState& w = sim.world();
    const ZoneBoundaries& b = sim.bounds();
    const RobotGeometry& geom = sim.config().robot;
    ojson j;
    j["version"] = kTelemetryVersion;
    j["type"] = "telemetry";
    j["scenario"] = sim.config().name;
    j["step"] = w.step;
    j["time"] = w.time;
    j["dt"] = sim.config().dt;
    j["paused"] = paused;
    j["mode"] = to_string(w.mode);
    j["boundaries"] = {{"inner", b.inner},
                       {"outer", b.outer},
                       {"base", xy(geom.base_floor_position())}};

    const RobotState& r = w.robot;
    ojson joints = ojson::array();
    for (double q : r.joints) joints.push_back(q);
    j["robot"] = {{"base", xyz(geom.base_pose.translation)},
                  {"shoulder", xyz(r.points.shoulder)},
                  {"elbow", xyz(r.points.elbow)},
                  {"wrist", xyz(r.points.wrist)},
                  {"flange", xyz(r.points.flange)},
                  {"tcp", xyz(r.points.tcp)},
                  {"joints", joints},
                  {"speed_fraction", r.speed_fraction},
                  {"stopped", r.stopped},
                  {"ramping", r.ramping},
                  {"holding", r.holding},
                  {"routine_progress", r.routine_progress}};

    const SpeedCommand& c = w.active_command;
    j["command"] = {
        {"fraction", c.fraction},
        {"stop", c.stop},
        {"replan", c.replan_required},
        {"governing_track", c.governing_operator ? ojson(*c.governing_operator) : ojson(nullptr)},
        {"governing_zone", c.governing_zone ? ojson(to_string(*c.governing_zone)) : ojson(nullptr)}};

    const Vec2 base = geom.base_floor_position();
    j["operators"] = ojson::array();
    for (const auto& op : w.operators) {
        const double d = (op.position - base).norm();
        const SafetyZone z = classify_zone(d, b);
        j["operators"].push_back({{"id", op.id},
                                  {"position", xy(op.position)},
                                  {"height", op.height},
                                  {"distance", d},
                                  {"zone", to_string(z)},
                                  {"color", zone_color(z)}});
    }
    j["tracks"] = ojson::array();
    for (const auto& e : w.estimates) {
        j["tracks"].push_back({{"id", e.track_id},
                               {"position", xy(e.position)},
                               {"height", e.height},
                               {"distance", e.distance_to_base},
                               {"zone", to_string(e.zone)},
                               {"color", zone_color(e.zone)}});
    }
    j["cylinders"] = ojson::array();
    for (const auto& cyl : w.cylinders) {
        j["cylinders"].push_back({{"track", cyl.track_id},
                                  {"center", xy(cyl.center)},
                                  {"radius", cyl.radius},
                                  {"height", cyl.height},
                                  {"zone", to_string(cyl.zone)},
                                  {"color", zone_color(cyl.zone)}});
    }
    if (w.detour) {
        ojson path = ojson::array();
        for (const auto& p : w.detour->path) path.push_back(xy(p));
        j["detour"] = {{"status", to_string(w.detour->status)}, {"path", path}};
    } else {
        j["detour"] = nullptr;
    }
    j["events"] = ojson::array();
    for (const auto& e : recent_events) {
        j["events"].push_back({{"step", e.step}, {"time", e.time}, {"type", e.type}, {"data", e.data}});
    }
    return j;
}

std::string frame_message(std::string_view json) {
    std::string out = std::to_string(json.size());
    out += '\n';
    out += json;
    out += '\n';
    return out;
}

std::vector<std::string> unframe_messages(std::string& buffer) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t nl = buffer.find('\n', pos);
        if (nl == std::string::npos) break;
        std::size_t len = 0;
        const auto [ptr, ec] = std::from_chars(buffer.data() + pos, buffer.data() + nl, len);
        if (ec != std::errc() || ptr != buffer.data() + nl) {
            fail(ErrorCode::Parse, "bad telemetry frame header");
        }
        if (buffer.size() < nl + 1 + len + 1) break;
        out.push_back(buffer.substr(nl + 1, len));
        if (buffer[nl + 1 + len] != '\n') fail(ErrorCode::Parse, "bad telemetry frame trailer");
        pos = nl + 1 + len + 1;
    }
    buffer.erase(0, pos);
    return out;
}

}  // namespace hrcguard
