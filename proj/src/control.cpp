/*
 * control.cpp
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

#include "control.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace hrcguard {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& what) {
    fail(ErrorCode::Parse, "control field '" + field + "': " + what);
}

double finite_number(const json& j, const char* field) {
    if (!j.contains(field)) bad(field, "missing");
    const json& v = j.at(field);
    if (!v.is_number()) bad(field, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) bad(field, "must be finite");
    return x;
}

int operator_id(const json& j) {
    if (!j.contains("id")) bad("id", "missing");
    const json& v = j.at("id");
    if (!v.is_number_integer()) bad("id", "expected an integer");
    const auto id = v.get<long long>();
    if (id < 0 || id > 1000000) bad("id", "out of range");
    return static_cast<int>(id);
}

Vec2 floor_position(const json& j) {
    if (!j.contains("position")) bad("position", "missing");
    const json& p = j.at("position");
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        bad("position", "expected [x, y] in mm");
    }
    const Vec2 v(p[0].get<double>(), p[1].get<double>());
    if (!v.allFinite()) bad("position", "must be finite");
    return v;
}

}  // namespace

std::string_view to_string(ControlType type) {
    switch (type) {
        case ControlType::AddOperator: return "add_operator";
        case ControlType::RemoveOperator: return "remove_operator";
        case ControlType::Drag: return "drag";
        case ControlType::SetMode: return "set_mode";
        case ControlType::Pause: return "pause";
        case ControlType::Resume: return "resume";
        case ControlType::Reset: return "reset";
        case ControlType::SetSeed: return "set_seed";
    }
    return "unknown";
}

ControlMessage parse_control(const json& j) {
    if (!j.is_object()) fail(ErrorCode::Parse, "control message must be a JSON object");
    if (!j.contains("type") || !j.at("type").is_string()) bad("type", "expected a string");
    const std::string type = j.at("type").get<std::string>();
    ControlMessage msg;
    if (type == "add_operator") {
        msg.type = ControlType::AddOperator;
        if (j.contains("id")) msg.id = operator_id(j);
        msg.position = floor_position(j);
        if (j.contains("height")) msg.height = finite_number(j, "height");
        if (j.contains("speed")) msg.speed = finite_number(j, "speed");
        if (msg.height <= 0.0) bad("height", "must be positive");
        if (msg.speed <= 0.0) bad("speed", "must be positive");
    } else if (type == "remove_operator") {
        msg.type = ControlType::RemoveOperator;
        msg.id = operator_id(j);
    } else if (type == "drag") {
        msg.type = ControlType::Drag;
        msg.id = operator_id(j);
        msg.position = floor_position(j);
    } else if (type == "set_mode") {
        msg.type = ControlType::SetMode;
        if (!j.contains("mode") || !j.at("mode").is_string()) bad("mode", "expected a string");
        const auto mode = parse_mode(j.at("mode").get<std::string>());
        if (!mode) bad("mode", "unknown mode '" + j.at("mode").get<std::string>() + "'");
        msg.mode = *mode;
    } else if (type == "pause") {
        msg.type = ControlType::Pause;
    } else if (type == "resume") {
        msg.type = ControlType::Resume;
    } else if (type == "reset") {
        msg.type = ControlType::Reset;
    } else if (type == "set_seed") {
        msg.type = ControlType::SetSeed;
        if (!j.contains("seed") || !j.at("seed").is_number_unsigned()) {
            bad("seed", "expected a non-negative integer");
        }
        msg.seed = j.at("seed").get<std::uint64_t>();
    } else {
        bad("type", "unknown control type '" + type + "'");
    }
    return msg;
}

nlohmann::ordered_json to_json(const ControlMessage& msg) {
    nlohmann::ordered_json j;
    j["type"] = to_string(msg.type);
    switch (msg.type) {
        case ControlType::AddOperator:
            if (msg.id) j["id"] = *msg.id;
            j["position"] = {msg.position.x(), msg.position.y()};
            j["height"] = msg.height;
            j["speed"] = msg.speed;
            break;
        case ControlType::RemoveOperator:
            j["id"] = msg.id.value_or(-1);
            break;
        case ControlType::Drag:
            j["id"] = msg.id.value_or(-1);
            j["position"] = {msg.position.x(), msg.position.y()};
            break;
        case ControlType::SetMode:
            j["mode"] = to_string(msg.mode);
            break;
        case ControlType::SetSeed:
            j["seed"] = msg.seed;
            break;
        default:
            break;
    }
    return j;
}

}  // namespace hrcguard
