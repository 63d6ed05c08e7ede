/*
 * control.hpp
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
#include <optional>
#include <string_view>

#include <json.hpp>

#include "geometry.hpp"
#include "monitor.hpp"

namespace hrcguard {

enum class ControlType {
    AddOperator,
    RemoveOperator,
    Drag,
    SetMode,
    // Session-level; never reach the simulator.
    Pause,
    Resume,
    Reset,
    SetSeed,
};

std::string_view to_string(ControlType type);

struct ControlMessage {
    ControlType type = ControlType::Pause;
    std::optional<int> id;  // operator id (add: optional, remove/drag: required)
    Vec2 position = Vec2::Zero();
    double height = 1700.0;
    double speed = 1600.0;
    OperationMode mode = OperationMode::StaticSSM;
    std::uint64_t seed = 0;

    bool session_level() const {
        return type == ControlType::Pause || type == ControlType::Resume ||
               type == ControlType::Reset || type == ControlType::SetSeed;
    }
};

/// Wire form: {"type": "drag", "id": 1, "position": [x, y]}. Throws
/// Error(Parse) naming the offending field.
ControlMessage parse_control(const nlohmann::json& j);
nlohmann::ordered_json to_json(const ControlMessage& msg);

}  // namespace hrcguard
