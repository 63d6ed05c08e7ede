/*
 * telemetry.hpp
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

#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "events.hpp"
#include "simulator.hpp"

namespace hrcguard {

inline constexpr int kTelemetryVersion = 1;

/// Immutable per-step view of the world for UI clients.
nlohmann::ordered_json telemetry_snapshot(const Simulator& sim, bool paused,
                                          std::span<const Event> recent_events);

/// Stream framing: decimal byte length, newline, message, newline.
std::string frame_message(std::string_view json);

/// Splits a framed stream; leaves a trailing partial frame in `buffer`.
std::vector<std::string> unframe_messages(std::string& buffer);

}  // namespace hrcguard
