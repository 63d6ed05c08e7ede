/*
 * events.hpp
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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hrcguard {

/// One line of the event log: {"step":..,"time":..,"type":..,"data":{..}}.
struct Event {
    long step = 0;
    double time = 0.0;
    std::string type;
    nlohmann::ordered_json data = nlohmann::ordered_json::object();

    std::string to_line() const;
    static Event from_line(std::string_view line);
};

std::string format_event_log(std::span<const Event> events);
/// Blank lines are skipped; malformed lines throw Error(Parse) with the line number.
std::vector<Event> parse_event_log(std::string_view text);

struct TimingSamples {
    std::vector<double> samples;  // seconds
    std::size_t gaps = 0;         // transitions without a matching outcome

    std::optional<double> mean() const;
    std::optional<double> max() const;
};

/// Ground-truth Safe <-> LowRisk changes of the governing operator, each
/// matched to the next applied speed change for the new zone.
TimingSamples measure_reaction_time(std::span<const Event> events);

/// From each reported entry of the governing operator into HighRisk to the
/// robot reaching zero speed. Entries answered by a non-stop command (the
/// dynamic and avoidance modes) are not timed.
TimingSamples measure_stop_time(std::span<const Event> events);

}  // namespace hrcguard
