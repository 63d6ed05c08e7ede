/*
 * events.cpp
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

#include "events.hpp"

#include <algorithm>
#include <numeric>

#include "error.hpp"

namespace hrcguard {

namespace {

std::optional<std::string> zone_field(const Event& e, const char* key) {
    const auto it = e.data.find(key);
    if (it == e.data.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
}

}  // namespace

std::string Event::to_line() const {
    nlohmann::ordered_json j;
    j["step"] = step;
    j["time"] = time;
    j["type"] = type;
    j["data"] = data;
    return j.dump();
}

Event Event::from_line(std::string_view line) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(line.begin(), line.end());
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("malformed event: ") + e.what());
    }
    if (!j.is_object() || !j.contains("step") || !j.contains("time") || !j.contains("type")) {
        fail(ErrorCode::Parse, "event needs step, time and type");
    }
    Event e;
    try {
        e.step = j.at("step").get<long>();
        e.time = j.at("time").get<double>();
        e.type = j.at("type").get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
        fail(ErrorCode::Parse, std::string("malformed event field: ") + ex.what());
    }
    if (j.contains("data")) e.data = j.at("data");
    return e;
}

std::string format_event_log(std::span<const Event> events) {
    std::string out;
    for (const auto& e : events) {
        out += e.to_line();
        out += '\n';
    }
    return out;
}

std::vector<Event> parse_event_log(std::string_view text) {
    std::vector<Event> events;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        try {
            events.push_back(Event::from_line(line));
        } catch (const Error& e) {
            fail(ErrorCode::Parse, "event log line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return events;
}

std::optional<double> TimingSamples::mean() const {
    if (samples.empty()) return std::nullopt;
    return std::accumulate(samples.begin(), samples.end(), 0.0) /
           static_cast<double>(samples.size());
}

std::optional<double> TimingSamples::max() const {
    if (samples.empty()) return std::nullopt;
    return *std::max_element(samples.begin(), samples.end());
}

TimingSamples measure_reaction_time(std::span<const Event> events) {
    TimingSamples out;
    struct Pending {
        double since;
        std::string zone;
    };
    std::optional<Pending> pending;
    for (const auto& e : events) {
        if (e.type == "truth_governing") {
            if (pending) ++out.gaps;
            pending.reset();
            const auto from = zone_field(e, "from");
            const auto to = zone_field(e, "to");
            if (!from || !to) continue;
            const bool up = *from == "safe" && *to == "low_risk";
            const bool down = *from == "low_risk" && *to == "safe";
            if (up || down) pending = Pending{e.time, *to};
        } else if (e.type == "speed_applied" && pending) {
            if (zone_field(e, "zone") == pending->zone) {
                out.samples.push_back(e.time - pending->since);
                pending.reset();
            }
        }
    }
    if (pending) ++out.gaps;
    return out;
}

TimingSamples measure_stop_time(std::span<const Event> events) {
    TimingSamples out;
    bool open = false;
    double since = 0.0;
    for (const auto& e : events) {
        if (e.type == "governing") {
            const bool high = zone_field(e, "to") == std::optional<std::string>("high_risk");
            const bool was_high = zone_field(e, "from") == std::optional<std::string>("high_risk");
            if (high && !was_high) {
                if (open) ++out.gaps;
                open = true;
                since = e.time;
            } else if (!high && open) {
                ++out.gaps;
                open = false;
            }
        } else if (e.type == "command" && open && !e.data.value("stop", false)) {
            open = false;  // the monitor chose to keep moving; nothing to time
        } else if (e.type == "stopped" && open) {
            out.samples.push_back(e.time - since);
            open = false;
        }
    }
    if (open) ++out.gaps;
    return out;
}

}  // namespace hrcguard
