/*
 * harness.cpp
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

#include "harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <vector>

#include "error.hpp"

namespace hrcguard {

namespace {

using ojson = nlohmann::ordered_json;

constexpr SafetyZone kZones[] = {SafetyZone::HighRisk, SafetyZone::LowRisk, SafetyZone::Safe};

ojson timing_json(const TimingSamples& t) {
    ojson j;
    j["samples"] = t.samples;
    j["count"] = t.samples.size();
    j["gaps"] = t.gaps;
    j["mean"] = t.mean() ? ojson(*t.mean()) : ojson(nullptr);
    j["max"] = t.max() ? ojson(*t.max()) : ojson(nullptr);
    return j;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string ms(const nlohmann::json& v) {
    return v.is_number() ? fixed(v.get<double>() * 1000.0, 1) + " ms" : std::string("n/a");
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) fail(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

}  // namespace

ExperimentReport build_report(const Simulator& sim) {
    ExperimentReport r;
    const ScenarioConfig& c = sim.config();
    r.scenario = c.name;
    r.seed = c.seed;
    r.mode = c.monitor.mode;
    r.steps = sim.world().step;
    r.dt = c.dt;
    r.bounds = sim.bounds();
    std::vector<std::optional<SafetyZone>> predicted;
    std::vector<SafetyZone> truth;
    for (const auto& s : sim.zone_samples()) {
        predicted.push_back(s.predicted);
        truth.push_back(s.truth);
    }
    r.zones = compute_zone_metrics(predicted, truth);
    r.reaction = measure_reaction_time(sim.events());
    r.stop = measure_stop_time(sim.events());
    r.collisions = sim.collisions();
    r.contacts = std::count_if(sim.events().begin(), sim.events().end(),
                               [](const Event& e) { return e.type == "contact"; });
    return r;
}

ojson report_to_json(const ExperimentReport& r) {
    ojson j;
    j["scenario"] = r.scenario;
    j["seed"] = r.seed;
    j["mode"] = to_string(r.mode);
    j["steps"] = r.steps;
    j["dt"] = r.dt;
    j["boundaries"] = {{"inner", r.bounds.inner}, {"outer", r.bounds.outer}};
    ojson zones;
    for (SafetyZone z : kZones) {
        const ZoneCounts& c = r.zones[z];
        zones[std::string(to_string(z))] = {
            {"color", zone_color(z)},   {"tp", c.tp},
            {"fp", c.fp},               {"tn", c.tn},
            {"fn", c.fn},               {"accuracy", c.accuracy()},
            {"precision", c.precision()}, {"recall", c.recall()},
            {"fscore", c.fscore()}};
    }
    j["samples"] = r.zones.samples;
    j["zones"] = zones;
    j["reaction_time"] = timing_json(r.reaction);
    j["stop_time"] = timing_json(r.stop);
    j["collisions"] = r.collisions;
    j["contacts"] = r.contacts;
    return j;
}

std::string metrics_csv(const ZoneConfusion& zones) {
    std::string out = "zone,accuracy,precision,recall,fscore\n";
    for (SafetyZone z : kZones) {
        const ZoneCounts& c = zones[z];
        out += std::string(to_string(z)) + "," + fixed(c.accuracy(), 6) + "," +
               fixed(c.precision(), 6) + "," + fixed(c.recall(), 6) + "," + fixed(c.fscore(), 6) +
               "\n";
    }
    return out;
}

std::string render_report_text(const nlohmann::json& j) {
    try {
        std::string out;
        out += "scenario   " + j.at("scenario").get<std::string>() + " (mode " +
               j.at("mode").get<std::string>() + ", seed " + std::to_string(j.at("seed").get<std::uint64_t>()) +
               ", " + std::to_string(j.at("steps").get<long>()) + " steps)\n";
        out += "zones      S_a " + fixed(j.at("boundaries").at("inner").get<double>(), 2) +
               " mm, S_b " + fixed(j.at("boundaries").at("outer").get<double>(), 2) + " mm\n";
        out += "\nzone       color    accuracy  precision  recall   f-score\n";
        for (SafetyZone z : kZones) {
            const auto& c = j.at("zones").at(std::string(to_string(z)));
            char line[160];
            std::snprintf(line, sizeof line, "%-10s %-8s %7.1f%%  %8.1f%%  %6.1f%%  %6.1f%%\n",
                          std::string(to_string(z)).c_str(), c.at("color").get<std::string>().c_str(),
                          100.0 * c.at("accuracy").get<double>(),
                          100.0 * c.at("precision").get<double>(),
                          100.0 * c.at("recall").get<double>(), 100.0 * c.at("fscore").get<double>());
            out += line;
        }
        for (const char* key : {"reaction_time", "stop_time"}) {
            const auto& t = j.at(key);
            out += "\n" + std::string(key) + (std::string(key).size() < 10 ? "  " : " ") +
                   std::to_string(t.at("count").get<long>()) + " samples, " +
                   std::to_string(t.at("gaps").get<long>()) + " gaps, mean " + ms(t.at("mean")) +
                   ", max " + ms(t.at("max"));
        }
        out += "\n\ncollisions " + std::to_string(j.at("collisions").get<long>()) +
               " (contacts with a stopped robot: " + std::to_string(j.at("contacts").get<long>()) +
               ")\n";
        return out;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("malformed report: ") + e.what());
    }
}

RunResult run_scenario(const ScenarioConfig& config) {
    Simulator sim(config);
    sim.run_to_end();
    return {build_report(sim), sim.event_log()};
}

void write_run_outputs(const RunResult& result, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(ErrorCode::Io, "cannot create '" + out_dir.string() + "': " + ec.message());
    write_file(out_dir / "events.jsonl", result.event_log);
    write_file(out_dir / "report.json", report_to_json(result.report).dump(2) + "\n");
    write_file(out_dir / "metrics.csv", metrics_csv(result.report.zones));
}

}  // namespace hrcguard
