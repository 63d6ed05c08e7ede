/*
 * harness.hpp
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
#include <filesystem>
#include <string>

#include <json.hpp>

#include "events.hpp"
#include "metrics.hpp"
#include "monitor.hpp"
#include "scenario.hpp"
#include "simulator.hpp"

namespace hrcguard {

struct ExperimentReport {
    std::string scenario;
    std::uint64_t seed = 0;
    OperationMode mode = OperationMode::StaticSSM;
    long steps = 0;
    double dt = 0.0;
    ZoneBoundaries bounds;
    ZoneConfusion zones;
    TimingSamples reaction;
    TimingSamples stop;
    long collisions = 0;
    long contacts = 0;
};

ExperimentReport build_report(const Simulator& sim);

nlohmann::ordered_json report_to_json(const ExperimentReport& report);
/// Header: zone,accuracy,precision,recall,fscore.
std::string metrics_csv(const ZoneConfusion& zones);
/// Plain-text summary of a report.json document.
std::string render_report_text(const nlohmann::json& report);

struct RunResult {
    ExperimentReport report;
    std::string event_log;  // line-delimited JSON
};

RunResult run_scenario(const ScenarioConfig& config);

/// Writes events.jsonl, report.json and metrics.csv into out_dir.
void write_run_outputs(const RunResult& result, const std::filesystem::path& out_dir);

}  // namespace hrcguard
