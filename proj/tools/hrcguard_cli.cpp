/*
 * hrcguard_cli.cpp
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

// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "hrcguard/hrcguard.h"

namespace {

enum Exit : int { kOk = 0, kCollision = 1, kUsage = 2, kInternal = 3 };

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

struct StringDeleter {
    void operator()(char* s) const { hg_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct ScenarioDeleter {
    void operator()(hg_scenario* s) const { hg_scenario_free(s); }
};
using ScenarioPtr = std::unique_ptr<hg_scenario, ScenarioDeleter>;

int report_failure(hg_status status, const std::string& context) {
    std::cerr << "hrcguard: " << context << ": " << hg_last_error() << "\n";
    switch (status) {
        case HG_ERR_INTERNAL: return kInternal;
        case HG_ERR_IO:
        case HG_ERR_PARSE:
        case HG_ERR_INVALID_ARGUMENT:
        case HG_ERR_STANDARD_VIOLATION:
        case HG_ERR_STATE:
        default: return kUsage;
    }
}

struct ScenarioFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;

    void add_to(CLI::App* cmd, bool required) {
        auto* opt = cmd->add_option("--config", config, "Scenario file (JSON)");
        if (required) opt->required();
        cmd->add_option("--seed", seed, "Override the scenario seed");
        cmd->add_option("--mode", mode, "static_ssm, dynamic_zones or obstacle_avoidance");
    }

    // Returns an exit code on failure.
    std::optional<int> load(ScenarioPtr& out) const {
        hg_scenario* raw = nullptr;
        if (hg_status st = hg_scenario_load(config.c_str(), &raw); st != HG_OK) {
            return report_failure(st, "loading scenario");
        }
        out.reset(raw);
        if (seed) {
            if (hg_status st = hg_scenario_set_seed(out.get(), *seed); st != HG_OK) {
                return report_failure(st, "--seed");
            }
        }
        if (mode) {
            if (hg_status st = hg_scenario_set_mode(out.get(), mode->c_str()); st != HG_OK) {
                return report_failure(st, "--mode");
            }
        }
        return std::nullopt;
    }
};

std::string ms(double seconds) {
    if (std::isnan(seconds)) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f ms", seconds * 1000.0);
    return buf;
}

int cmd_run(const ScenarioFlags& flags, const std::string& out_dir) {
    ScenarioPtr scenario;
    if (auto code = flags.load(scenario)) return *code;
    hg_run_summary s{};
    if (hg_status st = hg_run_scenario(scenario.get(), out_dir.c_str(), &s, nullptr, nullptr);
        st != HG_OK) {
        return report_failure(st, "run");
    }
    std::printf("steps        %ld\n", s.steps);
    std::printf("recall       high_risk %.1f%%  low_risk %.1f%%  safe %.1f%%\n",
                100.0 * s.recall[HG_ZONE_HIGH_RISK], 100.0 * s.recall[HG_ZONE_LOW_RISK],
                100.0 * s.recall[HG_ZONE_SAFE]);
    std::printf("reaction     %zu samples, mean %s\n", s.reaction_samples,
                ms(s.reaction_mean).c_str());
    std::printf("stop         %zu samples, mean %s, max %s\n", s.stop_samples,
                ms(s.stop_mean).c_str(), ms(s.stop_max).c_str());
    std::printf("collisions   %ld\n", s.collisions);
    std::printf("outputs      %s/{events.jsonl,report.json,metrics.csv}\n", out_dir.c_str());
    return s.collisions > 0 ? kCollision : kOk;
}

int cmd_report(const ScenarioFlags& flags, const std::string& out_dir) {
    std::string report;
    if (!flags.config.empty()) {
        ScenarioPtr scenario;
        if (auto code = flags.load(scenario)) return *code;
        char* json = nullptr;
        if (hg_status st = hg_run_scenario(scenario.get(), nullptr, nullptr, &json, nullptr);
            st != HG_OK) {
            return report_failure(st, "run");
        }
        report = OwnedString(json).get();
    } else {
        const std::string path = out_dir + "/report.json";
        std::ifstream in(path);
        if (!in) {
            std::cerr << "hrcguard: cannot open " << path << " (run first, or pass --config)\n";
            return kUsage;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        report = ss.str();
    }
    char* text = nullptr;
    if (hg_status st = hg_render_report(report.c_str(), &text); st != HG_OK) {
        return report_failure(st, "report");
    }
    std::cout << OwnedString(text).get();
    return kOk;
}

int cmd_validate(const ScenarioFlags& flags) {
    ScenarioPtr scenario;
    if (auto code = flags.load(scenario)) return *code;
    char* json = nullptr;
    if (hg_status st = hg_scenario_to_json(scenario.get(), &json); st != HG_OK) {
        return report_failure(st, "validate");
    }
    const auto j = nlohmann::json::parse(OwnedString(json).get());
    std::printf("ok: %s (%s, %ld steps of %.4f s, %zu operators, %zu scripted controls)\n",
                j["name"].get<std::string>().c_str(), j["mode"].get<std::string>().c_str(),
                j["steps"].get<long>(), j["dt"].get<double>(), j["operators"].size(),
                j["controls"].size());
    return kOk;
}

struct MsdFlags {
    hg_ssm_params params{};
    double clearance = 750.0;
    double reach = 0.0;
    std::optional<double> margin;
    int severity = 1;
    int frequency = 2;
    int avoidance = 2;
    bool json = false;
};

int cmd_msd(const MsdFlags& f) {
    double inner = 0.0;
    double outer = 0.0;
    if (hg_status st = hg_zone_boundaries(&f.params, f.clearance, &inner, &outer); st != HG_OK) {
        return report_failure(st, "msd");
    }
    const double margin = f.margin.value_or(inner - f.reach);
    double t_collision = std::nan("");
    if (margin >= 0.0) {
        if (hg_status st = hg_collision_time(margin, f.params.human_speed, &t_collision);
            st != HG_OK) {
            return report_failure(st, "collision time");
        }
    }
    hg_performance_level pl{};
    if (hg_status st = hg_compute_performance_level(f.severity, f.frequency, f.avoidance, &pl);
        st != HG_OK) {
        return report_failure(st, "performance level");
    }
    const bool in_time = !std::isnan(t_collision) && t_collision > f.params.reaction_time;
    if (f.json) {
        nlohmann::ordered_json j;
        j["s_a"] = inner;
        j["s_b"] = outer;
        j["clearance"] = f.clearance;
        j["reach_with_tool"] = f.reach;
        j["margin"] = margin;
        j["t_collision"] = std::isnan(t_collision) ? nlohmann::ordered_json(nullptr)
                                                   : nlohmann::ordered_json(t_collision);
        j["reaction_time"] = f.params.reaction_time;
        j["stops_in_time"] = in_time;
        j["hazard"] = "S" + std::to_string(f.severity) + "F" + std::to_string(f.frequency) + "P" +
                      std::to_string(f.avoidance);
        j["performance_level"] = hg_performance_level_name(pl);
        std::cout << j.dump(2) << "\n";
        return kOk;
    }
    std::printf("S_a           %.2f mm\n", inner);
    std::printf("S_b           %.2f mm (S_a + %.0f mm clearance)\n", outer, f.clearance);
    std::printf("margin        %.2f mm%s\n", margin,
                f.margin ? " (given)" : " (S_a - reach with tool)");
    if (std::isnan(t_collision)) {
        std::printf("t_collision   n/a (negative margin)\n");
    } else {
        std::printf("t_collision   %.2f ms (%s reaction time %.1f ms)\n", t_collision * 1000.0,
                    in_time ? ">" : "<=", f.params.reaction_time * 1000.0);
    }
    std::printf("PL            %s (S%dF%dP%d)\n", hg_performance_level_name(pl), f.severity,
                f.frequency, f.avoidance);
    return kOk;
}

int cmd_serve(const ScenarioFlags& flags, const std::string& endpoint, double realtime_factor,
              const std::string& static_dir, double duration) {
    ScenarioPtr scenario;
    if (auto code = flags.load(scenario)) return *code;
    hg_server* server = nullptr;
    if (hg_status st = hg_server_start(scenario.get(), endpoint.c_str(), realtime_factor,
                                       static_dir.empty() ? nullptr : static_dir.c_str(), &server);
        st != HG_OK) {
        return report_failure(st, "serve");
    }
    int port = 0;
    hg_server_port(server, &port);
    std::printf("serving on port %d (telemetry /api/v1/telemetry, stream /api/v1/stream, "
                "control /api/v1/control)\n",
                port);
    std::fflush(stdout);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    const auto start = std::chrono::steady_clock::now();
    while (!g_interrupted) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        if (duration > 0.0 &&
            std::chrono::steady_clock::now() - start >= std::chrono::duration<double>(duration)) {
            break;
        }
    }
    hg_server_stop(server);
    hg_server_free(server);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hrcguard: speed and separation monitoring simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(hg_version_string()));

    ScenarioFlags run_flags;
    std::string run_out = "out";
    auto* run = app.add_subcommand("run", "Run a scenario and write events, report and metrics");
    run_flags.add_to(run, true);
    run->add_option("--out-dir", run_out, "Output directory")->capture_default_str();

    ScenarioFlags report_flags;
    std::string report_out = "out";
    auto* report = app.add_subcommand("report", "Print a report from --out-dir or a fresh --config run");
    report_flags.add_to(report, false);
    report->add_option("--out-dir", report_out, "Directory holding report.json")
        ->capture_default_str();

    ScenarioFlags serve_flags;
    std::string endpoint = "127.0.0.1:8765";
    double realtime_factor = 1.0;
    std::string static_dir;
    double duration = 0.0;
    auto* serve = app.add_subcommand("serve", "Run live with the telemetry and control endpoint");
    serve_flags.add_to(serve, true);
    serve->add_option("--endpoint", endpoint, "host:port to listen on (port 0 picks one)")
        ->capture_default_str();
    serve->add_option("--realtime-factor", realtime_factor, "Simulated seconds per wall second")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    serve->add_option("--static-dir", static_dir, "Serve UI assets from this directory");
    serve->add_option("--duration", duration, "Stop after this many wall seconds (0 = until signal)");

    ScenarioFlags validate_flags;
    auto* validate = app.add_subcommand("validate-config", "Check a scenario file");
    validate_flags.add_to(validate, true);

    MsdFlags msd_flags;
    hg_ssm_params_default(&msd_flags.params);
    msd_flags.reach = hg_default_reach_with_tool();
    auto* msd = app.add_subcommand("msd", "Minimum separation distance, zones, collision time, PL");
    msd->add_option("--human-speed", msd_flags.params.human_speed, "mm/s")->capture_default_str();
    msd->add_option("--robot-speed", msd_flags.params.robot_speed, "mm/s")->capture_default_str();
    msd->add_option("--reaction-time", msd_flags.params.reaction_time, "s")->capture_default_str();
    msd->add_option("--stop-time", msd_flags.params.stop_time, "s")->capture_default_str();
    msd->add_option("--intrusion", msd_flags.params.intrusion, "mm")->capture_default_str();
    msd->add_option("--robot-uncertainty", msd_flags.params.robot_uncertainty, "mm")
        ->capture_default_str();
    msd->add_option("--operator-uncertainty", msd_flags.params.operator_uncertainty, "mm")
        ->capture_default_str();
    msd->add_option("--clearance", msd_flags.clearance, "Low-risk band width, mm")
        ->capture_default_str();
    msd->add_option("--reach", msd_flags.reach, "Robot reach including the tool, mm")
        ->capture_default_str();
    msd->add_option("--margin", msd_flags.margin, "Use this separation margin instead of S_a - reach");
    msd->add_option("--severity", msd_flags.severity, "1 or 2")->check(CLI::Range(1, 2));
    msd->add_option("--frequency", msd_flags.frequency, "1 or 2")->check(CLI::Range(1, 2));
    msd->add_option("--avoidance", msd_flags.avoidance, "1 or 2")->check(CLI::Range(1, 2));
    msd->add_flag("--json", msd_flags.json, "Machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run) return cmd_run(run_flags, run_out);
        if (*report) return cmd_report(report_flags, report_out);
        if (*serve) return cmd_serve(serve_flags, endpoint, realtime_factor, static_dir, duration);
        if (*validate) return cmd_validate(validate_flags);
        if (*msd) return cmd_msd(msd_flags);
    } catch (const std::exception& e) {
        std::cerr << "hrcguard: internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}
