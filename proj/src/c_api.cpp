/*
 * c_api.cpp
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

#include "hrcguard/hrcguard.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "error.hpp"
#include "harness.hpp"
#include "safety_math.hpp"
#include "scenario.hpp"
#include "serve.hpp"
#include "simulator.hpp"
#include "telemetry.hpp"

struct hg_scenario {
    hrcguard::ScenarioConfig config;
};

struct hg_simulator {
    std::unique_ptr<hrcguard::Simulator> sim;
};

struct hg_server {
    std::unique_ptr<hrcguard::Server> server;
};

namespace {

thread_local std::string g_last_error;

hg_status set_error(hg_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

// Every entry point funnels exceptions through here.
template <typename Fn>
hg_status guard(Fn&& fn) noexcept {
    try {
        g_last_error.clear();
        fn();
        return HG_OK;
    } catch (const hrcguard::Error& e) {
        return set_error(static_cast<hg_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(HG_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(HG_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(HG_ERR_INTERNAL, "unknown error");
    }
}

void need(const void* p, const char* what) {
    if (!p) hrcguard::fail(hrcguard::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

hrcguard::SsmParameters to_params(const hg_ssm_params* p) {
    need(p, "params");
    hrcguard::SsmParameters s;
    s.human_speed = p->human_speed;
    s.robot_speed = p->robot_speed;
    s.reaction_time = p->reaction_time;
    s.stop_time = p->stop_time;
    s.intrusion = p->intrusion;
    s.robot_uncertainty = p->robot_uncertainty;
    s.operator_uncertainty = p->operator_uncertainty;
    return s;
}

void fill_summary(const hrcguard::ExperimentReport& r, hg_run_summary* s) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s->steps = r.steps;
    s->collisions = r.collisions;
    s->contacts = r.contacts;
    s->reaction_samples = r.reaction.samples.size();
    s->reaction_gaps = r.reaction.gaps;
    s->reaction_mean = r.reaction.mean().value_or(nan);
    s->stop_samples = r.stop.samples.size();
    s->stop_gaps = r.stop.gaps;
    s->stop_mean = r.stop.mean().value_or(nan);
    s->stop_max = r.stop.max().value_or(nan);
    for (std::size_t z = 0; z < 3; ++z) {
        const auto& c = r.zones.zones[z];
        s->accuracy[z] = c.accuracy();
        s->precision[z] = c.precision();
        s->recall[z] = c.recall();
        s->fscore[z] = c.fscore();
    }
}

}  // namespace

extern "C" {

int hg_api_version(void) { return HG_API_VERSION; }

const char* hg_version_string(void) { return "hrcguard 1.0.0"; }

const char* hg_last_error(void) { return g_last_error.c_str(); }

void hg_string_free(char* str) { std::free(str); }

void hg_ssm_params_default(hg_ssm_params* params) {
    if (!params) return;
    const hrcguard::SsmParameters d;
    *params = {d.human_speed,       d.robot_speed,      d.reaction_time,       d.stop_time,
               d.intrusion,         d.robot_uncertainty, d.operator_uncertainty};
}

hg_status hg_compute_msd(const hg_ssm_params* params, double* out_msd) {
    return guard([&] {
        need(out_msd, "out_msd");
        *out_msd = hrcguard::compute_msd(to_params(params));
    });
}

hg_status hg_zone_boundaries(const hg_ssm_params* params, double clearance, double* out_inner,
                             double* out_outer) {
    return guard([&] {
        need(out_inner, "out_inner");
        need(out_outer, "out_outer");
        const auto b = hrcguard::compute_zone_boundaries(to_params(params), clearance);
        *out_inner = b.inner;
        *out_outer = b.outer;
    });
}

hg_status hg_classify_zone(double distance, double inner, double outer, hg_zone* out_zone) {
    return guard([&] {
        need(out_zone, "out_zone");
        const hrcguard::ZoneBoundaries b{inner, outer};
        b.validate();
        *out_zone = static_cast<hg_zone>(hrcguard::classify_zone(distance, b));
    });
}

hg_status hg_collision_time(double margin, double human_speed, double* out_seconds) {
    return guard([&] {
        need(out_seconds, "out_seconds");
        *out_seconds = hrcguard::collision_time(margin, human_speed);
    });
}

hg_status hg_compute_performance_level(int severity, int frequency, int avoidance,
                                       hg_performance_level* out_level) {
    return guard([&] {
        need(out_level, "out_level");
        for (int v : {severity, frequency, avoidance}) {
            hrcguard::require(v == 1 || v == 2, "hazard properties take the values 1 or 2");
        }
        hrcguard::HazardProperties h;
        h.severity = severity == 1 ? hrcguard::Severity::S1 : hrcguard::Severity::S2;
        h.frequency = frequency == 1 ? hrcguard::Frequency::F1 : hrcguard::Frequency::F2;
        h.avoidance = avoidance == 1 ? hrcguard::Avoidance::P1 : hrcguard::Avoidance::P2;
        *out_level = static_cast<hg_performance_level>(hrcguard::performance_level(h));
    });
}

const char* hg_zone_name(hg_zone zone) {
    if (zone < HG_ZONE_HIGH_RISK || zone > HG_ZONE_SAFE) return "unknown";
    return hrcguard::to_string(static_cast<hrcguard::SafetyZone>(zone)).data();
}

const char* hg_zone_color(hg_zone zone) {
    if (zone < HG_ZONE_HIGH_RISK || zone > HG_ZONE_SAFE) return "unknown";
    return hrcguard::zone_color(static_cast<hrcguard::SafetyZone>(zone)).data();
}

const char* hg_performance_level_name(hg_performance_level level) {
    if (level < HG_PL_A || level > HG_PL_E) return "unknown";
    return hrcguard::to_string(static_cast<hrcguard::PerformanceLevel>(level)).data();
}

double hg_default_reach_with_tool(void) { return hrcguard::RobotGeometry{}.reach_with_tool; }

hg_status hg_scenario_load(const char* path, hg_scenario** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = nullptr;
        auto s = std::make_unique<hg_scenario>();
        s->config = hrcguard::load_scenario(path);
        *out = s.release();
    });
}

hg_status hg_scenario_parse(const char* json_text, hg_scenario** out) {
    return guard([&] {
        need(json_text, "json_text");
        need(out, "out");
        *out = nullptr;
        auto s = std::make_unique<hg_scenario>();
        s->config = hrcguard::parse_scenario(json_text);
        *out = s.release();
    });
}

hg_status hg_scenario_set_seed(hg_scenario* scenario, uint64_t seed) {
    return guard([&] {
        need(scenario, "scenario");
        scenario->config.seed = seed;
    });
}

hg_status hg_scenario_set_mode(hg_scenario* scenario, const char* mode) {
    return guard([&] {
        need(scenario, "scenario");
        need(mode, "mode");
        const auto m = hrcguard::parse_mode(mode);
        if (!m) {
            hrcguard::fail(hrcguard::ErrorCode::InvalidArgument,
                           std::string("unknown mode '") + mode +
                               "' (static_ssm, dynamic_zones, obstacle_avoidance)");
        }
        scenario->config.monitor.mode = *m;
    });
}

hg_status hg_scenario_to_json(const hg_scenario* scenario, char** out_json) {
    return guard([&] {
        need(scenario, "scenario");
        need(out_json, "out_json");
        *out_json = dup_string(hrcguard::scenario_to_json(scenario->config).dump(2));
    });
}

void hg_scenario_free(hg_scenario* scenario) { delete scenario; }

hg_status hg_run_scenario(const hg_scenario* scenario, const char* out_dir,
                          hg_run_summary* out_summary, char** out_report_json,
                          char** out_event_log) {
    return guard([&] {
        need(scenario, "scenario");
        const hrcguard::RunResult result = hrcguard::run_scenario(scenario->config);
        if (out_dir) hrcguard::write_run_outputs(result, out_dir);
        if (out_summary) fill_summary(result.report, out_summary);
        if (out_report_json) {
            *out_report_json = dup_string(hrcguard::report_to_json(result.report).dump(2));
        }
        if (out_event_log) *out_event_log = dup_string(result.event_log);
    });
}

hg_status hg_render_report(const char* report_json, char** out_text) {
    return guard([&] {
        need(report_json, "report_json");
        need(out_text, "out_text");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(report_json);
        } catch (const nlohmann::json::exception& e) {
            hrcguard::fail(hrcguard::ErrorCode::Parse, std::string("malformed report: ") + e.what());
        }
        *out_text = dup_string(hrcguard::render_report_text(j));
    });
}

hg_status hg_simulator_create(const hg_scenario* scenario, hg_simulator** out) {
    return guard([&] {
        need(scenario, "scenario");
        need(out, "out");
        *out = nullptr;
        auto s = std::make_unique<hg_simulator>();
        s->sim = std::make_unique<hrcguard::Simulator>(scenario->config);
        *out = s.release();
    });
}

hg_status hg_simulator_step(hg_simulator* sim, long steps) {
    return guard([&] {
        need(sim, "sim");
        hrcguard::require(steps >= 0, "steps must be >= 0");
        sim->sim->run(steps);
    });
}

hg_status hg_simulator_control(hg_simulator* sim, const char* control_json) {
    return guard([&] {
        need(sim, "sim");
        need(control_json, "control_json");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(control_json);
        } catch (const nlohmann::json::exception& e) {
            hrcguard::fail(hrcguard::ErrorCode::Parse, std::string("malformed control: ") + e.what());
        }
        const hrcguard::ControlMessage msg = hrcguard::parse_control(j);
        if (msg.session_level()) {
            hrcguard::fail(hrcguard::ErrorCode::State,
                           "session controls are only available in a served session");
        }
        sim->sim->enqueue_control(msg);
    });
}

hg_status hg_simulator_telemetry(const hg_simulator* sim, char** out_json) {
    return guard([&] {
        need(sim, "sim");
        need(out_json, "out_json");
        const auto& events = sim->sim->events();
        const std::size_t n = std::min<std::size_t>(events.size(), 32);
        const std::span<const hrcguard::Event> tail(events.data() + events.size() - n, n);
        *out_json = dup_string(hrcguard::telemetry_snapshot(*sim->sim, false, tail).dump());
    });
}

hg_status hg_simulator_event_log(const hg_simulator* sim, char** out_jsonl) {
    return guard([&] {
        need(sim, "sim");
        need(out_jsonl, "out_jsonl");
        *out_jsonl = dup_string(sim->sim->event_log());
    });
}

hg_status hg_simulator_report(const hg_simulator* sim, char** out_report_json) {
    return guard([&] {
        need(sim, "sim");
        need(out_report_json, "out_report_json");
        *out_report_json =
            dup_string(hrcguard::report_to_json(hrcguard::build_report(*sim->sim)).dump(2));
    });
}

void hg_simulator_free(hg_simulator* sim) { delete sim; }

hg_status hg_server_start(const hg_scenario* scenario, const char* endpoint,
                          double realtime_factor, const char* static_dir, hg_server** out) {
    return guard([&] {
        need(scenario, "scenario");
        need(endpoint, "endpoint");
        need(out, "out");
        *out = nullptr;
        hrcguard::ServerOptions options = hrcguard::parse_endpoint(endpoint);
        options.realtime_factor = realtime_factor;
        if (static_dir) options.static_dir = std::filesystem::path(static_dir);
        auto s = std::make_unique<hg_server>();
        s->server = std::make_unique<hrcguard::Server>(scenario->config, options);
        s->server->start();
        *out = s.release();
    });
}

hg_status hg_server_port(const hg_server* server, int* out_port) {
    return guard([&] {
        need(server, "server");
        need(out_port, "out_port");
        *out_port = server->server->port();
    });
}

hg_status hg_server_stop(hg_server* server) {
    return guard([&] {
        need(server, "server");
        server->server->stop();
    });
}

void hg_server_free(hg_server* server) { delete server; }

}  // extern "C"
