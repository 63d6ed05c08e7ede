/*
 * test_capi.cpp
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <hrcguard/hrcguard.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

namespace {

std::string scenario_path(const char* name) {
    return std::string(HRCGUARD_SCENARIO_DIR) + "/" + name + ".json";
}

// Takes ownership of a library string.
std::string take(char* s) {
    std::string out = s ? s : "";
    hg_string_free(s);
    return out;
}

}  // namespace

TEST_CASE("version") {
    CHECK(hg_api_version() == HG_API_VERSION);
    CHECK(std::string(hg_version_string()).find("hrcguard") == 0);
}

TEST_CASE("safety math through the C boundary") {
    hg_ssm_params p;
    hg_ssm_params_default(&p);
    double msd = 0.0;
    REQUIRE(hg_compute_msd(&p, &msd) == HG_OK);
    CHECK(msd == doctest::Approx(799.43));

    double inner = 0.0, outer = 0.0;
    REQUIRE(hg_zone_boundaries(&p, 750.0, &inner, &outer) == HG_OK);
    CHECK(outer == doctest::Approx(1549.43));
    CHECK(hg_zone_boundaries(&p, 300.0, &inner, &outer) == HG_ERR_STANDARD_VIOLATION);
    CHECK(std::string(hg_last_error()).find("500") != std::string::npos);

    hg_zone z;
    REQUIRE(hg_classify_zone(inner, inner, outer, &z) == HG_OK);
    CHECK(z == HG_ZONE_HIGH_RISK);
    REQUIRE(hg_classify_zone(1000.0, inner, outer, &z) == HG_OK);
    CHECK(z == HG_ZONE_LOW_RISK);
    CHECK(std::string(hg_zone_color(z)) == "yellow");
    CHECK(std::string(hg_zone_name(HG_ZONE_SAFE)) == "safe");

    double t = 0.0;
    REQUIRE(hg_collision_time(137.2, 1600.0, &t) == HG_OK);
    CHECK(t == doctest::Approx(0.08575));
    CHECK(hg_collision_time(137.2, 0.0, &t) == HG_ERR_INVALID_ARGUMENT);
    CHECK(hg_default_reach_with_tool() == doctest::Approx(662.8));

    hg_performance_level pl;
    REQUIRE(hg_compute_performance_level(1, 2, 2, &pl) == HG_OK);
    CHECK(pl == HG_PL_C);
    CHECK(std::string(hg_performance_level_name(pl)) == "PLc");
    CHECK(hg_compute_performance_level(3, 1, 1, &pl) == HG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("null arguments are rejected, not dereferenced") {
    double msd;
    CHECK(hg_compute_msd(nullptr, &msd) == HG_ERR_INVALID_ARGUMENT);
    hg_scenario* s = nullptr;
    CHECK(hg_scenario_load(nullptr, &s) == HG_ERR_INVALID_ARGUMENT);
    CHECK(hg_simulator_step(nullptr, 1) == HG_ERR_INVALID_ARGUMENT);
    hg_scenario_free(nullptr);
    hg_simulator_free(nullptr);
    hg_server_free(nullptr);
    hg_string_free(nullptr);
}

TEST_CASE("scenario errors map to status codes") {
    hg_scenario* s = nullptr;
    CHECK(hg_scenario_load("/nonexistent.json", &s) == HG_ERR_IO);
    CHECK(s == nullptr);
    CHECK(hg_scenario_parse("{\"seed\": }", &s) == HG_ERR_PARSE);
    CHECK(std::string(hg_last_error()).find("syntax error") != std::string::npos);
    CHECK(hg_scenario_parse("{\"bogus\": 1}", &s) == HG_ERR_PARSE);
    REQUIRE(hg_scenario_parse("{\"duration\": 1}", &s) == HG_OK);
    CHECK(hg_scenario_set_mode(s, "warp") == HG_ERR_INVALID_ARGUMENT);
    CHECK(hg_scenario_set_mode(s, "obstacle_avoidance") == HG_OK);
    char* text = nullptr;
    REQUIRE(hg_scenario_to_json(s, &text) == HG_OK);
    CHECK(take(text).find("\"obstacle_avoidance\"") != std::string::npos);
    hg_scenario_free(s);
}

TEST_CASE("batch run") {
    hg_scenario* s = nullptr;
    REQUIRE(hg_scenario_load(scenario_path("exp1_zones").c_str(), &s) == HG_OK);
    const auto dir = std::filesystem::temp_directory_path() / "hrcguard_capi_run";
    std::filesystem::remove_all(dir);
    hg_run_summary sum;
    char* report = nullptr;
    char* log = nullptr;
    REQUIRE(hg_run_scenario(s, dir.string().c_str(), &sum, &report, &log) == HG_OK);
    CHECK(sum.steps == 2400);
    CHECK(sum.collisions == 0);
    for (int z = 0; z < 3; ++z) CHECK(sum.recall[z] == 1.0);
    CHECK(std::filesystem::exists(dir / "events.jsonl"));
    CHECK(std::filesystem::exists(dir / "report.json"));
    CHECK(std::filesystem::exists(dir / "metrics.csv"));

    char* text = nullptr;
    REQUIRE(hg_render_report(report, &text) == HG_OK);
    CHECK(take(text).find("exp1_zones") != std::string::npos);
    take(report);

    // same seed, same bytes
    char* again = nullptr;
    REQUIRE(hg_run_scenario(s, nullptr, nullptr, nullptr, &again) == HG_OK);
    CHECK(take(again) == take(log));
    hg_scenario_free(s);
    std::filesystem::remove_all(dir);
}

TEST_CASE("stepwise simulator") {
    hg_scenario* s = nullptr;
    REQUIRE(hg_scenario_load(scenario_path("ssm_walk_in").c_str(), &s) == HG_OK);
    hg_simulator* sim = nullptr;
    REQUIRE(hg_simulator_create(s, &sim) == HG_OK);
    hg_scenario_free(s);  // the simulator keeps its own copy
    REQUIRE(hg_simulator_step(sim, 10) == HG_OK);
    CHECK(hg_simulator_step(sim, -1) == HG_ERR_INVALID_ARGUMENT);
    CHECK(hg_simulator_control(sim, "{\"type\":\"pause\"}") == HG_ERR_STATE);
    CHECK(hg_simulator_control(sim, "{\"type\":\"drag\"}") == HG_ERR_PARSE);
    CHECK(hg_simulator_control(sim, "not json") == HG_ERR_PARSE);
    REQUIRE(hg_simulator_control(sim, "{\"type\":\"drag\",\"id\":2,\"position\":[500,0]}") == HG_OK);
    REQUIRE(hg_simulator_step(sim, 1) == HG_OK);

    char* tel = nullptr;
    REQUIRE(hg_simulator_telemetry(sim, &tel) == HG_OK);
    const std::string t = take(tel);
    CHECK(t.find("\"step\":11") != std::string::npos);
    CHECK(t.find("\"version\":1") != std::string::npos);

    char* log = nullptr;
    REQUIRE(hg_simulator_event_log(sim, &log) == HG_OK);
    CHECK(take(log).find("\"type\":\"control\"") != std::string::npos);

    char* rep = nullptr;
    REQUIRE(hg_simulator_report(sim, &rep) == HG_OK);
    CHECK(take(rep).find("\"steps\": 11") != std::string::npos);
    hg_simulator_free(sim);
}

TEST_CASE("server lifecycle") {
    hg_scenario* s = nullptr;
    REQUIRE(hg_scenario_load(scenario_path("empty").c_str(), &s) == HG_OK);
    hg_server* server = nullptr;
    CHECK(hg_server_start(s, "127.0.0.1:notaport", 1.0, nullptr, &server) ==
          HG_ERR_INVALID_ARGUMENT);
    CHECK(hg_server_start(s, "127.0.0.1:0", 0.0, nullptr, &server) == HG_ERR_INVALID_ARGUMENT);
    REQUIRE(hg_server_start(s, "127.0.0.1:0", 1.0, nullptr, &server) == HG_OK);
    int port = 0;
    REQUIRE(hg_server_port(server, &port) == HG_OK);
    CHECK(port > 0);
    CHECK(hg_server_stop(server) == HG_OK);
    CHECK(hg_server_stop(server) == HG_OK);
    hg_server_free(server);
    hg_scenario_free(s);
}
