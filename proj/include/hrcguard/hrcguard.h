/*
 * hrcguard.h
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

/*
 * Public C interface of libhrcguard. All lengths are millimeters, speeds
 * mm/s, times seconds. Functions return hg_status; on failure
 * hg_last_error() describes the problem (thread-local, valid until the next
 * call on the same thread). Strings returned through char** are owned by the
 * caller and released with hg_string_free.
 */

#ifndef HRCGUARD_H
#define HRCGUARD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(HRCGUARD_BUILDING)
#define HG_API __declspec(dllexport)
#else
#define HG_API __declspec(dllimport)
#endif
#else
#define HG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define HG_API_VERSION 1

typedef enum hg_status {
    HG_OK = 0,
    HG_ERR_INVALID_ARGUMENT = 1,
    HG_ERR_STANDARD_VIOLATION = 2,
    HG_ERR_PARSE = 3,
    HG_ERR_IO = 4,
    HG_ERR_STATE = 5,
    HG_ERR_INTERNAL = 6
} hg_status;

typedef enum hg_zone { HG_ZONE_HIGH_RISK = 0, HG_ZONE_LOW_RISK = 1, HG_ZONE_SAFE = 2 } hg_zone;

typedef enum hg_performance_level {
    HG_PL_A = 0,
    HG_PL_B = 1,
    HG_PL_C = 2,
    HG_PL_D = 3,
    HG_PL_E = 4
} hg_performance_level;

typedef struct hg_scenario hg_scenario;
typedef struct hg_simulator hg_simulator;
typedef struct hg_server hg_server;

HG_API int hg_api_version(void);
HG_API const char* hg_version_string(void);
HG_API const char* hg_last_error(void);
HG_API void hg_string_free(char* str);

/* ---- safety math ---- */

typedef struct hg_ssm_params {
    double human_speed;
    double robot_speed;
    double reaction_time;
    double stop_time;
    double intrusion;
    double robot_uncertainty;
    double operator_uncertainty;
} hg_ssm_params;

HG_API void hg_ssm_params_default(hg_ssm_params* params);
HG_API hg_status hg_compute_msd(const hg_ssm_params* params, double* out_msd);
/* A clearance below 500 mm returns HG_ERR_STANDARD_VIOLATION. */
HG_API hg_status hg_zone_boundaries(const hg_ssm_params* params, double clearance,
                                    double* out_inner, double* out_outer);
HG_API hg_status hg_classify_zone(double distance, double inner, double outer, hg_zone* out_zone);
HG_API hg_status hg_collision_time(double margin, double human_speed, double* out_seconds);
/* severity, frequency, avoidance: 1 or 2 (S1/S2, F1/F2, P1/P2). */
HG_API hg_status hg_compute_performance_level(int severity, int frequency, int avoidance,
                                              hg_performance_level* out_level);
HG_API const char* hg_zone_name(hg_zone zone);
HG_API const char* hg_zone_color(hg_zone zone);
HG_API const char* hg_performance_level_name(hg_performance_level level);
/* Reach of the default robot with its gripper. */
HG_API double hg_default_reach_with_tool(void);

/* ---- scenarios ---- */

HG_API hg_status hg_scenario_load(const char* path, hg_scenario** out);
HG_API hg_status hg_scenario_parse(const char* json_text, hg_scenario** out);
HG_API hg_status hg_scenario_set_seed(hg_scenario* scenario, uint64_t seed);
/* "static_ssm", "dynamic_zones" or "obstacle_avoidance". */
HG_API hg_status hg_scenario_set_mode(hg_scenario* scenario, const char* mode);
/* Canonical JSON of the fully resolved scenario. */
HG_API hg_status hg_scenario_to_json(const hg_scenario* scenario, char** out_json);
HG_API void hg_scenario_free(hg_scenario* scenario);

typedef struct hg_run_summary {
    long steps;
    long collisions;
    long contacts;
    size_t reaction_samples;
    size_t reaction_gaps;
    double reaction_mean; /* NaN without samples */
    size_t stop_samples;
    size_t stop_gaps;
    double stop_mean;
    double stop_max;
    /* indexed by hg_zone */
    double accuracy[3];
    double precision[3];
    double recall[3];
    double fscore[3];
} hg_run_summary;

/* Runs to completion. With a non-NULL out_dir writes events.jsonl,
 * report.json and metrics.csv there. Any out pointer may be NULL. */
HG_API hg_status hg_run_scenario(const hg_scenario* scenario, const char* out_dir,
                                 hg_run_summary* out_summary, char** out_report_json,
                                 char** out_event_log);

/* Plain-text rendering of a report.json document. */
HG_API hg_status hg_render_report(const char* report_json, char** out_text);

/* ---- stepwise simulation ---- */

HG_API hg_status hg_simulator_create(const hg_scenario* scenario, hg_simulator** out);
HG_API hg_status hg_simulator_step(hg_simulator* sim, long steps);
/* Control JSON, e.g. {"type":"drag","id":1,"position":[900,0]}; applied at
 * the next step boundary. Session controls (pause, reset...) are refused. */
HG_API hg_status hg_simulator_control(hg_simulator* sim, const char* control_json);
HG_API hg_status hg_simulator_telemetry(const hg_simulator* sim, char** out_json);
HG_API hg_status hg_simulator_event_log(const hg_simulator* sim, char** out_jsonl);
HG_API hg_status hg_simulator_report(const hg_simulator* sim, char** out_report_json);
HG_API void hg_simulator_free(hg_simulator* sim);

/* ---- live telemetry server ---- */

/* endpoint: "host:port"; port 0 picks a free port. static_dir may be NULL. */
HG_API hg_status hg_server_start(const hg_scenario* scenario, const char* endpoint,
                                 double realtime_factor, const char* static_dir,
                                 hg_server** out);
HG_API hg_status hg_server_port(const hg_server* server, int* out_port);
HG_API hg_status hg_server_stop(hg_server* server);
HG_API void hg_server_free(hg_server* server);

#ifdef __cplusplus
}
#endif

#endif /* HRCGUARD_H */
