/*
 * acceptance.cpp
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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "harness.hpp"
#include "replanner.hpp"
#include "simulator.hpp"
#include "tracker.hpp"

using namespace hrcguard;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

ScenarioConfig bundled(const std::string& name) {
    return load_scenario(fs::path(HRCGUARD_SCENARIO_DIR) / (name + ".json"));
}

std::vector<fs::path> bundled_paths() {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(HRCGUARD_SCENARIO_DIR)) {
        if (e.path().extension() == ".json") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Runs the CLI and returns its stdout.
std::string run_cli(const std::string& args, int& status) {
    const std::string cmd = std::string("\"") + HRCGUARD_CLI + "\" " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        status = -1;
        return {};
    }
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    status = pclose(pipe);
    return out;
}

Outcome msd_reproduction() {
    const auto t0 = Clock::now();
    int status = 0;
    const std::string out = run_cli("msd --json", status);
    const double elapsed = seconds_since(t0);
    if (status != 0) return {false, "cli exited with status " + std::to_string(status)};
    const auto j = nlohmann::json::parse(out);
    const double sa = j.at("s_a").get<double>(), sb = j.at("s_b").get<double>();
    const bool ok = std::abs(sa - 799.43) <= 0.01 && std::abs(sb - 1549.43) <= 0.01 && elapsed < 1.0;
    return {ok, fmt("S_a=%.2f mm", sa) + fmt(" S_b=%.2f mm", sb) + fmt(" in %.3f s", elapsed)};
}

Outcome collision_time_bound() {
    int status = 0;
    const std::string out = run_cli("msd --margin 137.2 --json", status);
    if (status != 0) return {false, "cli exited with status " + std::to_string(status)};
    const auto j = nlohmann::json::parse(out);
    const double t = j.at("t_collision").get<double>() * 1000.0;
    const double tr = j.at("reaction_time").get<double>() * 1000.0;
    const bool ok = std::abs(t - 85.8) <= 0.1 && t > tr && std::abs(tr - 28.3) < 1e-9;
    return {ok, fmt("t_collision=%.2f ms", t) + fmt(" > t_r=%.1f ms", tr)};
}

Outcome zones_noiseless() {
    const ScenarioConfig c = bundled("exp1_zones");
    if (c.noise.enabled()) return {false, "noise is enabled in exp1_zones"};
    const auto t0 = Clock::now();
    const RunResult r = run_scenario(c);
    const double elapsed = seconds_since(t0);
    bool ok = elapsed < 10.0;
    std::string detail;
    for (SafetyZone z : {SafetyZone::Safe, SafetyZone::LowRisk, SafetyZone::HighRisk}) {
        const ZoneCounts& k = r.report.zones[z];
        ok = ok && k.tp > 0 && k.accuracy() == 1.0 && k.precision() == 1.0 && k.recall() == 1.0;
        detail += std::string(zone_color(z)) + fmt(" %.3f/", k.accuracy()) +
                  fmt("%.3f/", k.precision()) + fmt("%.3f ", k.recall());
    }
    return {ok, detail + fmt("(acc/prec/rec) in %.2f s", elapsed)};
}

Outcome zones_noisy() {
    const ScenarioConfig c = bundled("exp1_zones_noisy");
    if (c.noise.border_miss_band <= 0.0) return {false, "border band disabled"};
    const RunResult r = run_scenario(c);
    const double g = r.report.zones[SafetyZone::Safe].recall();
    const double y = r.report.zones[SafetyZone::LowRisk].recall();
    const double red = r.report.zones[SafetyZone::HighRisk].recall();
    return {g < y && y < red,
            fmt("recall green %.3f", g) + fmt(" < yellow %.3f", y) + fmt(" < red %.3f", red)};
}

Outcome reaction_time() {
    const ScenarioConfig d = bundled("exp2_reaction");
    const LatencyModel def;
    if (d.latency.reaction_sum() != def.reaction_sum() || d.latency.per_operator_decision != 0.0) {
        return {false, "exp2_reaction does not use the default latency model"};
    }
    const RunResult rd = run_scenario(d);
    const auto& s = rd.report.reaction.samples;
    const double sum = d.latency.reaction_sum();
    const bool within = std::all_of(s.begin(), s.end(), [&](double v) {
        return std::abs(v - sum) <= d.dt + 1e-9;
    });
    const double m1 = run_scenario(bundled("exp2_reaction_calibrated")).report.reaction.mean().value_or(-1);
    const double m2 =
        run_scenario(bundled("exp2_reaction_calibrated_2p")).report.reaction.mean().value_or(-1);
    const auto in_range = [](double m) { return m >= 0.028 && m <= 0.060; };
    const bool ok = s.size() == 20 && rd.report.reaction.gaps == 0 && within && in_range(m1) &&
                    in_range(m2);
    return {ok, std::to_string(s.size()) + " samples" +
                    fmt(" within %.1f ms", d.dt * 1000.0) + fmt(" of %.1f ms", sum * 1000.0) +
                    fmt("; calibrated means %.1f ms", m1 * 1000.0) +
                    fmt(" (1 op) %.1f ms (2 ops)", m2 * 1000.0)};
}

Outcome stop_time() {
    const ScenarioConfig c = bundled("exp3_stop");
    const LatencyModel cal = LatencyModel::calibrated();
    if (c.latency.reaction_sum() != cal.reaction_sum() || c.latency.stop_ramp != cal.stop_ramp) {
        return {false, "exp3_stop does not use the calibrated profile"};
    }
    const RunResult r = run_scenario(c);
    const auto& s = r.report.stop.samples;
    const double worst = s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
    const bool ok = s.size() == 20 && r.report.stop.gaps == 0 && worst < 0.0858;
    return {ok, std::to_string(s.size()) + " samples" +
                    fmt(", mean %.1f ms", r.report.stop.mean().value_or(0) * 1000.0) +
                    fmt(", max %.1f ms < 85.8 ms", worst * 1000.0)};
}

Outcome no_collisions() {
    int scenarios = 0;
    long collisions = 0;
    for (const auto& p : bundled_paths()) {
        const ScenarioConfig c = load_scenario(p);
        if (c.monitor.mode != OperationMode::StaticSSM) continue;
        const bool switches = std::any_of(c.controls.begin(), c.controls.end(), [](const auto& s) {
            return s.msg.type == ControlType::SetMode && s.msg.mode != OperationMode::StaticSSM;
        });
        const bool fast = std::any_of(c.operators.begin(), c.operators.end(),
                                      [](const auto& o) { return o.speed > 1600.0; });
        if (switches || fast) continue;
        ++scenarios;
        collisions += run_scenario(c).report.collisions;
    }
    return {scenarios > 0 && collisions == 0,
            std::to_string(collisions) + " collisions across " + std::to_string(scenarios) +
                " static scenarios"};
}

Outcome mode_behavior() {
    const ZoneBoundaries b = compute_zone_boundaries(SsmParameters{});
    const Vec2 base = Vec2::Zero();
    auto op_at = [&](double x, double y) {
        return make_operator_estimate(1, Vec2(x, y), 1700.0, base, b);
    };
    const OperatorEstimate safe[] = {op_at(2000, 0)}, low[] = {op_at(1200, 0)},
                           high[] = {op_at(700, 0)}, at_wrist[] = {op_at(330, 50)},
                           at_elbow[] = {op_at(-180, 0)};
    const Vec2 elbow(20, 0), wrist(180, 50);
    bool ok = true;
    ok &= static_ssm_command(safe, b).fraction == 1.0 && static_ssm_command(low, b).fraction == 0.5;
    ok &= static_ssm_command(high, b).fraction == 0.0 && static_ssm_command(high, b).stop;
    ok &= dynamic_zones_command(safe, b, elbow, wrist, 200).fraction == 1.0;
    ok &= dynamic_zones_command(low, b, elbow, wrist, 200).fraction == 0.5;
    ok &= dynamic_zones_command(high, b, elbow, wrist, 200).fraction == 0.25;
    ok &= !dynamic_zones_command(high, b, elbow, wrist, 200).stop;
    ok &= dynamic_zones_command(at_wrist, b, elbow, wrist, 200).stop;
    ok &= dynamic_zones_command(at_elbow, b, elbow, wrist, 200).stop;  // exactly 200 mm
    ok &= obstacle_avoidance_command(safe, b).fraction == 1.0;
    ok &= obstacle_avoidance_command(low, b).fraction == 0.5;
    const SpeedCommand oa = obstacle_avoidance_command(high, b);
    ok &= oa.fraction == 0.1 && oa.replan_required && !oa.stop;
    const bool tables = ok;

    const ScenarioConfig c = bundled("obstacle_avoidance");
    Simulator sim(c);
    sim.run_to_end();
    long stops = 0;
    for (const auto& e : sim.events()) stops += e.type == "stop_begin" || e.type == "stopped";
    int checked = 0, detours = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& rec : sim.plans()) {
        if (rec.plan.status == DetourPlan::Status::Hold) continue;
        ++checked;
        if (rec.plan.status == DetourPlan::Status::Detour) ++detours;
        for (std::size_t i = 1; i < rec.plan.path.size(); ++i) {
            const Vec2 d = rec.plan.path[i] - rec.plan.path[i - 1];
            const int n = std::max(1, static_cast<int>(std::ceil(d.norm())));
            for (int k = 0; k <= n; ++k) {
                const Vec2 p = rec.plan.path[i - 1] + d * (static_cast<double>(k) / n);
                for (const auto& cy : rec.cylinders) {
                    worst = std::min(worst, (p - cy.center).norm() - cy.radius);
                }
            }
        }
    }
    ok = ok && stops == 0 && detours > 0 && worst >= c.replan_margin - 1e-6 &&
         sim.collisions() == 0;
    return {ok, std::string("speed tables ") + (tables ? "ok" : "WRONG") + "; avoidance: " +
                    std::to_string(stops) + " stop events, " + std::to_string(checked) +
                    " plans (" + std::to_string(detours) + " detours)" +
                    fmt(", min clearance %.1f mm", worst) +
                    fmt(" >= %.0f mm", c.replan_margin)};
}

double brute_force_iou(const std::vector<Bbox>& tracks, const std::vector<Bbox>& dets,
                       double threshold) {
    double best = 0.0;
    std::vector<bool> used(dets.size(), false);
    std::function<void(std::size_t, double)> rec = [&](std::size_t t, double total) {
        if (t == tracks.size()) {
            best = std::max(best, total);
            return;
        }
        rec(t + 1, total);
        for (std::size_t d = 0; d < dets.size(); ++d) {
            const double s = iou(tracks[t], dets[d]);
            if (used[d] || s < threshold) continue;
            used[d] = true;
            rec(t + 1, total + s);
            used[d] = false;
        }
    };
    rec(0, 0.0);
    return best;
}

Outcome tracker_oracle() {
    std::mt19937_64 rng(20260);
    std::uniform_int_distribution<int> dim(0, 4);
    std::uniform_real_distribution<double> c(0.0, 200.0), s(20.0, 80.0);
    int agree = 0;
    for (int n = 0; n < 1000; ++n) {
        std::vector<Bbox> tracks(dim(rng)), dets(dim(rng));
        for (auto& b : tracks) b = Bbox::from_center(Vec2(c(rng), c(rng)), s(rng), s(rng));
        for (auto& b : dets) b = Bbox::from_center(Vec2(c(rng), c(rng)), s(rng), s(rng));
        const Association a = associate(tracks, dets, 0.3);
        double total = 0.0;
        bool gated = true;
        for (const auto& [t, d] : a.matches) {
            gated = gated && iou(tracks[t], dets[d]) >= 0.3;
            total += iou(tracks[t], dets[d]);
        }
        if (gated && std::abs(total - brute_force_iou(tracks, dets, 0.3)) < 1e-9) ++agree;
    }

    Tracker tracker;
    auto det = [](double u) {
        Detection d;
        d.box = Bbox::from_center(Vec2(u, 240.0), 66.0, 66.0);
        d.depth = 1750.0;
        return d;
    };
    bool kept = true;
    int id = -1;
    double u = 150.0;
    for (int k = 0; k < 40; ++k, u += 4.0) {
        const bool dropped = (k % 8) >= 5;  // three missing frames out of every eight
        std::vector<Detection> ds;
        if (!dropped) ds.push_back(det(u));
        const auto r = tracker.step(ds);
        if (r.size() != 1) {
            kept = false;
            break;
        }
        if (id < 0) id = r[0].track_id;
        kept = kept && r[0].track_id == id && r[0].coasting == dropped;
    }
    return {agree == 1000 && kept, std::to_string(agree) + "/1000 assignments optimal; identity " +
                                       (kept ? "kept" : "LOST") + " through 3-frame dropouts"};
}

struct M4 {
    double m[4][4];
};

M4 mul(const M4& a, const M4& b) {
    M4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) r.m[i][j] += a.m[i][k] * b.m[k][j];
    return r;
}

Outcome fk_oracle() {
    const double k = 0.849, pi = 3.14159265358979323846;
    const double d[6] = {151.9, 0, 0, 112.35 * k, 85.35 * k, 81.9 * k};
    const double a[6] = {0, -243.65 * k, -213.25 * k, 0, 0, 0};
    const double al[6] = {pi / 2, 0, 0, pi / 2, -pi / 2, 0};
    const Vec3 base(0, 0, 750);
    const RobotGeometry g = RobotGeometry::ur3(base);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> angle(-2 * pi, 2 * pi);
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
        JointVector q{};
        for (double& v : q) v = angle(rng);
        M4 t{{{1, 0, 0, base.x()}, {0, 1, 0, base.y()}, {0, 0, 1, base.z()}, {0, 0, 0, 1}}};
        for (int i = 0; i < 6; ++i) {
            const double ct = std::cos(q[i]), st = std::sin(q[i]);
            const double ca = std::cos(al[i]), sa = std::sin(al[i]);
            t = mul(t, M4{{{ct, -st * ca, st * sa, a[i] * ct},
                           {st, ct * ca, -ct * sa, a[i] * st},
                           {0, sa, ca, d[i]},
                           {0, 0, 0, 1}}});
        }
        const Vec3 flange(t.m[0][3], t.m[1][3], t.m[2][3]);
        const Vec3 tcp = flange + 162.8 * Vec3(t.m[0][2], t.m[1][2], t.m[2][2]);
        const ArmPoints p = forward_kinematics(g, q);
        worst = std::max({worst, (p.flange - flange).norm(), (p.tcp - tcp).norm()});
    }
    double reach = 0.0, reach_tool = 0.0;
    const Vec3 origin = g.reach_origin();
    for (int n = 0; n < 100000; ++n) {
        JointVector q{};
        for (double& v : q) v = angle(rng);
        const ArmPoints p = forward_kinematics(g, q);
        reach = std::max(reach, (p.flange - origin).norm());
        reach_tool = std::max(reach_tool, (p.tcp - origin).norm());
    }
    const bool ok = worst <= 1e-6 && reach <= 500.0 && reach_tool <= 662.8;
    return {ok, fmt("max deviation %.2e mm over 100 configurations", worst) +
                    fmt("; sampled reach %.1f", reach) + fmt("/%.1f mm", reach_tool) +
                    " within 500/662.8"};
}

Outcome determinism() {
    int same = 0, total = 0;
    for (const auto& p : bundled_paths()) {
        const ScenarioConfig c = load_scenario(p);
        ++total;
        if (run_scenario(c).event_log == run_scenario(c).event_log) ++same;
    }
    return {total > 0 && same == total,
            std::to_string(same) + "/" + std::to_string(total) + " scenarios byte-identical"};
}

}  // namespace

int main() {
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"msd-reproduction", msd_reproduction},
        {"collision-time-bound", collision_time_bound},
        {"zone-classifier-noiseless", zones_noiseless},
        {"zone-classifier-noisy", zones_noisy},
        {"reaction-time", reaction_time},
        {"stop-time", stop_time},
        {"no-collision-suite", no_collisions},
        {"mode-behavior", mode_behavior},
        {"tracker-oracle", tracker_oracle},
        {"fk-oracle", fk_oracle},
        {"determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << '\n';
        failed += !o.pass;
    }
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << failed << " of "
              << std::size(criteria) << " criteria failing\n";
    return failed ? 1 : 0;
}
