/*
 * test_monitor.cpp
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

#include <random>
#include <vector>

#include "doctest.h"
#include "monitor.hpp"

using namespace hrcguard;

namespace {

const ZoneBoundaries kBounds{800.0, 1550.0};

OperatorEstimate at(int id, double x, double y = 0.0) {
    return make_operator_estimate(id, Vec2(x, y), 1700.0, Vec2::Zero(), kBounds);
}

ArmPoints arm_with(const Vec2& elbow, const Vec2& wrist) {
    ArmPoints a;
    a.elbow = Vec3(elbow.x(), elbow.y(), 1100.0);
    a.wrist = Vec3(wrist.x(), wrist.y(), 1150.0);
    a.tcp = Vec3(230.0, 0.0, 970.0);
    return a;
}

}  // namespace

TEST_CASE("governing operator is the closest, ties to the lowest id") {
    const std::vector<OperatorEstimate> ops{at(4, 1000.0), at(2, 0.0, 1000.0), at(3, 1200.0)};
    CHECK(governing_operator(ops)->track_id == 2);
    CHECK_FALSE(governing_operator(std::vector<OperatorEstimate>{}).has_value());
}

TEST_CASE("static ssm speed table") {
    CHECK(static_ssm_command({}, kBounds).fraction == 1.0);
    const OperatorEstimate safe[] = {at(1, 2000.0)};
    const OperatorEstimate low[] = {at(1, 1200.0)};
    const OperatorEstimate high[] = {at(1, 500.0)};
    CHECK(static_ssm_command(safe, kBounds).fraction == 1.0);
    CHECK(static_ssm_command(low, kBounds).fraction == 0.5);
    const SpeedCommand stop = static_ssm_command(high, kBounds);
    CHECK(stop.fraction == 0.0);
    CHECK(stop.stop);
    CHECK(stop.governing_zone == SafetyZone::HighRisk);
    CHECK_FALSE(stop.replan_required);
}

TEST_CASE("dynamic zones speed table and joint stop") {
    const Vec2 elbow(20.0, 0.0), wrist(180.0, 50.0);
    const OperatorEstimate low[] = {at(1, 1200.0)};
    CHECK(dynamic_zones_command(low, kBounds, elbow, wrist, 200.0).fraction == 0.5);
    const OperatorEstimate high[] = {at(1, 700.0)};
    const SpeedCommand slow = dynamic_zones_command(high, kBounds, elbow, wrist, 200.0);
    CHECK(slow.fraction == 0.25);
    CHECK_FALSE(slow.stop);

    // 150 mm from the wrist
    const OperatorEstimate near_wrist[] = {at(1, 330.0, 50.0)};
    CHECK(dynamic_zones_command(near_wrist, kBounds, elbow, wrist, 200.0).stop);
    // exactly 200 mm from the elbow is inclusive
    const OperatorEstimate on_elbow[] = {at(1, -180.0, 0.0)};
    CHECK(dynamic_zones_command(on_elbow, kBounds, elbow, wrist, 200.0).stop);
    const OperatorEstimate off_elbow[] = {at(1, -180.5, 0.0)};
    CHECK_FALSE(dynamic_zones_command(off_elbow, kBounds, elbow, wrist, 200.0).stop);
}

TEST_CASE("dynamic zones: a non-governing operator near a joint still stops") {
    const Vec2 elbow(20.0, 0.0), wrist(180.0, 50.0);
    const OperatorEstimate ops[] = {at(1, 0.0, 600.0), at(2, 180.0, 200.0)};
    CHECK(dynamic_zones_command(ops, kBounds, elbow, wrist, 200.0).stop);
}

TEST_CASE("obstacle avoidance speed table") {
    const OperatorEstimate low[] = {at(1, 1200.0)};
    const SpeedCommand l = obstacle_avoidance_command(low, kBounds);
    CHECK(l.fraction == 0.5);
    CHECK_FALSE(l.replan_required);
    const OperatorEstimate high[] = {at(1, 300.0)};
    const SpeedCommand h = obstacle_avoidance_command(high, kBounds);
    CHECK(h.fraction == 0.1);
    CHECK(h.replan_required);
    CHECK_FALSE(h.stop);
}

TEST_CASE("commands never speed up as an operator approaches") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> d(0.0, 2500.0);
    const ArmPoints arm = arm_with(Vec2(20.0, 0.0), Vec2(180.0, 50.0));
    for (OperationMode mode : {OperationMode::StaticSSM, OperationMode::DynamicZones,
                               OperationMode::ObstacleAvoidance}) {
        SafetyMonitor monitor({mode}, kBounds);
        for (int i = 0; i < 500; ++i) {
            double a = d(rng), b = d(rng);
            if (a > b) std::swap(a, b);
            const OperatorEstimate near[] = {at(1, 0.0, -a)};
            const OperatorEstimate far[] = {at(1, 0.0, -b)};
            REQUIRE(monitor.raw_command(near, arm).fraction <=
                    monitor.raw_command(far, arm).fraction);
        }
    }
}

TEST_CASE("dwell filter delays relaxations only") {
    MonitorConfig cfg;
    cfg.dwell_time = 0.5;
    SafetyMonitor monitor(cfg, kBounds);
    const ArmPoints arm = arm_with(Vec2::Zero(), Vec2::Zero());
    const OperatorEstimate low[] = {at(1, 1200.0)};
    const OperatorEstimate safe[] = {at(1, 2000.0)};
    const OperatorEstimate high[] = {at(1, 500.0)};
    CHECK(monitor.evaluate(safe, arm, 0.0).fraction == 1.0);
    CHECK(monitor.evaluate(low, arm, 0.1).fraction == 0.5);
    CHECK(monitor.evaluate(high, arm, 0.2).stop);
    CHECK(monitor.evaluate(safe, arm, 0.3).stop);
    CHECK(monitor.evaluate(safe, arm, 0.6).stop);
    CHECK(monitor.evaluate(safe, arm, 0.81).fraction == 1.0);
}

TEST_CASE("mode switch changes the table") {
    SafetyMonitor monitor({}, kBounds);
    const ArmPoints arm = arm_with(Vec2(20.0, 0.0), Vec2(180.0, 50.0));
    const OperatorEstimate high[] = {at(1, 700.0)};
    CHECK(monitor.evaluate(high, arm, 0.0).stop);
    monitor.set_mode(OperationMode::DynamicZones);
    CHECK(monitor.evaluate(high, arm, 0.1).fraction == 0.25);
    monitor.set_mode(OperationMode::ObstacleAvoidance);
    CHECK(monitor.evaluate(high, arm, 0.2).fraction == 0.1);
}

TEST_CASE("collision set follows reported tracks") {
    CollisionSet set(300.0);
    const std::vector<OperatorEstimate> two{at(1, 500.0), at(2, 1300.0, 300.0)};
    const auto& c = set.update(two);
    REQUIRE(c.size() == 2);
    CHECK(c[0].track_id != c[1].track_id);
    CHECK(c[0].zone == SafetyZone::HighRisk);
    CHECK(c[1].zone == SafetyZone::LowRisk);
    CHECK(c[0].radius == 300.0);
    CHECK(c[0].height == 1700.0);
    const std::vector<OperatorEstimate> one{at(2, 1300.0, 300.0)};
    REQUIRE(set.update(one).size() == 1);
    CHECK(set.cylinders()[0].track_id == 2);
    CHECK(set.update({}).empty());
}

TEST_CASE("mode names") {
    CHECK(to_string(OperationMode::DynamicZones) == "dynamic_zones");
    CHECK(parse_mode("obstacle_avoidance") == OperationMode::ObstacleAvoidance);
    CHECK_FALSE(parse_mode("fast").has_value());
}
