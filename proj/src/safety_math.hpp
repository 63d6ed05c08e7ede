/*
 * safety_math.hpp
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
#include <optional>
#include <string_view>

namespace hrcguard {

/// Inputs of the speed-and-separation minimum distance. Distances in mm,
/// speeds in mm/s, times in s.
struct SsmParameters {
    double human_speed = 1600.0;     // ISO 13855 approach speed
    double robot_speed = 500.0;      // speed before the stop is triggered
    double reaction_time = 0.0283;
    double stop_time = 0.4;
    double intrusion = 0.0;          // C
    double robot_uncertainty = 0.0;  // Z_d
    double operator_uncertainty = 0.0;  // Z_r

    void validate() const;
};

/// Smallest low-risk band width accepted by ISO/TS 15066.
inline constexpr double kMinimumClearance = 500.0;
inline constexpr double kDefaultClearance = 750.0;

struct ZoneBoundaries {
    double inner = 0.0;  // S_a, high-risk boundary
    double outer = 0.0;  // S_b, low-risk boundary

    double clearance() const { return outer - inner; }
    void validate() const;
};

// Declaration order is the risk order: riskier zones compare smaller.
enum class SafetyZone : std::uint8_t { HighRisk = 0, LowRisk = 1, Safe = 2 };

std::string_view to_string(SafetyZone zone);
std::string_view zone_color(SafetyZone zone);
std::optional<SafetyZone> parse_zone(std::string_view text);

enum class Severity : std::uint8_t { S1, S2 };
enum class Frequency : std::uint8_t { F1, F2 };
enum class Avoidance : std::uint8_t { P1, P2 };

struct HazardProperties {
    Severity severity = Severity::S1;
    Frequency frequency = Frequency::F1;
    Avoidance avoidance = Avoidance::P1;
};

enum class PerformanceLevel : std::uint8_t { PLa, PLb, PLc, PLd, PLe };

std::string_view to_string(PerformanceLevel level);

/// Minimum separation distance S_a in mm. Throws on negative or non-finite
/// parameters.
double compute_msd(const SsmParameters& params);

/// S_a from compute_msd, S_b = S_a + clearance. A clearance below
/// kMinimumClearance is a StandardViolation.
ZoneBoundaries compute_zone_boundaries(const SsmParameters& params,
                                       double clearance = kDefaultClearance);

/// Both boundaries are inclusive on the riskier side.
SafetyZone classify_zone(double distance, const ZoneBoundaries& bounds);

/// Seconds for an operator at human_speed to close the given margin.
double collision_time(double margin, double human_speed);

/// ISO 13849 risk graph.
PerformanceLevel performance_level(const HazardProperties& hazard);

}  // namespace hrcguard
