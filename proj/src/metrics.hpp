/*
 * metrics.hpp
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

#include <array>
#include <optional>
#include <span>

#include "safety_math.hpp"

namespace hrcguard {

/// One-vs-rest counts for a single zone. Ratios with an empty denominator
/// are reported as 0.
struct ZoneCounts {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;

    long total() const { return tp + fp + tn + fn; }
    double accuracy() const;
    double precision() const;
    double recall() const;
    double fscore() const;
};

struct ZoneConfusion {
    std::array<ZoneCounts, 3> zones{};  // indexed by SafetyZone
    long samples = 0;

    const ZoneCounts& operator[](SafetyZone z) const {
        return zones[static_cast<std::size_t>(z)];
    }
};

/// Aligned per-sample zones. A missing prediction is a false negative for
/// the true zone and a true negative for the others.
ZoneConfusion compute_zone_metrics(std::span<const std::optional<SafetyZone>> predicted,
                                   std::span<const SafetyZone> truth);

}  // namespace hrcguard
