/*
 * metrics.cpp
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

#include "metrics.hpp"

#include "error.hpp"

namespace hrcguard {

namespace {

double ratio(long num, long den) {
    return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

}  // namespace

double ZoneCounts::accuracy() const { return ratio(tp + tn, total()); }
double ZoneCounts::precision() const { return ratio(tp, tp + fp); }
double ZoneCounts::recall() const { return ratio(tp, tp + fn); }

double ZoneCounts::fscore() const {
    const double p = precision();
    const double r = recall();
    return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

ZoneConfusion compute_zone_metrics(std::span<const std::optional<SafetyZone>> predicted,
                                   std::span<const SafetyZone> truth) {
    require(predicted.size() == truth.size(),
            "predicted and truth sequences differ in length (" + std::to_string(predicted.size()) +
                " vs " + std::to_string(truth.size()) + ")");
    ZoneConfusion out;
    out.samples = static_cast<long>(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        for (std::size_t z = 0; z < out.zones.size(); ++z) {
            const auto zone = static_cast<SafetyZone>(z);
            const bool is_true = truth[i] == zone;
            const bool is_pred = predicted[i] == zone;
            ZoneCounts& c = out.zones[z];
            if (is_true && is_pred) {
                ++c.tp;
            } else if (is_pred) {
                ++c.fp;
            } else if (is_true) {
                ++c.fn;
            } else {
                ++c.tn;
            }
        }
    }
    return out;
}

}  // namespace hrcguard
