/*
 * tracker.hpp
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

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "camera.hpp"
#include "geometry.hpp"

namespace hrcguard {

using KalmanVector = Eigen::Matrix<double, 7, 1>;
using KalmanMatrix = Eigen::Matrix<double, 7, 7>;

// Reference SORT magnitudes. The process noise on the scale velocity is the
// smallest term; aspect ratio carries no velocity.
struct KalmanNoise {
    Eigen::Vector4d measurement{1.0, 1.0, 10.0, 10.0};
    KalmanVector process = (KalmanVector() << 1.0, 1.0, 1.0, 1.0, 0.01, 0.01, 1e-4).finished();
    double initial_position_variance = 10.0;
    double initial_velocity_variance = 1e4;
};

struct TrackerConfig {
    int max_misses = 3;
    int min_hits = 1;
    double iou_threshold = 0.3;
    KalmanNoise noise;

    void validate() const;
};

/// Constant-velocity state over (u, v, s, r, du, dv, ds): box center in
/// pixels, area in px^2 and width/height aspect ratio.
struct TrackState {
    int id = 0;
    KalmanVector mean = KalmanVector::Zero();
    KalmanMatrix covariance = KalmanMatrix::Identity();
    int age = 0;     // frames since creation
    int hits = 0;    // consecutive matched frames
    int misses = 0;  // consecutive unmatched frames
    bool confirmed = false;
    double depth = 0.0;  // depth of the last matched detection

    static TrackState from_detection(int id, const Bbox& box, double depth, const KalmanNoise& noise);
    Bbox box() const;
};

/// Intersection over union; zero-area boxes yield 0.
double iou(const Bbox& a, const Bbox& b);

/// Kalman time update with the default process noise.
TrackState predict(const TrackState& track);
TrackState predict(const TrackState& track, const KalmanNoise& noise);

/// Kalman measurement update with an observed box.
TrackState correct(const TrackState& track, const Bbox& observed, const KalmanNoise& noise);

struct Association {
    std::vector<std::pair<std::size_t, std::size_t>> matches;  // (track, detection)
    std::vector<std::size_t> unmatched_tracks;
    std::vector<std::size_t> unmatched_detections;
};

/// Maximum total-IoU assignment restricted to pairs with IoU >= threshold.
Association associate(std::span<const Bbox> tracks, std::span<const Bbox> detections,
                      double threshold);

struct TrackReport {
    int track_id = 0;
    Bbox box;       // matched detection box, or the prediction when coasting
    double depth = 0.0;
    bool coasting = false;
    std::optional<std::size_t> detection;  // index into this frame's detections
};

/// SORT lifecycle. Single owner; advance once per frame.
class Tracker {
public:
    explicit Tracker(TrackerConfig config = {});

    std::vector<TrackReport> step(std::span<const Detection> detections);

    const std::vector<TrackState>& tracks() const { return tracks_; }
    const TrackerConfig& config() const { return config_; }
    void reset();

private:
    TrackerConfig config_;
    std::vector<TrackState> tracks_;
    int next_id_ = 1;
};

}  // namespace hrcguard
