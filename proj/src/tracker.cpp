/*
 * tracker.cpp
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

#include "tracker.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "assignment.hpp"
#include "error.hpp"

namespace hrcguard {

namespace {

using MeasurementMatrix = Eigen::Matrix<double, 4, 7>;

Eigen::Vector4d to_measurement(const Bbox& box) {
    const double w = box.width();
    const double h = box.height();
    return {box.center().x(), box.center().y(), w * h, w / h};
}

KalmanMatrix transition() {
    KalmanMatrix f = KalmanMatrix::Identity();
    f(0, 4) = 1.0;
    f(1, 5) = 1.0;
    f(2, 6) = 1.0;
    return f;
}

MeasurementMatrix observation() {
    MeasurementMatrix h = MeasurementMatrix::Zero();
    h.leftCols<4>().setIdentity();
    return h;
}

}  // namespace

void TrackerConfig::validate() const {
    require(max_misses >= 1, "tracker max_misses must be >= 1");
    require(min_hits >= 1, "tracker min_hits must be >= 1");
    require(iou_threshold >= 0.0 && iou_threshold <= 1.0, "tracker iou_threshold must be in [0,1]");
}

TrackState TrackState::from_detection(int id, const Bbox& box, double depth,
                                      const KalmanNoise& noise) {
    TrackState t;
    t.id = id;
    t.mean.head<4>() = to_measurement(box);
    t.covariance = KalmanMatrix::Zero();
    t.covariance.diagonal().head<4>().setConstant(noise.initial_position_variance);
    t.covariance.diagonal().tail<3>().setConstant(noise.initial_velocity_variance);
    t.hits = 1;
    t.depth = depth;
    return t;
}

Bbox TrackState::box() const {
    const double s = std::max(mean(2), 1e-9);
    const double r = std::max(mean(3), 1e-9);
    const double w = std::sqrt(s * r);
    return Bbox::from_center(mean.head<2>(), w, s / w);
}

double iou(const Bbox& a, const Bbox& b) {
    const double area_a = a.area();
    const double area_b = b.area();
    if (area_a <= 0.0 || area_b <= 0.0) return 0.0;
    const double iw = std::min(a.u_max, b.u_max) - std::max(a.u_min, b.u_min);
    const double ih = std::min(a.v_max, b.v_max) - std::max(a.v_min, b.v_min);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    return inter / (area_a + area_b - inter);
}

TrackState predict(const TrackState& track) { return predict(track, KalmanNoise{}); }

TrackState predict(const TrackState& track, const KalmanNoise& noise) {
    TrackState next = track;
    // Never let the predicted area collapse.
    if (next.mean(2) + next.mean(6) <= 0.0) next.mean(6) = 0.0;
    const KalmanMatrix f = transition();
    next.mean = f * next.mean;
    next.covariance = f * next.covariance * f.transpose();
    next.covariance.diagonal() += noise.process;
    ++next.age;
    return next;
}

TrackState correct(const TrackState& track, const Bbox& observed, const KalmanNoise& noise) {
    const MeasurementMatrix h = observation();
    const Eigen::Vector4d z = to_measurement(observed);
    const Eigen::Vector4d residual = z - h * track.mean;
    Eigen::Matrix4d s = h * track.covariance * h.transpose();
    s.diagonal() += noise.measurement;
    const Eigen::Matrix<double, 7, 4> gain =
        track.covariance * h.transpose() * s.ldlt().solve(Eigen::Matrix4d::Identity());

    TrackState next = track;
    next.mean += gain * residual;
    next.covariance = (KalmanMatrix::Identity() - gain * h) * track.covariance;
    next.covariance = 0.5 * (next.covariance + next.covariance.transpose()).eval();
    if (next.mean(2) <= 0.0) next.mean(2) = z(2);
    if (next.mean(3) <= 0.0) next.mean(3) = z(3);
    return next;
}

Association associate(std::span<const Bbox> tracks, std::span<const Bbox> detections,
                      double threshold) {
    Association out;
    if (tracks.empty() || detections.empty()) {
        for (std::size_t i = 0; i < tracks.size(); ++i) out.unmatched_tracks.push_back(i);
        for (std::size_t j = 0; j < detections.size(); ++j) out.unmatched_detections.push_back(j);
        return out;
    }

    // Pairs below the gate get zero weight, so the optimum over the gated
    // weights is the optimum over admissible matchings.
    Eigen::MatrixXd overlap(tracks.size(), detections.size());
    Eigen::MatrixXd cost(tracks.size(), detections.size());
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        for (std::size_t j = 0; j < detections.size(); ++j) {
            const double o = iou(tracks[i], detections[j]);
            overlap(i, j) = o;
            cost(i, j) = 1.0 - (o >= threshold ? o : 0.0);
        }
    }
    const std::vector<int> assigned = solve_assignment(cost);

    std::vector<bool> detection_used(detections.size(), false);
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        const int j = assigned[i];
        if (j >= 0 && overlap(i, j) >= threshold && overlap(i, j) > 0.0) {
            out.matches.emplace_back(i, static_cast<std::size_t>(j));
            detection_used[static_cast<std::size_t>(j)] = true;
        } else {
            out.unmatched_tracks.push_back(i);
        }
    }
    for (std::size_t j = 0; j < detections.size(); ++j) {
        if (!detection_used[j]) out.unmatched_detections.push_back(j);
    }
    return out;
}

Tracker::Tracker(TrackerConfig config) : config_(std::move(config)) { config_.validate(); }

void Tracker::reset() {
    tracks_.clear();
    next_id_ = 1;
}

std::vector<TrackReport> Tracker::step(std::span<const Detection> detections) {
    for (auto& t : tracks_) t = predict(t, config_.noise);

    std::vector<Bbox> predicted;
    predicted.reserve(tracks_.size());
    for (const auto& t : tracks_) predicted.push_back(t.box());
    std::vector<Bbox> observed;
    observed.reserve(detections.size());
    for (const auto& d : detections) observed.push_back(d.box);

    const Association assoc = associate(predicted, observed, config_.iou_threshold);

    std::vector<std::optional<std::size_t>> matched_detection(tracks_.size());
    for (const auto& [ti, di] : assoc.matches) {
        TrackState& t = tracks_[ti];
        t = correct(t, observed[di], config_.noise);
        t.depth = detections[di].depth;
        ++t.hits;
        t.misses = 0;
        matched_detection[ti] = di;
    }
    for (std::size_t ti : assoc.unmatched_tracks) {
        tracks_[ti].hits = 0;
        ++tracks_[ti].misses;
    }

    std::vector<TrackReport> reports;
    std::vector<TrackState> survivors;
    survivors.reserve(tracks_.size() + assoc.unmatched_detections.size());
    for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
        TrackState& t = tracks_[ti];
        if (t.misses > config_.max_misses) continue;
        if (t.hits >= config_.min_hits) t.confirmed = true;
        if (matched_detection[ti] && t.hits >= config_.min_hits) {
            reports.push_back({t.id, observed[*matched_detection[ti]], t.depth, false,
                               matched_detection[ti]});
        } else if (!matched_detection[ti] && t.confirmed) {
            reports.push_back({t.id, t.box(), t.depth, true, std::nullopt});
        }
        survivors.push_back(t);
    }
    for (std::size_t di : assoc.unmatched_detections) {
        TrackState t = TrackState::from_detection(next_id_++, observed[di], detections[di].depth,
                                                  config_.noise);
        if (t.hits >= config_.min_hits) {
            t.confirmed = true;
            reports.push_back({t.id, observed[di], t.depth, false, di});
        }
        survivors.push_back(t);
    }
    tracks_ = std::move(survivors);
    std::sort(reports.begin(), reports.end(),
              [](const TrackReport& a, const TrackReport& b) { return a.track_id < b.track_id; });
    return reports;
}

}  // namespace hrcguard
