/*
 * test_tracker.cpp
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
#include <numeric>
#include <random>
#include <vector>

#include "assignment.hpp"
#include "doctest.h"
#include "tracker.hpp"

using namespace hrcguard;

namespace {

// Exhaustive search over every partial matching of tracks to detections,
// scoring total IoU over admissible pairs.
double brute_force_best(const std::vector<Bbox>& tracks, const std::vector<Bbox>& dets,
                        double threshold) {
    double best = 0.0;
    std::vector<int> pick(tracks.size(), -1);
    std::vector<bool> used(dets.size(), false);
    auto rec = [&](auto&& self, std::size_t t, double total) -> void {
        if (t == tracks.size()) {
            best = std::max(best, total);
            return;
        }
        self(self, t + 1, total);
        for (std::size_t d = 0; d < dets.size(); ++d) {
            if (used[d]) continue;
            const double s = iou(tracks[t], dets[d]);
            if (s < threshold) continue;
            used[d] = true;
            self(self, t + 1, total + s);
            used[d] = false;
        }
    };
    rec(rec, 0, 0.0);
    return best;
}

Bbox random_box(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> c(0.0, 200.0), s(20.0, 80.0);
    return Bbox::from_center(Vec2(c(rng), c(rng)), s(rng), s(rng));
}

Detection head_at(double u, double v, double size = 60.0) {
    Detection d;
    d.box = Bbox::from_center(Vec2(u, v), size, size);
    d.depth = 1750.0;
    return d;
}

}  // namespace

TEST_CASE("iou of known boxes") {
    const Bbox a{0, 0, 10, 10};
    const Bbox b{5, 0, 15, 10};
    CHECK(iou(a, b) == doctest::Approx(1.0 / 3.0));
    CHECK(iou(a, a) == doctest::Approx(1.0));
    CHECK(iou(a, Bbox{20, 20, 30, 30}) == 0.0);
    CHECK(iou(a, Bbox{0, 0, 0, 10}) == 0.0);
    CHECK(iou(a, b) == iou(b, a));
}

TEST_CASE("assignment matches brute force on small matrices") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> dim(1, 5);
    std::uniform_real_distribution<double> cost(0.0, 10.0);
    for (int n = 0; n < 500; ++n) {
        const int rows = dim(rng), cols = dim(rng);
        Eigen::MatrixXd m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = cost(rng);
        const auto a = solve_assignment(m);
        REQUIRE(a.size() == static_cast<std::size_t>(rows));
        double total = 0.0;
        int assigned = 0;
        std::vector<bool> used(cols, false);
        for (int i = 0; i < rows; ++i) {
            if (a[i] < 0) continue;
            REQUIRE_FALSE(used[a[i]]);
            used[a[i]] = true;
            total += m(i, a[i]);
            ++assigned;
        }
        REQUIRE(assigned == std::min(rows, cols));

        // enumerate injections from the smaller side
        double best = 1e18;
        if (rows <= cols) {
            std::vector<int> perm(cols);
            std::iota(perm.begin(), perm.end(), 0);
            do {
                double s = 0.0;
                for (int i = 0; i < rows; ++i) s += m(i, perm[i]);
                best = std::min(best, s);
            } while (std::next_permutation(perm.begin(), perm.end()));
        } else {
            std::vector<int> perm(rows);
            std::iota(perm.begin(), perm.end(), 0);
            do {
                double s = 0.0;
                for (int j = 0; j < cols; ++j) s += m(perm[j], j);
                best = std::min(best, s);
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        REQUIRE(total == doctest::Approx(best));
    }
}

TEST_CASE("gated association equals the brute-force optimum") {
    std::mt19937_64 rng(20260);
    std::uniform_int_distribution<int> dim(0, 4);
    for (int n = 0; n < 1000; ++n) {
        std::vector<Bbox> tracks(dim(rng)), dets(dim(rng));
        for (auto& b : tracks) b = random_box(rng);
        for (auto& b : dets) b = random_box(rng);
        const Association a = associate(tracks, dets, 0.3);
        double total = 0.0;
        for (const auto& [t, d] : a.matches) {
            REQUIRE(iou(tracks[t], dets[d]) >= 0.3);
            total += iou(tracks[t], dets[d]);
        }
        REQUIRE(a.matches.size() + a.unmatched_tracks.size() == tracks.size());
        REQUIRE(a.matches.size() + a.unmatched_detections.size() == dets.size());
        REQUIRE(total == doctest::Approx(brute_force_best(tracks, dets, 0.3)).epsilon(1e-12));
    }
}

TEST_CASE("kalman predict moves a track along its velocity") {
    TrackState t = TrackState::from_detection(1, Bbox::from_center(Vec2(100, 100), 40, 40), 1750.0,
                                              KalmanNoise{});
    for (int k = 1; k <= 5; ++k) {
        t = predict(t);
        t = correct(t, Bbox::from_center(Vec2(100 + 4.0 * k, 100), 40, 40), KalmanNoise{});
    }
    const TrackState p = predict(t);
    CHECK(p.box().center().x() > t.box().center().x());
    CHECK(p.box().center().y() == doctest::Approx(100.0).epsilon(0.01));
    CHECK(p.covariance.trace() > t.covariance.trace());
}

TEST_CASE("identity survives a three-frame dropout") {
    Tracker tracker(TrackerConfig{});
    int id = 0;
    double u = 200.0;
    for (int k = 0; k < 10; ++k, u += 3.0) {
        const Detection d[] = {head_at(u, 240.0)};
        const auto r = tracker.step(d);
        REQUIRE(r.size() == 1);
        if (k == 0) id = r[0].track_id;
        CHECK(r[0].track_id == id);
        CHECK_FALSE(r[0].coasting);
    }
    for (int k = 0; k < 3; ++k, u += 3.0) {
        const auto r = tracker.step({});
        REQUIRE(r.size() == 1);
        CHECK(r[0].track_id == id);
        CHECK(r[0].coasting);
        CHECK_FALSE(r[0].detection.has_value());
    }
    const Detection back[] = {head_at(u, 240.0)};
    const auto r = tracker.step(back);
    REQUIRE(r.size() == 1);
    CHECK(r[0].track_id == id);
    CHECK_FALSE(r[0].coasting);
    CHECK(r[0].box == back[0].box);
}

TEST_CASE("a fourth missed frame deletes the track") {
    Tracker tracker(TrackerConfig{});
    const Detection d[] = {head_at(300.0, 200.0)};
    const int id = tracker.step(d).at(0).track_id;
    for (int k = 0; k < 4; ++k) tracker.step({});
    CHECK(tracker.tracks().empty());
    const auto r = tracker.step(d);
    REQUIRE(r.size() == 1);
    CHECK(r[0].track_id != id);
}

TEST_CASE("two crossing-free operators keep their ids") {
    Tracker tracker(TrackerConfig{});
    int left = 0, right = 0;
    for (int k = 0; k < 30; ++k) {
        const Detection d[] = {head_at(400.0 - 2.0 * k, 200.0), head_at(100.0 + 2.0 * k, 300.0)};
        const auto r = tracker.step(d);
        REQUIRE(r.size() == 2);
        for (const auto& rep : r) {
            REQUIRE(rep.detection.has_value());
            int& slot = *rep.detection == 0 ? left : right;
            if (k == 0) slot = rep.track_id;
            CHECK(rep.track_id == slot);
        }
    }
    CHECK(left != right);
}

TEST_CASE("min_hits delays reporting") {
    TrackerConfig cfg;
    cfg.min_hits = 3;
    Tracker tracker(cfg);
    const Detection d[] = {head_at(300.0, 200.0)};
    CHECK(tracker.step(d).empty());
    CHECK(tracker.step(d).empty());
    CHECK(tracker.step(d).size() == 1);
}

TEST_CASE("invalid tracker config") {
    TrackerConfig cfg;
    cfg.iou_threshold = 1.5;
    CHECK_THROWS(Tracker{cfg});
    cfg = {};
    cfg.max_misses = -1;
    CHECK_THROWS(Tracker{cfg});
}
