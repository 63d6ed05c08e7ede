/*
 * test_camera.cpp
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

#include <cmath>
#include <random>

#include "camera.hpp"
#include "doctest.h"
#include "error.hpp"

using namespace hrcguard;

TEST_CASE("overhead intrinsics cover the requested footprint") {
    const CameraModel cam = CameraModel::overhead();
    CHECK(cam.fx == doctest::Approx(640.0 * 3450.0 / 4200.0));
    CHECK(cam.fy == doctest::Approx(480.0 * 3450.0 / 3100.0));
    CHECK(cam.cx == doctest::Approx(320.0));
    CHECK(cam.cy == doctest::Approx(240.0));
    CHECK(cam.mount_height == doctest::Approx(3450.0));

    const PixelDepth below = world_to_pixel(cam, Vec3(0.0, 0.0, 0.0));
    CHECK(below.u == doctest::Approx(320.0));
    CHECK(below.v == doctest::Approx(240.0));
    CHECK(below.depth == doctest::Approx(3450.0));

    // floor corners land on the image border
    const PixelDepth edge_x = world_to_pixel(cam, Vec3(2100.0, 0.0, 0.0));
    CHECK(std::abs(edge_x.u - 320.0) == doctest::Approx(320.0));
    const PixelDepth edge_y = world_to_pixel(cam, Vec3(0.0, 1550.0, 0.0));
    CHECK(std::abs(edge_y.v - 240.0) == doctest::Approx(240.0));
}

TEST_CASE("projection and back-projection round trip") {
    const CameraModel cam = CameraModel::overhead(Vec3(900.0, -150.0, 3450.0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> xy(-2500.0, 2500.0), z(0.0, 3000.0);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 p(xy(rng), xy(rng), z(rng));
        const PixelDepth px = world_to_pixel(cam, p);
        const Vec3 back = pixel_depth_to_world(cam, px.u, px.v, px.depth);
        REQUIRE((back - p).norm() < 1e-9);
    }
}

TEST_CASE("head detection recovers floor position and height") {
    const CameraModel cam = CameraModel::overhead(Vec3(900.0, 0.0, 3450.0));
    const Vec3 head(1234.0, -321.0, 1750.0);
    const PixelDepth px = world_to_pixel(cam, head);
    Detection det;
    det.box = Bbox::from_center(Vec2(px.u, px.v), 60.0, 60.0);
    det.depth = px.depth;
    const OperatorObservation obs = estimate_operator(cam, det);
    CHECK(obs.position.x() == doctest::Approx(1234.0));
    CHECK(obs.position.y() == doctest::Approx(-321.0));
    CHECK(obs.height == doctest::Approx(1750.0));
}

TEST_CASE("points behind the camera are rejected") {
    const CameraModel cam = CameraModel::overhead();
    CHECK_THROWS_AS(world_to_pixel(cam, Vec3(0.0, 0.0, 3450.0)), Error);
    CHECK_THROWS_AS(world_to_pixel(cam, Vec3(0.0, 0.0, 4000.0)), Error);
}

TEST_CASE("border band shrinks the accepted image area") {
    const CameraModel cam = CameraModel::overhead();
    CHECK(cam.in_image(0.0, 0.0));
    CHECK_FALSE(cam.in_image(-0.1, 100.0));
    CHECK_FALSE(cam.in_image(39.0, 100.0, 40.0));
    CHECK(cam.in_image(40.0, 100.0, 40.0));
    CHECK_FALSE(cam.in_image(320.0, 441.0, 40.0));
}
