/*
 * camera.hpp
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

#include "geometry.hpp"

namespace hrcguard {

/// Distortion-free pinhole camera. The camera frame has z along the optical
/// axis, x along image columns and y along image rows.
struct CameraModel {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    RigidTransform pose;  // camera -> world
    int image_width = 0;
    int image_height = 0;
    double mount_height = 0.0;

    void validate() const;

    /// Downward-looking camera at `position`, with intrinsics chosen so the
    /// image covers footprint_x by footprint_y millimeters of floor. The
    /// 640x480 / 4200x3100 / 3450 mm defaults give fx = 640 * 3450 / 4200.
    static CameraModel overhead(const Vec3& position = Vec3(0.0, 0.0, 3450.0),
                                int width = 640, int height = 480,
                                double footprint_x = 4200.0, double footprint_y = 3100.0);

    bool in_image(double u, double v, double band = 0.0) const {
        return u >= band && u <= image_width - band && v >= band && v <= image_height - band;
    }
};

struct PixelDepth {
    double u = 0.0;
    double v = 0.0;
    double depth = 0.0;  // along the optical axis, mm
};

struct Detection {
    Bbox box;
    double depth = 0.0;  // camera to head along the optical axis, mm
    double confidence = 1.0;

    void validate() const;
};

struct OperatorObservation {
    Vec2 position;  // floor plane, mm
    double height = 0.0;
    Vec3 head;      // full back-projected head point
};

Vec3 pixel_depth_to_world(const CameraModel& camera, double u, double v, double depth);

/// Throws when the point is not in front of the camera.
PixelDepth world_to_pixel(const CameraModel& camera, const Vec3& point);

/// Floor position from the bbox-center ray at the detected depth; height is
/// the mount height minus the vertical camera-to-head distance.
OperatorObservation estimate_operator(const CameraModel& camera, const Detection& det);

}  // namespace hrcguard
