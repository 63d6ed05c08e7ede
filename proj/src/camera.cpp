/*
 * camera.cpp
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

#include "camera.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace hrcguard {

void CameraModel::validate() const {
    require(std::isfinite(fx) && fx > 0.0 && std::isfinite(fy) && fy > 0.0,
            "camera focal lengths must be positive");
    require(image_width > 0 && image_height > 0, "camera image size must be positive");
    require(cx >= 0.0 && cx <= image_width && cy >= 0.0 && cy <= image_height,
            "camera principal point must lie inside the image");
    require(std::isfinite(mount_height) && mount_height > 0.0,
            "camera mount height must be positive");
}

CameraModel CameraModel::overhead(const Vec3& position, int width, int height,
                                  double footprint_x, double footprint_y) {
    require(position.z() > 0.0, "overhead camera must be above the floor");
    require(footprint_x > 0.0 && footprint_y > 0.0, "camera footprint must be positive");
    CameraModel cam;
    cam.image_width = width;
    cam.image_height = height;
    cam.mount_height = position.z();
    cam.fx = width * position.z() / footprint_x;
    cam.fy = height * position.z() / footprint_y;
    cam.cx = 0.5 * width;
    cam.cy = 0.5 * height;
    // Optical axis points at the floor; image columns follow world +x and
    // image rows follow world -y so the frame stays right-handed.
    cam.pose.rotation = Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
    cam.pose.translation = position;
    cam.validate();
    return cam;
}

void Detection::validate() const {
    require(box.u_min < box.u_max && box.v_min < box.v_max,
            "detection bbox must have positive extent");
    require(std::isfinite(depth) && depth > 0.0, "detection depth must be positive");
    require(confidence >= 0.0 && confidence <= 1.0, "detection confidence must be in [0,1]");
}

Vec3 pixel_depth_to_world(const CameraModel& camera, double u, double v, double depth) {
    if (!std::isfinite(depth) || depth <= 0.0) {
        fail(ErrorCode::InvalidArgument, "depth must be positive, got " + std::to_string(depth));
    }
    const Vec3 in_camera((u - camera.cx) / camera.fx * depth,
                         (v - camera.cy) / camera.fy * depth,
                         depth);
    return camera.pose.apply(in_camera);
}

PixelDepth world_to_pixel(const CameraModel& camera, const Vec3& point) {
    const Vec3 in_camera = camera.pose.apply_inverse(point);
    if (!(in_camera.z() > 0.0)) {
        fail(ErrorCode::InvalidArgument, "point is behind the camera");
    }
    return {camera.fx * in_camera.x() / in_camera.z() + camera.cx,
            camera.fy * in_camera.y() / in_camera.z() + camera.cy,
            in_camera.z()};
}

OperatorObservation estimate_operator(const CameraModel& camera, const Detection& det) {
    det.validate();
    const Vec2 c = det.box.center();
    const Vec3 head = pixel_depth_to_world(camera, c.x(), c.y(), det.depth);
    const double vertical = camera.pose.translation.z() - head.z();
    const double height = camera.mount_height - vertical;
    if (height < 0.0) {
        fail(ErrorCode::InvalidArgument,
             "detection depth " + std::to_string(det.depth) + " mm puts the head below the floor");
    }
    return {floor_point(head), height, head};
}

}  // namespace hrcguard
