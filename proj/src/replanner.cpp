/*
 * replanner.cpp
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

#include "replanner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.hpp"

namespace hrcguard {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxDepth = 6;
// Construction radius sits a hair outside the inflated circle so tangent
// segments never count as blocking.
constexpr double kInflateEps = 1e-6;
constexpr double kBlockEps = 1e-9;

struct Circle {
    Vec2 center;
    double radius;
};

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

double wrap_positive(double angle) {
    double r = std::fmod(angle, 2.0 * kPi);
    if (r < 0.0) r += 2.0 * kPi;
    return r;
}

bool inside_any(const Vec2& p, const std::vector<Circle>& circles) {
    return std::any_of(circles.begin(), circles.end(), [&](const Circle& c) {
        return (p - c.center).norm() < c.radius - kBlockEps;
    });
}

/// First circle crossed by a->b, by entry parameter along the segment.
std::optional<std::size_t> first_blocking(const Vec2& a, const Vec2& b,
                                          const std::vector<Circle>& circles) {
    std::optional<std::size_t> best;
    double best_t = 0.0;
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    for (std::size_t i = 0; i < circles.size(); ++i) {
        const Circle& c = circles[i];
        if (point_segment_distance(c.center, a, b) >= c.radius - kBlockEps) continue;
        const double t = len2 > 0.0 ? (c.center - a).dot(ab) / len2 : 0.0;
        if (!best || t < best_t) {
            best = i;
            best_t = t;
        }
    }
    return best;
}

/// Tangent polygon from a around c to b. side +1 is counterclockwise.
std::vector<Vec2> wrap_circle(const Vec2& a, const Vec2& b, const Circle& c, int side) {
    const Vec2 da = a - c.center;
    const Vec2 db = b - c.center;
    const double phi_a = std::atan2(da.y(), da.x());
    const double phi_b = std::atan2(db.y(), db.x());
    const double ta = std::acos(std::min(1.0, c.radius / da.norm()));
    const double tb = std::acos(std::min(1.0, c.radius / db.norm()));
    const double theta_a = phi_a + side * ta;
    const double theta_b = phi_b - side * tb;
    double span = wrap_positive(side * (theta_b - theta_a));
    if (span < 1e-12) span = 0.0;
    const int n = std::max(2, static_cast<int>(std::ceil(span / (kPi / 2.0) - 1e-12)));
    const double step = span / n;
    const double r = c.radius / std::cos(step / 2.0);
    std::vector<Vec2> out;
    out.reserve(n + 1);
    for (int i = 0; i < n; ++i) {
        const double ang = theta_a + side * (i + 0.5) * step;
        out.push_back(c.center + r * Vec2(std::cos(ang), std::sin(ang)));
    }
    out.push_back(b);
    return out;
}

bool within_limits(const std::vector<Vec2>& pts, const ReplanLimits& limits) {
    return std::all_of(pts.begin(), pts.end(), [&](const Vec2& p) {
        return (p - limits.origin).norm() <= limits.max_radius + 1e-9;
    });
}

/// Points after a up to and including b, or nullopt if nothing clears.
std::optional<std::vector<Vec2>> route(const Vec2& a, const Vec2& b,
                                       const std::vector<Circle>& circles,
                                       const ReplanLimits& limits, int depth) {
    const auto blocker = first_blocking(a, b, circles);
    if (!blocker) return std::vector<Vec2>{b};
    if (depth >= kMaxDepth) return std::nullopt;
    std::optional<std::vector<Vec2>> best;
    double best_len = 0.0;
    for (int side : {+1, -1}) {
        const std::vector<Vec2> chain = wrap_circle(a, b, circles[*blocker], side);
        if (!within_limits(chain, limits) || inside_any(chain.front(), circles)) continue;
        std::vector<Vec2> full;
        Vec2 from = a;
        bool ok = true;
        for (const Vec2& next : chain) {
            if (inside_any(next, circles)) {
                ok = false;
                break;
            }
            auto sub = route(from, next, circles, limits, depth + 1);
            if (!sub) {
                ok = false;
                break;
            }
            full.insert(full.end(), sub->begin(), sub->end());
            from = next;
        }
        if (!ok) continue;
        std::vector<Vec2> with_start{a};
        with_start.insert(with_start.end(), full.begin(), full.end());
        const double len = path_length(with_start);
        // Counterclockwise is tried first and keeps ties.
        if (!best || len < best_len - 1e-9) {
            best = std::move(full);
            best_len = len;
        }
    }
    return best;
}

}  // namespace

std::string_view to_string(DetourPlan::Status status) {
    switch (status) {
        case DetourPlan::Status::Clear: return "clear";
        case DetourPlan::Status::Detour: return "detour";
        case DetourPlan::Status::Hold: return "hold";
    }
    return "unknown";
}

double path_length(std::span<const Vec2> path) {
    double len = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) len += (path[i] - path[i - 1]).norm();
    return len;
}

double path_clearance(std::span<const Vec2> path, std::span<const CollisionCylinder> cylinders) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : cylinders) {
        if (path.size() == 1) best = std::min(best, (path[0] - c.center).norm() - c.radius);
        for (std::size_t i = 1; i < path.size(); ++i) {
            best = std::min(best, point_segment_distance(c.center, path[i - 1], path[i]) - c.radius);
        }
    }
    return best;
}

DetourPlan replan_tcp_path(std::span<const Vec2> path,
                           std::span<const CollisionCylinder> cylinders, double margin,
                           const ReplanLimits& limits) {
    require(!path.empty(), "replanning needs a non-empty path");
    require(margin >= 0.0 && std::isfinite(margin), "replan margin must be finite and >= 0");
    std::vector<Circle> circles;
    for (const auto& c : cylinders) {
        circles.push_back({c.center, c.radius + margin + kInflateEps});
    }
    DetourPlan hold{DetourPlan::Status::Hold, {}};
    for (const Vec2& p : path) {
        if (inside_any(p, circles)) return hold;
    }
    std::vector<Vec2> out{path[0]};
    for (std::size_t i = 1; i < path.size(); ++i) {
        auto sub = route(path[i - 1], path[i], circles, limits, 0);
        if (!sub) return hold;
        out.insert(out.end(), sub->begin(), sub->end());
    }
    if (!cylinders.empty() && path_clearance(out, cylinders) < margin) return hold;
    const bool unchanged = out.size() == path.size() &&
                           std::equal(out.begin(), out.end(), path.begin());
    return {unchanged ? DetourPlan::Status::Clear : DetourPlan::Status::Detour, std::move(out)};
}

std::optional<JointVector> retarget_tcp_floor(const RobotGeometry& geom, const JointVector& seed,
                                              const Vec2& target, double tolerance) {
    auto tcp_at = [&](double q1, double q3, const JointVector& base) {
        JointVector q = base;
        q[0] = q1;
        q[2] = q3;
        q[3] = base[3] - (q3 - base[2]);  // keep q2 + q3 + q4, so the tool pitch holds
        return std::pair{q, floor_point(forward_kinematics(geom, q).tcp)};
    };
    double x1 = seed[0];
    double x3 = seed[2];
    constexpr double h = 1e-6;
    for (int iter = 0; iter < 40; ++iter) {
        const auto [q, p] = tcp_at(x1, x3, seed);
        const Vec2 f = p - target;
        if (f.norm() < 1e-6) return normalize(q);
        Eigen::Matrix2d jac;
        jac.col(0) = (tcp_at(x1 + h, x3, seed).second - tcp_at(x1 - h, x3, seed).second) / (2 * h);
        jac.col(1) = (tcp_at(x1, x3 + h, seed).second - tcp_at(x1, x3 - h, seed).second) / (2 * h);
        const Eigen::Matrix2d damped = jac.transpose() * jac + 1e-6 * Eigen::Matrix2d::Identity();
        Vec2 dx = -damped.ldlt().solve(jac.transpose() * f);
        const double m = dx.cwiseAbs().maxCoeff();
        if (m > 0.2) dx *= 0.2 / m;
        x1 += dx.x();
        x3 += dx.y();
    }
    const auto [q, p] = tcp_at(x1, x3, seed);
    if ((p - target).norm() <= tolerance) return normalize(q);
    return std::nullopt;
}

}  // namespace hrcguard
