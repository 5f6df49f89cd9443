#pragma once

#include "eulerpose/rng.hpp"
#include "eulerpose/rotation.hpp"

#include <doctest.h>

#include <cmath>

namespace testing {

using namespace eulerpose;

inline Quaternion random_unit_quat(Rng& rng) {
    return normalized({rng.normal(), rng.normal(), rng.normal(), rng.normal()});
}

// Written out term by term, independently of quat_multiply.
inline Quaternion hamilton(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

inline double max_abs_diff(const Quaternion& a, const Quaternion& b) {
    return std::max({std::abs(a.w - b.w), std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

/// Difference up to the q / -q ambiguity.
inline double sign_free_diff(const Quaternion& a, const Quaternion& b) {
    return std::min(max_abs_diff(a, b), max_abs_diff(a, -b));
}

// Axis-angle quaternion for a unit axis.
inline Quaternion axis_angle(double ax, double ay, double az, double angle) {
    const double s = std::sin(angle / 2);
    return {std::cos(angle / 2), ax * s, ay * s, az * s};
}

// Matrix product Rz(yaw) Ry(pitch) Rx(roll) from the elementary rotations.
inline RotationMatrix zyx_matrix(double yaw, double pitch, double roll) {
    const double cz = std::cos(yaw), sz = std::sin(yaw);
    const double cy = std::cos(pitch), sy = std::sin(pitch);
    const double cx = std::cos(roll), sx = std::sin(roll);
    const double rz[9]{cz, -sz, 0, sz, cz, 0, 0, 0, 1};
    const double ry[9]{cy, 0, sy, 0, 1, 0, -sy, 0, cy};
    const double rx[9]{1, 0, 0, 0, cx, -sx, 0, sx, cx};
    double t[9]{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) t[i * 3 + j] += rz[i * 3 + k] * ry[k * 3 + j];
    RotationMatrix r;
    r.m.fill(0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r.m[i * 3 + j] += t[i * 3 + k] * rx[k * 3 + j];
    return r;
}

} // namespace testing
