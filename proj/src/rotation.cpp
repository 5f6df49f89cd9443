#include "eulerpose/rotation.hpp"

#include "eulerpose/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eulerpose {

namespace {
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kGimbalThreshold = 1.0 - 1e-9;
} // namespace

double wrap_angle(double a) {
    if (!std::isfinite(a)) {
        throw DomainError("wrap_angle: non-finite angle");
    }
    // remainder() yields [-pi, pi]; only the lower end needs moving.
    double r = std::remainder(a, kTwoPi);
    if (r <= -kPi) {
        r += kTwoPi;
    }
    return r;
}

double Quaternion::norm() const { return std::sqrt(squared_norm()); }

Quaternion operator-(const Quaternion& q) { return {-q.w, -q.x, -q.y, -q.z}; }

Quaternion normalized(const Quaternion& q) {
    const double n = q.norm();
    if (!(n > 1e-300) || !std::isfinite(n)) {
        throw DomainError("normalized: quaternion has zero or non-finite norm");
    }
    return {q.w / n, q.x / n, q.y / n, q.z / n};
}

Quaternion canonical(const Quaternion& q) {
    bool flip = q.w < 0.0;
    if (q.w == 0.0) {
        for (double c : {q.x, q.y, q.z}) {
            if (c == 0.0) continue;
            flip = c < 0.0;
            break;
        }
    }
    const Quaternion r = flip ? -q : q;
    // Adding +0.0 turns -0.0 into +0.0 so equal rotations print identically.
    return {r.w + 0.0, r.x + 0.0, r.y + 0.0, r.z + 0.0};
}

Quaternion quat_multiply(const Quaternion& a, const Quaternion& b) {
    const Quaternion p{
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    };
    return normalized(p);
}

Quaternion quat_conjugate(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

EulerAngles::EulerAngles(double yaw, double pitch, double roll)
    : yaw_(wrap_angle(yaw)), pitch_(wrap_angle(pitch)), roll_(wrap_angle(roll)) {}

Quaternion euler_to_quat(const EulerAngles& e) {
    const double cy = std::cos(0.5 * e.yaw());
    const double sy = std::sin(0.5 * e.yaw());
    const double cp = std::cos(0.5 * e.pitch());
    const double sp = std::sin(0.5 * e.pitch());
    const double cr = std::cos(0.5 * e.roll());
    const double sr = std::sin(0.5 * e.roll());

    const Quaternion q{
        cy * cp * cr + sy * sp * sr,
        cy * cp * sr - sy * sp * cr,
        cy * sp * cr + sy * cp * sr,
        sy * cp * cr - cy * sp * sr,
    };
    return canonical(normalized(q));
}

EulerAngles quat_to_euler(const Quaternion& q_in) {
    const Quaternion q = normalized(q_in);
    const double sin_pitch = 2.0 * (q.w * q.y - q.z * q.x);

    if (std::abs(sin_pitch) > kGimbalThreshold) {
        // Only yaw - roll (pitch = +pi/2) or yaw + roll (pitch = -pi/2) is
        // observable; with roll = 0 both reduce to 2*atan2(z, w).
        const double pitch = std::copysign(kPi / 2.0, sin_pitch);
        const double yaw = 2.0 * std::atan2(q.z, q.w);
        return {yaw, pitch, 0.0};
    }

    const double yaw = std::atan2(2.0 * (q.w * q.z + q.x * q.y), 1.0 - 2.0 * (q.y * q.y + q.z * q.z));
    const double pitch = std::asin(sin_pitch);
    const double roll = std::atan2(2.0 * (q.w * q.x + q.y * q.z), 1.0 - 2.0 * (q.x * q.x + q.y * q.y));
    return {yaw, pitch, roll};
}

RotationMatrix quat_to_matrix(const Quaternion& q_in) {
    const Quaternion q = normalized(q_in);
    const double ww = q.w * q.w, xx = q.x * q.x, yy = q.y * q.y, zz = q.z * q.z;
    const double xy = q.x * q.y, xz = q.x * q.z, yz = q.y * q.z;
    const double wx = q.w * q.x, wy = q.w * q.y, wz = q.w * q.z;

    RotationMatrix r;
    r.m = {
        ww + xx - yy - zz, 2.0 * (xy - wz),   2.0 * (xz + wy),
        2.0 * (xy + wz),   ww - xx + yy - zz, 2.0 * (yz - wx),
        2.0 * (xz - wy),   2.0 * (yz + wx),   ww - xx - yy + zz,
    };
    return r;
}

double orthonormality_error(const RotationMatrix& r) {
    double err = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < 3; ++k) {
                dot += r(k, i) * r(k, j);
            }
            err = std::max(err, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    }
    const double det = r(0, 0) * (r(1, 1) * r(2, 2) - r(1, 2) * r(2, 1)) -
                       r(0, 1) * (r(1, 0) * r(2, 2) - r(1, 2) * r(2, 0)) +
                       r(0, 2) * (r(1, 0) * r(2, 1) - r(1, 1) * r(2, 0));
    err = std::max(err, std::abs(det - 1.0));
    return std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
}

Quaternion matrix_to_quat(const RotationMatrix& r) {
    const double err = orthonormality_error(r);
    if (err > kOrthonormalityTolerance) {
        throw ValidationError("matrix_to_quat: rotation is not orthonormal (deviation " +
                              std::to_string(err) + ")");
    }

    const double trace = r(0, 0) + r(1, 1) + r(2, 2);
    Quaternion q;
    if (trace >= r(0, 0) && trace >= r(1, 1) && trace >= r(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + trace);  // 4w
        q = {0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s, (r(1, 0) - r(0, 1)) / s};
    } else if (r(0, 0) >= r(1, 1) && r(0, 0) >= r(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));  // 4x
        q = {(r(2, 1) - r(1, 2)) / s, 0.25 * s, (r(0, 1) + r(1, 0)) / s, (r(0, 2) + r(2, 0)) / s};
    } else if (r(1, 1) >= r(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 - r(0, 0) + r(1, 1) - r(2, 2));  // 4y
        q = {(r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, 0.25 * s, (r(1, 2) + r(2, 1)) / s};
    } else {
        const double s = 2.0 * std::sqrt(1.0 - r(0, 0) - r(1, 1) + r(2, 2));  // 4z
        q = {(r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s, (r(1, 2) + r(2, 1)) / s, 0.25 * s};
    }
    return canonical(normalized(q));
}

} // namespace eulerpose
