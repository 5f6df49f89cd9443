#pragma once

// Rotation representations and conversions.
//
// Euler convention: intrinsic Z-Y-X. A triple (yaw, pitch, roll) is the
// rotation Rz(yaw) * Ry(pitch) * Rx(roll), i.e. the quaternion
// q_z(yaw) o q_y(pitch) o q_x(roll). All angles are radians and every
// stored angle lies in (-pi, pi].
//
// Quaternions are Hamilton, scalar first: [w, x, y, z].

#include <array>
#include <cstddef>
#include <numbers>

namespace eulerpose {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDegPerRad = 180.0 / std::numbers::pi;

using Vec3 = std::array<double, 3>;

/// Maps a finite angle to (-pi, pi]. Throws DomainError on NaN/inf.
double wrap_angle(double a);

struct Quaternion {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static constexpr Quaternion identity() { return {1.0, 0.0, 0.0, 0.0}; }

    double squared_norm() const { return w * w + x * x + y * y + z * z; }
    double norm() const;

    friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

Quaternion operator-(const Quaternion& q);

/// Unit quaternion in the same direction. Throws DomainError for a (near) zero vector.
Quaternion normalized(const Quaternion& q);

/// Flips the sign so that w >= 0; when w == 0 the first nonzero vector
/// component is made positive.
Quaternion canonical(const Quaternion& q);

/// Hamilton product a o b, renormalized. The sign is left as computed.
Quaternion quat_multiply(const Quaternion& a, const Quaternion& b);

Quaternion quat_conjugate(const Quaternion& q);

/// Yaw/pitch/roll; components are wrapped on construction.
class EulerAngles {
public:
    EulerAngles() = default;
    EulerAngles(double yaw, double pitch, double roll);

    double yaw() const { return yaw_; }
    double pitch() const { return pitch_; }
    double roll() const { return roll_; }

    /// {yaw, pitch, roll}
    Vec3 as_array() const { return {yaw_, pitch_, roll_}; }

    friend bool operator==(const EulerAngles&, const EulerAngles&) = default;

private:
    double yaw_ = 0.0;
    double pitch_ = 0.0;
    double roll_ = 0.0;
};

/// 3x3 rotation, row-major.
struct RotationMatrix {
    std::array<double, 9> m{1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0};

    double operator()(std::size_t r, std::size_t c) const { return m[r * 3 + c]; }
    double& operator()(std::size_t r, std::size_t c) { return m[r * 3 + c]; }

    static RotationMatrix identity() { return {}; }
};

/// Largest elementwise deviation of R^T R from I, and |det R - 1|, whichever is larger.
double orthonormality_error(const RotationMatrix& r);

Quaternion euler_to_quat(const EulerAngles& e);

/// Inverse of euler_to_quat up to quaternion sign. Near gimbal lock
/// (|sin pitch| > 1 - 1e-9) roll is set to zero and the remaining rotation
/// is folded into yaw.
EulerAngles quat_to_euler(const Quaternion& q);

RotationMatrix quat_to_matrix(const Quaternion& q);

/// Shepperd's method: the largest of trace, R00, R11, R22 selects the
/// branch. Throws ValidationError when `orthonormality_error(r) > 1e-6`.
Quaternion matrix_to_quat(const RotationMatrix& r);

inline constexpr double kOrthonormalityTolerance = 1e-6;

} // namespace eulerpose
