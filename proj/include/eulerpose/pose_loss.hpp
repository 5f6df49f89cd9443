#pragma once

#include "eulerpose/rotation.hpp"

#include <string_view>

namespace eulerpose {

/// Translation in meters plus orientation. Euler angles are the stored form;
/// the quaternion is derived on demand.
struct Pose {
    Vec3 translation{0.0, 0.0, 0.0};
    EulerAngles orientation;

    Quaternion quaternion() const { return euler_to_quat(orientation); }

    /// Throws DomainError when a translation component is not finite.
    void validate() const;

    friend bool operator==(const Pose&, const Pose&) = default;
};

enum class AngleUnit { Degrees, Radians };

/// Multiplier taking radians to `unit`.
double angle_scale(AngleUnit unit);
std::string_view to_string(AngleUnit unit);
/// Accepts "deg"/"degrees"/"rad"/"radians". Throws ConfigError otherwise.
AngleUnit parse_angle_unit(std::string_view text);

struct LossConfig {
    double w1 = 1.0;  ///< weight per meter of translation residual
    double w2 = 1.0;  ///< weight per angle unit of orientation residual
    AngleUnit angle_unit = AngleUnit::Degrees;
    /// Wrap each angle difference to (-pi, pi] before taking the norm.
    /// Off by default: the plain difference jumps by 2*pi across the boundary.
    bool wrap_residual = false;

    /// Throws ConfigError unless w1 > 0 and w2 > 0.
    void validate() const;
};

struct LossGrad {
    Vec3 d_translation{0.0, 0.0, 0.0};  ///< dLoss/dX, per meter
    Vec3 d_orientation{0.0, 0.0, 0.0};  ///< dLoss/dPhi, per configured angle unit
};

/// Orientation residual pred - label in radians, per the wrap_residual flag.
Vec3 orientation_residual(const EulerAngles& pred, const EulerAngles& label, bool wrap_residual);

/// w1 * |X_pred - X_label| + w2 * |Phi_pred - Phi_label|, the angle
/// residual expressed in cfg.angle_unit.
double euler_loss(const Pose& pred, const Pose& label, const LossConfig& cfg = {});

/// Gradient of euler_loss with respect to the prediction. A residual with
/// norm below 1e-12 contributes the zero subgradient.
LossGrad euler_loss_grad(const Pose& pred, const Pose& label, const LossConfig& cfg = {});

/// Quaternion baseline |X_pred - X_label| + beta * |q_label - q_pred/|q_pred||,
/// with q_label the canonical quaternion of the label orientation.
/// Throws ConfigError unless beta > 0.
double quat_baseline_loss(const Vec3& pred_translation, const Quaternion& pred_q, const Pose& label,
                          double beta);

double norm(const Vec3& v);

} // namespace eulerpose
