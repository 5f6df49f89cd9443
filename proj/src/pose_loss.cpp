#include "eulerpose/pose_loss.hpp"

#include "eulerpose/errors.hpp"

#include <cmath>
#include <string>

namespace eulerpose {

namespace {

constexpr double kZeroResidual = 1e-12;

Vec3 unit_or_zero(const Vec3& v, double scale) {
    const double n = norm(v);
    if (n < kZeroResidual) return {0.0, 0.0, 0.0};
    return {scale * v[0] / n, scale * v[1] / n, scale * v[2] / n};
}

Vec3 translation_residual(const Pose& pred, const Pose& label) {
    return {pred.translation[0] - label.translation[0], pred.translation[1] - label.translation[1],
            pred.translation[2] - label.translation[2]};
}

} // namespace

double norm(const Vec3& v) { return std::hypot(v[0], v[1], v[2]); }

void Pose::validate() const {
    for (double c : translation) {
        if (!std::isfinite(c)) throw DomainError("pose translation is not finite");
    }
}

double angle_scale(AngleUnit unit) { return unit == AngleUnit::Degrees ? kDegPerRad : 1.0; }

std::string_view to_string(AngleUnit unit) { return unit == AngleUnit::Degrees ? "deg" : "rad"; }

AngleUnit parse_angle_unit(std::string_view text) {
    if (text == "deg" || text == "degrees") return AngleUnit::Degrees;
    if (text == "rad" || text == "radians") return AngleUnit::Radians;
    throw ConfigError("unknown angle unit '" + std::string(text) + "' (expected deg or rad)");
}

void LossConfig::validate() const {
    if (!(w1 > 0.0) || !(w2 > 0.0)) {
        throw ConfigError("loss weights must be positive");
    }
}

Vec3 orientation_residual(const EulerAngles& pred, const EulerAngles& label, bool wrap_residual) {
    Vec3 r{pred.yaw() - label.yaw(), pred.pitch() - label.pitch(), pred.roll() - label.roll()};
    if (wrap_residual) {
        for (double& c : r) c = wrap_angle(c);
    }
    return r;
}

double euler_loss(const Pose& pred, const Pose& label, const LossConfig& cfg) {
    const double k = angle_scale(cfg.angle_unit);
    const Vec3 dphi = orientation_residual(pred.orientation, label.orientation, cfg.wrap_residual);
    return cfg.w1 * norm(translation_residual(pred, label)) +
           cfg.w2 * norm({k * dphi[0], k * dphi[1], k * dphi[2]});
}

LossGrad euler_loss_grad(const Pose& pred, const Pose& label, const LossConfig& cfg) {
    // d|r|/dr = r/|r|, and the residual is already measured in the
    // configured unit, so no extra chain factor appears here.
    const Vec3 dphi = orientation_residual(pred.orientation, label.orientation, cfg.wrap_residual);
    return {unit_or_zero(translation_residual(pred, label), cfg.w1), unit_or_zero(dphi, cfg.w2)};
}

double quat_baseline_loss(const Vec3& pred_translation, const Quaternion& pred_q, const Pose& label,
                          double beta) {
    if (!(beta > 0.0)) throw ConfigError("quat_baseline_loss: beta must be positive");
    const Quaternion q = normalized(pred_q);
    const Quaternion q_hat = label.quaternion();
    const Vec3 dt{pred_translation[0] - label.translation[0], pred_translation[1] - label.translation[1],
                  pred_translation[2] - label.translation[2]};
    const double dq = std::sqrt((q_hat.w - q.w) * (q_hat.w - q.w) + (q_hat.x - q.x) * (q_hat.x - q.x) +
                                (q_hat.y - q.y) * (q_hat.y - q.y) + (q_hat.z - q.z) * (q_hat.z - q.z));
    return norm(dt) + beta * dq;
}

} // namespace eulerpose
