#include "eulerpose/metrics.hpp"

#include "eulerpose/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace eulerpose {

namespace {

void require_finite_nonempty(std::span<const double> values, const char* who) {
    if (values.empty()) {
        throw DomainError(std::string(who) + ": empty input");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainError(std::string(who) + ": non-finite value");
    }
}

} // namespace

double angle_error(const Quaternion& q, const Quaternion& q_hat) {
    const Quaternion dq = quat_multiply(quat_conjugate(q), q_hat);
    // Equal to 2 acos(|w|) for a unit dq, without its loss of precision near zero.
    const double v = std::sqrt(dq.x * dq.x + dq.y * dq.y + dq.z * dq.z);
    return 2.0 * std::atan2(v, std::abs(dq.w)) * kDegPerRad;
}

double translation_error(const Vec3& x, const Vec3& x_hat) {
    return std::hypot(x_hat[0] - x[0], x_hat[1] - x[1], x_hat[2] - x[2]);
}

double median(std::span<const double> values) {
    require_finite_nonempty(values, "median");
    std::vector<double> v(values.begin(), values.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    // Lower middle is the largest element of the left partition.
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lower + upper) / 2.0;
}

double mean(std::span<const double> values) {
    require_finite_nonempty(values, "mean");
    double sum = 0.0;
    for (double v : values) sum += v;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    // Rounding in the sum can otherwise push the mean of near-equal values past the extremes.
    return std::clamp(sum / static_cast<double>(values.size()), *lo, *hi);
}

EvalSummary summarize(std::span<const ErrorRecord> records, const std::string& scene) {
    if (records.empty()) throw DomainError("summarize: no records");
    std::vector<double> t, a;
    t.reserve(records.size());
    a.reserve(records.size());
    for (const auto& r : records) {
        t.push_back(r.translation_error);
        a.push_back(r.angle_error);
    }
    return {scene, records.size(), median(t), median(a), mean(t), mean(a)};
}

std::string format_error_pair(double meters, double degrees) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.4fm, %.4f°", meters, degrees);
    return buf;
}

} // namespace eulerpose
