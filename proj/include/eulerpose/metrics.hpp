#pragma once

#include "eulerpose/rotation.hpp"

#include <span>
#include <string>
#include <vector>

namespace eulerpose {

struct ErrorRecord {
    std::string frame_id;
    double translation_error = 0.0;  ///< meters
    double angle_error = 0.0;        ///< degrees, in [0, 180]
};

/// One row of a per-scene accuracy table.
struct EvalSummary {
    std::string scene;
    std::size_t n_frames = 0;
    double median_translation = 0.0;  ///< meters
    double median_angle = 0.0;        ///< degrees
    double mean_translation = 0.0;
    double mean_angle = 0.0;
};

/// Geodesic angle between two orientations, in degrees.
///
/// The relative rotation is dq = conj(q) o q_hat and the angle is
/// 2 * acos(|dq.w|). Taking |dq.w| makes q and -q the same orientation,
/// so the result lies in [0, 180].
double angle_error(const Quaternion& q, const Quaternion& q_hat);

/// Euclidean distance in meters.
double translation_error(const Vec3& x, const Vec3& x_hat);

/// Middle element for odd sizes, midpoint of the two middle elements for
/// even sizes. Throws DomainError on empty or non-finite input.
double median(std::span<const double> values);
/// Throws DomainError on empty or non-finite input.
double mean(std::span<const double> values);

/// Median and mean of both error columns. Throws DomainError when empty.
EvalSummary summarize(std::span<const ErrorRecord> records, const std::string& scene);

/// "0.5623m, 5.8011°": meters and degrees, four decimals each.
std::string format_error_pair(double meters, double degrees);

} // namespace eulerpose
