#include "support.hpp"

#include "eulerpose/errors.hpp"
#include "eulerpose/metrics.hpp"
#include "eulerpose/pose_loss.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

using namespace eulerpose;
using testing::random_unit_quat;

namespace {

double sorted_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

std::vector<double> random_list(Rng& rng) {
    std::vector<double> v(1 + rng.below(200));
    for (double& x : v) x = rng.uniform(-50, 50);
    // Ties exercise the selection path.
    if (v.size() > 4 && rng.below(2)) v[1] = v[3];
    return v;
}

} // namespace

TEST_CASE("angle_error examples") {
    Rng rng(301);
    for (int i = 0; i < 100; ++i) {
        const Quaternion q = random_unit_quat(rng);
        CHECK(angle_error(q, q) <= 1e-9);
        CHECK(angle_error(q, -q) <= 1e-9);
        CHECK(angle_error(q, -q) >= 0.0);

        // A 10 degree offset about a random axis.
        Vec3 axis{rng.normal(), rng.normal(), rng.normal()};
        const double n = norm(axis);
        const Quaternion offset = testing::axis_angle(axis[0] / n, axis[1] / n, axis[2] / n, 10.0 / kDegPerRad);
        CHECK(std::abs(angle_error(q, quat_multiply(q, offset)) - 10.0) <= 1e-9);
    }
    CHECK(angle_error(Quaternion::identity(), {0, 0, 0, 1}) == doctest::Approx(180.0));
    CHECK(angle_error(Quaternion::identity(), Quaternion::identity()) == 0.0);
}

TEST_CASE("angle_error is symmetric, left-invariant, bounded and obeys the triangle inequality") {
    Rng rng(302);
    for (int i = 0; i < 500; ++i) {
        const Quaternion a = random_unit_quat(rng);
        const Quaternion b = random_unit_quat(rng);
        const Quaternion c = random_unit_quat(rng);
        const Quaternion r = random_unit_quat(rng);
        const double ab = angle_error(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab <= 180.0);
        CHECK(std::abs(angle_error(b, a) - ab) <= 1e-12);
        CHECK(std::abs(angle_error(quat_multiply(r, a), quat_multiply(r, b)) - ab) <= 1e-9);
        CHECK(angle_error(a, c) <= ab + angle_error(b, c) + 1e-9);
    }
}

TEST_CASE("angle_error of Euler poses equals the constructed offset") {
    const Quaternion a = euler_to_quat(EulerAngles(0.2, 0.1, -0.3));
    const Quaternion b = euler_to_quat(EulerAngles(0.2 + 5.0 / kDegPerRad, 0.1, -0.3));
    // A pure yaw change is a rotation about the world z axis, applied on the left.
    CHECK(angle_error(a, b) == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("translation_error") {
    CHECK(translation_error({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(translation_error({0, 0, 0}, {3, 4, 0}) == 5.0);
    Rng rng(303);
    for (int i = 0; i < 200; ++i) {
        const Vec3 a{rng.uniform(-9, 9), rng.uniform(-9, 9), rng.uniform(-9, 9)};
        const Vec3 b{rng.uniform(-9, 9), rng.uniform(-9, 9), rng.uniform(-9, 9)};
        double s = 0;
        for (int k = 0; k < 3; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
        CHECK(translation_error(a, b) == doctest::Approx(std::sqrt(s)).epsilon(1e-15));
    }
}

TEST_CASE("median and mean examples") {
    const std::vector<double> odd{1, 2, 3};
    const std::vector<double> even{1, 2, 3, 4};
    CHECK(median(odd) == 2.0);
    CHECK(mean(odd) == 2.0);
    CHECK(median(even) == 2.5);
    CHECK(mean(even) == 2.5);
    const std::vector<double> one{7.25};
    CHECK(median(one) == 7.25);
    CHECK(mean(one) == 7.25);
}

TEST_CASE("median and mean reject empty and non-finite input") {
    const std::vector<double> empty;
    CHECK_THROWS_AS(median(empty), DomainError);
    CHECK_THROWS_AS(mean(empty), DomainError);
    const std::vector<double> bad{1, std::numeric_limits<double>::quiet_NaN()};
    CHECK_THROWS_AS(median(bad), DomainError);
    CHECK_THROWS_AS(mean(bad), DomainError);
    CHECK_THROWS_AS(summarize({}, "empty"), DomainError);
}

TEST_CASE("median equals the sort oracle on 1000 lists") {
    Rng rng(304);
    int odd = 0, even = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto v = random_list(rng);
        (v.size() % 2 ? odd : even)++;
        CHECK(median(v) == sorted_median(v));
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        const double m = mean(v);
        CHECK(m >= *lo);
        CHECK(m <= *hi);
        CHECK(m == doctest::Approx(std::accumulate(v.begin(), v.end(), 0.0) / v.size()).epsilon(1e-12));
    }
    CHECK(odd > 100);
    CHECK(even > 100);
}

TEST_CASE("median is invariant under permutation") {
    Rng rng(305);
    for (int i = 0; i < 100; ++i) {
        auto v = random_list(rng);
        const double m = median(v);
        for (std::size_t k = v.size(); k > 1; --k) std::swap(v[k - 1], v[rng.below(k)]);
        CHECK(median(v) == m);
    }
}

TEST_CASE("a skewed error list has mean above median") {
    Rng rng(306);
    std::vector<double> v;
    for (int i = 0; i < 95; ++i) v.push_back(rng.uniform(0.5, 1.5));
    for (int i = 0; i < 5; ++i) v.push_back(rng.uniform(20, 40));
    const double med = median(v);
    const double avg = mean(v);
    CHECK(med == sorted_median(v));
    CHECK(avg == doctest::Approx(std::accumulate(v.begin(), v.end(), 0.0) / v.size()).epsilon(1e-12));
    CHECK(avg > med);
}

TEST_CASE("summarize") {
    const std::vector<ErrorRecord> zeros(4, ErrorRecord{"f", 0.0, 0.0});
    const EvalSummary z = summarize(zeros, "chess");
    CHECK(z.scene == "chess");
    CHECK(z.n_frames == 4);
    CHECK(z.median_translation == 0.0);
    CHECK(z.median_angle == 0.0);
    CHECK(z.mean_translation == 0.0);
    CHECK(z.mean_angle == 0.0);

    const std::vector<ErrorRecord> r{{"a", 1.0, 10.0}, {"b", 2.0, 30.0}, {"c", 6.0, 20.0}};
    const EvalSummary s = summarize(r, "x");
    CHECK(s.median_translation == 2.0);
    CHECK(s.median_angle == 20.0);
    CHECK(s.mean_translation == 3.0);
    CHECK(s.mean_angle == 20.0);
}

TEST_CASE("error pair formatting") {
    CHECK(format_error_pair(0.5623, 5.8011) == "0.5623m, 5.8011°");
    CHECK(format_error_pair(0.0, 0.0) == "0.0000m, 0.0000°");
    CHECK(format_error_pair(0.32, 8.12) == "0.3200m, 8.1200°");
    CHECK(format_error_pair(1.23456, 179.99996) == "1.2346m, 180.0000°");
}
