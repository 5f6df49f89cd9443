#include "eulerpose/commands.hpp"

#include "eulerpose/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace eulerpose::cli {

namespace {

Quaternion random_unit_quat(Rng& rng) {
    return normalized({rng.normal(), rng.normal(), rng.normal(), rng.normal()});
}

Pose random_pose(Rng& rng) {
    return {{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)},
            EulerAngles(rng.uniform(-2.5, 2.5), rng.uniform(-1.4, 1.4), rng.uniform(-2.5, 2.5))};
}

bool check_round_trip() {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const Quaternion q = canonical(random_unit_quat(rng));
        const EulerAngles e = quat_to_euler(q);
        if (std::abs(e.pitch()) >= kPi / 2 - 0.01) continue;
        const Quaternion back = euler_to_quat(e);
        if (std::abs(back.w - q.w) > 1e-9 || std::abs(back.x - q.x) > 1e-9 || std::abs(back.y - q.y) > 1e-9 ||
            std::abs(back.z - q.z) > 1e-9) {
            return false;
        }
        const Quaternion via_matrix = matrix_to_quat(quat_to_matrix(q));
        if (angle_error(q, via_matrix) > 1e-6) return false;
    }
    return true;
}

bool check_angle_metric() {
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        const Quaternion q = random_unit_quat(rng);
        const Quaternion p = random_unit_quat(rng);
        const Quaternion g = random_unit_quat(rng);
        if (angle_error(q, q) > 1e-6 || angle_error(q, -q) > 1e-6) return false;
        const double d = angle_error(q, p);
        if (d < 0 || d > 180) return false;
        if (std::abs(angle_error(quat_multiply(g, q), quat_multiply(g, p)) - d) > 1e-6) return false;
        if (std::abs(angle_error(p, q) - d) > 1e-9) return false;
    }
    return true;
}

bool check_gradient() {
    Rng rng(13);
    for (AngleUnit unit : {AngleUnit::Degrees, AngleUnit::Radians}) {
        LossConfig cfg;
        cfg.angle_unit = unit;
        for (int i = 0; i < 50; ++i) {
            const Pose label = random_pose(rng);
            Pose pred = random_pose(rng);
            pred.orientation = EulerAngles(wrap_angle(label.orientation.yaw() + rng.uniform(-0.5, 0.5)),
                                           label.orientation.pitch() + rng.uniform(-0.05, 0.05),
                                           wrap_angle(label.orientation.roll() + rng.uniform(-0.5, 0.5)));
            const LossGrad g = euler_loss_grad(pred, label, cfg);
            const double k = angle_scale(unit);
            const double h = 1e-6;
            double err2 = 0.0;
            double ref2 = 0.0;
            for (int j = 0; j < 6; ++j) {
                auto shifted = [&](double s) {
                    Pose p = pred;
                    if (j < 3) {
                        p.translation[j] += s;
                    } else {
                        auto a = p.orientation.as_array();
                        a[j - 3] += s / k;
                        p.orientation = EulerAngles(a[0], a[1], a[2]);
                    }
                    return euler_loss(p, label, cfg);
                };
                const double fd = (shifted(h) - shifted(-h)) / (2 * h);
                const double an = j < 3 ? g.d_translation[j] : g.d_orientation[j - 3];
                err2 += (fd - an) * (fd - an);
                ref2 += an * an;
            }
            if (std::sqrt(err2) > 1e-5 * std::max(1.0, std::sqrt(ref2))) return false;
        }
    }
    return true;
}

bool check_metric_statistics() {
    Rng rng(14);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> v(1 + rng.below(40));
        for (double& x : v) x = rng.uniform(0, 10);
        std::vector<double> s = v;
        std::sort(s.begin(), s.end());
        const std::size_t n = s.size();
        const double expect = n % 2 ? s[n / 2] : (s[n / 2 - 1] + s[n / 2]) / 2.0;
        if (median(v) != expect) return false;
        const double m = mean(v);
        if (m < s.front() || m > s.back()) return false;
    }
    const std::vector<double> skewed{1, 1, 1, 1, 50};
    return mean(skewed) > median(skewed);
}

bool check_weights() {
    const Pose origin;
    Pose moved = origin;
    moved.translation[0] = 1.0;
    Pose turned = origin;
    turned.orientation = EulerAngles(1.0 / kDegPerRad, 0.0, 0.0);
    return std::abs(euler_loss(moved, origin) - 1.0) <= 1e-12 && std::abs(euler_loss(turned, origin) - 1.0) <= 1e-12;
}

} // namespace

int run_check(std::ostream& out) {
    const std::vector<std::pair<std::string, std::function<bool()>>> suites{
        {"rotation round trips", check_round_trip},
        {"angle metric invariants", check_angle_metric},
        {"loss gradient vs finite differences", check_gradient},
        {"loss weight semantics", check_weights},
        {"median and mean", check_metric_statistics},
    };
    int failures = 0;
    for (const auto& [name, fn] : suites) {
        bool ok = false;
        std::string note;
        try {
            ok = fn();
        } catch (const std::exception& e) {
            note = std::string(" (") + e.what() + ")";
        }
        out << (ok ? "PASS " : "FAIL ") << name << note << '\n';
        if (!ok) ++failures;
    }
    out << (suites.size() - failures) << '/' << suites.size() << " suites passed\n";
    return failures;
}

} // namespace eulerpose::cli
