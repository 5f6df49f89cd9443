#include "support.hpp"

#include "eulerpose/errors.hpp"
#include "eulerpose/regressor.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numeric>

using namespace eulerpose;

namespace {

RegressorModel random_model(std::size_t d, std::size_t hidden, Rng& rng, double scale = 0.2) {
    RegressorModel m = RegressorModel::zeros(d, hidden);
    std::vector<double> p(m.parameter_count());
    for (double& v : p) v = rng.uniform(-scale, scale);
    m.assign(p);
    return m;
}

// Hand-written forward pass used as an independent oracle.
Pose oracle_forward(const RegressorModel& m, const std::vector<double>& f) {
    std::vector<double> in = f;
    if (m.hidden) {
        std::vector<double> h(m.hidden);
        for (std::size_t r = 0; r < m.hidden; ++r) {
            double s = m.b_hidden[r];
            for (std::size_t c = 0; c < m.feature_dim; ++c) s += m.w_hidden[r * m.feature_dim + c] * f[c];
            h[r] = std::tanh(s);
        }
        in = h;
    }
    Vec3 t{}, o{};
    for (std::size_t r = 0; r < 3; ++r) {
        t[r] = m.b_t[r];
        o[r] = m.b_o[r];
        for (std::size_t c = 0; c < in.size(); ++c) {
            t[r] += m.w_t[r * in.size() + c] * in[c];
            o[r] += m.w_o[r * in.size() + c] * in[c];
        }
    }
    return {t, EulerAngles(o[0], o[1], o[2])};
}

PoseDataset small_dataset(std::uint64_t seed, std::size_t n, std::size_t d) {
    return generate_synthetic(seed, n, d, 0.0);
}

std::filesystem::path temp_path(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "eulerpose_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("forward examples") {
    const RegressorModel zero = RegressorModel::zeros(8);
    const std::vector<double> f(8, 0.7);
    const Pose p = forward(zero, f);
    CHECK(p.translation == Vec3{0, 0, 0});
    CHECK(p.orientation == EulerAngles(0, 0, 0));

    RegressorModel wrapped = RegressorModel::zeros(8);
    wrapped.b_o = {3 * kPi / 2, 0, 0};
    CHECK(forward(wrapped, f).orientation.yaw() == doctest::Approx(-kPi / 2).epsilon(1e-15));

    CHECK_THROWS_AS(forward(zero, std::vector<double>(7, 0.0)), DomainError);
}

TEST_CASE("forward matches a hand-computed product") {
    Rng rng(401);
    for (std::size_t hidden : {std::size_t{0}, std::size_t{5}}) {
        const RegressorModel m = random_model(10, hidden, rng, 0.5);
        for (int i = 0; i < 20; ++i) {
            std::vector<double> f(10);
            for (double& v : f) v = rng.normal();
            const Pose got = forward(m, f);
            const Pose want = oracle_forward(m, f);
            for (int k = 0; k < 3; ++k) {
                CHECK(got.translation[k] == doctest::Approx(want.translation[k]).epsilon(1e-13));
                CHECK(got.orientation.as_array()[k] == doctest::Approx(want.orientation.as_array()[k]).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("parameter layout") {
    Rng rng(402);
    const RegressorModel m = RegressorModel::initialized(6, 4, rng);
    CHECK(m.parameter_count() == 4 * 6 + 4 + 3 * 4 + 3 + 3 * 4 + 3);
    const auto flat = m.flatten();
    CHECK(flat.size() == m.parameter_count());
    RegressorModel copy = RegressorModel::zeros(6, 4);
    copy.assign(flat);
    CHECK(copy == m);
    CHECK_THROWS(copy.assign(std::vector<double>(3, 0.0)));

    // Initial weights are bounded by 1/sqrt(fan_in); biases start at zero.
    for (double w : m.w_hidden) CHECK(std::abs(w) < 1.0 / std::sqrt(6.0));
    for (double w : m.w_t) CHECK(std::abs(w) < 1.0 / std::sqrt(4.0));
    for (double b : m.b_hidden) CHECK(b == 0.0);
    for (double b : m.b_o) CHECK(b == 0.0);
}

TEST_CASE("full-model gradient matches central differences") {
    Rng rng(403);
    const PoseDataset ds = small_dataset(5, 40, 7);
    for (std::size_t hidden : {std::size_t{0}, std::size_t{6}}) {
        for (AngleUnit unit : {AngleUnit::Degrees, AngleUnit::Radians}) {
            LossConfig loss;
            loss.angle_unit = unit;
            for (int trial = 0; trial < 5; ++trial) {
                const RegressorModel m = random_model(7, hidden, rng);
                std::vector<std::size_t> batch;
                for (int i = 0; i < 8; ++i) batch.push_back(rng.below(ds.frames.size()));
                RegressorModel grad;
                batch_loss(m, ds, batch, loss, &grad);
                const auto analytic = grad.flatten();
                auto params = m.flatten();
                double err = 0, ref = 0;
                for (std::size_t i = 0; i < params.size(); ++i) {
                    const double keep = params[i];
                    const double h = 1e-6;
                    RegressorModel probe = m;
                    params[i] = keep + h;
                    probe.assign(params);
                    const double up = batch_loss(probe, ds, batch, loss);
                    params[i] = keep - h;
                    probe.assign(params);
                    const double down = batch_loss(probe, ds, batch, loss);
                    params[i] = keep;
                    const double fd = (up - down) / (2 * h);
                    err += (fd - analytic[i]) * (fd - analytic[i]);
                    ref += analytic[i] * analytic[i];
                }
                CHECK(std::sqrt(err) <= 1e-4 * std::sqrt(ref));
            }
        }
    }
}

TEST_CASE("reported batch loss uses the pre-update parameters") {
    const PoseDataset ds = small_dataset(7, 64, 8);
    TrainConfig cfg;
    cfg.batch_size = 16;
    cfg.seed = 3;
    Trainer trainer(ds, cfg);
    for (int i = 0; i < 10; ++i) {
        const RegressorModel before = trainer.model();
        const auto step = trainer.step();
        CHECK(step.iteration == static_cast<std::size_t>(i));
        double sum = 0;
        for (std::size_t idx : step.batch) sum += euler_loss(forward(before, ds.frames[idx].features), ds.frames[idx].pose, cfg.loss);
        CHECK(step.loss == doctest::Approx(sum / step.batch.size()).epsilon(1e-14));
        CHECK_FALSE(trainer.model() == before);
    }
}

TEST_CASE("each epoch visits distinct frames and drops the tail") {
    const PoseDataset ds = small_dataset(8, 50, 6);
    TrainConfig cfg;
    cfg.batch_size = 16;
    Trainer trainer(ds, cfg);
    for (int epoch = 0; epoch < 3; ++epoch) {
        std::vector<std::size_t> seen;
        for (int i = 0; i < 3; ++i) {
            const auto s = trainer.step();
            CHECK(s.batch.size() == 16);
            seen.insert(seen.end(), s.batch.begin(), s.batch.end());
        }
        std::sort(seen.begin(), seen.end());
        CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    }
}

TEST_CASE("a model already at the label converges at the first window with zero loss") {
    PoseDataset ds;
    ds.scene_name = "one";
    Pose label;
    ds.frames.push_back({"only", label, std::vector<double>(6, 0.0)});
    ds.feature_dim = 6;
    TrainConfig cfg;
    cfg.batch_size = 1;
    const TrainTrace trace = train(ds, cfg);
    CHECK(trace.converged);
    CHECK(trace.iterations_run == cfg.convergence_window);
    CHECK(trace.points.size() == trace.iterations_run);
    for (const auto& p : trace.points) CHECK(p.batch_loss == 0.0);
}

TEST_CASE("trainer rejects bad configurations") {
    const PoseDataset ds = small_dataset(9, 10, 6);
    TrainConfig cfg;
    cfg.batch_size = 11;
    CHECK_THROWS_AS(Trainer(ds, cfg), ConfigError);
    cfg.batch_size = 0;
    CHECK_THROWS_AS(Trainer(ds, cfg), ConfigError);
    cfg.batch_size = 4;
    cfg.learning_rate = 0;
    CHECK_THROWS_AS(Trainer(ds, cfg), ConfigError);
    cfg.learning_rate = 1e-3;
    cfg.loss.w2 = 0;
    CHECK_THROWS_AS(Trainer(ds, cfg), ConfigError);

    PoseDataset bare = ds;
    for (auto& f : bare.frames) f.features.clear();
    bare.feature_dim.reset();
    CHECK_THROWS_AS(Trainer(bare, TrainConfig{}), ConfigError);
}

TEST_CASE("training is deterministic and lowers the windowed loss") {
    const PoseDataset ds = small_dataset(1, 256, 16);
    TrainConfig cfg;
    cfg.seed = 4;
    cfg.max_iterations = 2000;
    cfg.loss.angle_unit = AngleUnit::Radians;
    const TrainTrace a = train(ds, cfg);
    const TrainTrace b = train(ds, cfg);
    CHECK(a.points == b.points);
    CHECK(a.model == b.model);
    CHECK(a.iterations_run == a.points.size());
    const std::size_t n = a.points.size();
    REQUIRE(n >= 2 * cfg.convergence_window);
    CHECK(window_mean(a.points, n, 100) < window_mean(a.points, 100, 100));

    TrainConfig other = cfg;
    other.seed = 5;
    CHECK_FALSE(train(ds, other).points == a.points);
}

TEST_CASE("max_iterations bounds the run and a zero tolerance disables early stop") {
    const PoseDataset ds = small_dataset(2, 128, 8);
    TrainConfig cfg;
    cfg.max_iterations = 250;
    cfg.convergence_tol = 0.0;
    const TrainTrace t = train(ds, cfg);
    CHECK(t.iterations_run == 250);
    CHECK_FALSE(t.converged);
}

TEST_CASE("window_mean") {
    std::vector<TracePoint> pts;
    for (std::size_t i = 0; i < 10; ++i) pts.push_back({i, static_cast<double>(i)});
    CHECK(window_mean(pts, 10, 4) == 7.5);
    CHECK(window_mean(pts, 4, 4) == 1.5);
    CHECK_THROWS_AS(window_mean(pts, 3, 4), DomainError);
    CHECK_THROWS_AS(window_mean(pts, 11, 1), DomainError);
}

TEST_CASE("evaluate") {
    const PoseDataset ds = small_dataset(3, 30, 6);
    Rng rng(404);
    const RegressorModel m = random_model(6, 0, rng);
    const auto records = evaluate(m, ds);
    REQUIRE(records.size() == ds.frames.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const Pose p = oracle_forward(m, ds.frames[i].features);
        CHECK(records[i].frame_id == ds.frames[i].frame_id);
        CHECK(records[i].translation_error == doctest::Approx(translation_error(p.translation, ds.frames[i].pose.translation)));
        CHECK(records[i].angle_error ==
              doctest::Approx(angle_error(euler_to_quat(p.orientation), euler_to_quat(ds.frames[i].pose.orientation))));
    }

    // Zero model against identity poses.
    PoseDataset identity = ds;
    for (auto& f : identity.frames) f.pose = Pose{};
    for (const auto& r : evaluate(RegressorModel::zeros(6), identity)) {
        CHECK(r.translation_error == 0.0);
        CHECK(r.angle_error == 0.0);
    }
}

TEST_CASE("checkpoint round trip") {
    Rng rng(405);
    for (std::size_t hidden : {std::size_t{0}, std::size_t{3}}) {
        Checkpoint c{random_model(5, hidden, rng, 3.0), 77, AngleUnit::Radians};
        c.model.w_t[0] = 1.0 / 3.0;
        c.model.b_o[2] = -0.0;
        const auto path = temp_path("ckpt_" + std::to_string(hidden) + ".tsv");
        save_checkpoint(c, path);
        const Checkpoint back = load_checkpoint(path);
        CHECK(back.model == c.model);
        CHECK(back.seed == 77);
        CHECK(back.angle_unit == AngleUnit::Radians);
        CHECK(back.model.flatten() == c.model.flatten());
    }
}

TEST_CASE("checkpoint loading rejects damaged files") {
    Rng rng(406);
    const auto path = temp_path("ckpt_damaged.tsv");
    save_checkpoint({random_model(4, 0, rng), 1, AngleUnit::Degrees}, path);
    std::string text;
    {
        std::ifstream in(path);
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    auto write_variant = [&](const std::string& body) {
        std::ofstream(path, std::ios::binary) << body;
    };
    write_variant(text.substr(0, text.rfind('\n', text.size() - 2) + 1));
    CHECK_THROWS_AS(load_checkpoint(path), ParseError);
    write_variant(text.substr(text.find('\n') + 1));
    CHECK_THROWS_AS(load_checkpoint(path), ParseError);
    write_variant(text + "w_t\t0\t1\n");
    CHECK_THROWS_AS(load_checkpoint(path), ParseError);
    CHECK_THROWS_AS(load_checkpoint(temp_path("missing.tsv")), ParseError);
}
