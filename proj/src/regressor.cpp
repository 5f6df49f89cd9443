#include "eulerpose/regressor.hpp"

#include "eulerpose/errors.hpp"
#include "eulerpose/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace eulerpose {

namespace {

// y = W x + b for a row-major W (rows x x.size()).
void affine(std::span<const double> w, std::span<const double> b, std::span<const double> x, std::span<double> y) {
    const std::size_t cols = x.size();
    for (std::size_t r = 0; r < y.size(); ++r) {
        double acc = b[r];
        const double* row = w.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

struct Activations {
    std::vector<double> hidden;  // empty for the linear model
    Vec3 translation{};
    Vec3 orientation_raw{};
};

Activations run(const RegressorModel& m, std::span<const double> f) {
    if (f.size() != m.feature_dim) {
        throw DomainError("forward: expected " + std::to_string(m.feature_dim) + " features, got " +
                          std::to_string(f.size()));
    }
    Activations a;
    std::span<const double> head_in = f;
    if (m.hidden) {
        a.hidden.resize(m.hidden);
        affine(m.w_hidden, m.b_hidden, f, a.hidden);
        for (double& h : a.hidden) h = std::tanh(h);
        head_in = a.hidden;
    }
    affine(m.w_t, m.b_t, head_in, a.translation);
    affine(m.w_o, m.b_o, head_in, a.orientation_raw);
    return a;
}

Pose to_pose(const Activations& a) {
    Pose p;
    p.translation = a.translation;
    p.orientation = EulerAngles(a.orientation_raw[0], a.orientation_raw[1], a.orientation_raw[2]);
    return p;
}

void fill_zero(RegressorModel& g) {
    for (auto* v : {&g.w_hidden, &g.b_hidden, &g.w_t, &g.b_t, &g.w_o, &g.b_o}) {
        std::fill(v->begin(), v->end(), 0.0);
    }
}

template <typename Fn>
void for_each_tensor(RegressorModel& m, Fn&& fn) {
    fn("w_hidden", m.w_hidden);
    fn("b_hidden", m.b_hidden);
    fn("w_t", m.w_t);
    fn("b_t", m.b_t);
    fn("w_o", m.w_o);
    fn("b_o", m.b_o);
}

} // namespace

RegressorModel RegressorModel::zeros(std::size_t feature_dim, std::size_t hidden) {
    if (feature_dim == 0) throw ConfigError("regressor needs at least one feature");
    RegressorModel m;
    m.feature_dim = feature_dim;
    m.hidden = hidden;
    m.w_hidden.assign(hidden * feature_dim, 0.0);
    m.b_hidden.assign(hidden, 0.0);
    m.w_t.assign(3 * m.head_inputs(), 0.0);
    m.b_t.assign(3, 0.0);
    m.w_o.assign(3 * m.head_inputs(), 0.0);
    m.b_o.assign(3, 0.0);
    return m;
}

RegressorModel RegressorModel::initialized(std::size_t feature_dim, std::size_t hidden, Rng& rng) {
    RegressorModel m = zeros(feature_dim, hidden);
    const auto fill = [&rng](std::vector<double>& w, std::size_t fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& v : w) v = rng.uniform(-bound, bound);
    };
    fill(m.w_hidden, feature_dim);
    fill(m.w_t, m.head_inputs());
    fill(m.w_o, m.head_inputs());
    return m;
}

std::size_t RegressorModel::parameter_count() const {
    return w_hidden.size() + b_hidden.size() + w_t.size() + b_t.size() + w_o.size() + b_o.size();
}

std::vector<double> RegressorModel::flatten() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (const auto* v : {&w_hidden, &b_hidden, &w_t, &b_t, &w_o, &b_o}) {
        out.insert(out.end(), v->begin(), v->end());
    }
    return out;
}

void RegressorModel::assign(std::span<const double> params) {
    if (params.size() != parameter_count()) throw DomainError("assign: parameter count mismatch");
    std::size_t pos = 0;
    for (auto* v : {&w_hidden, &b_hidden, &w_t, &b_t, &w_o, &b_o}) {
        std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(pos), v->size(), v->begin());
        pos += v->size();
    }
}

Pose forward(const RegressorModel& model, std::span<const double> features) {
    return to_pose(run(model, features));
}

double batch_loss(const RegressorModel& model, const PoseDataset& ds, std::span<const std::size_t> batch,
                  const LossConfig& loss, RegressorModel* grad) {
    if (batch.empty()) throw DomainError("batch_loss: empty batch");
    if (grad) {
        if (grad->parameter_count() != model.parameter_count() || grad->hidden != model.hidden) {
            *grad = RegressorModel::zeros(model.feature_dim, model.hidden);
        }
        fill_zero(*grad);
    }
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    const double k = angle_scale(loss.angle_unit);
    const std::size_t m = model.head_inputs();
    std::vector<double> d_head(m);

    double total = 0.0;
    for (std::size_t idx : batch) {
        const FrameRecord& frame = ds.frames.at(idx);
        const Activations act = run(model, frame.features);
        const Pose pred = to_pose(act);
        total += euler_loss(pred, frame.pose, loss);
        if (!grad) continue;

        const LossGrad g = euler_loss_grad(pred, frame.pose, loss);
        // Wrapping has unit derivative almost everywhere; the unit scale
        // converts dLoss/dangle_unit into dLoss/dradian.
        Vec3 dt{}, dor{};
        for (std::size_t r = 0; r < 3; ++r) {
            dt[r] = g.d_translation[r] * inv_b;
            dor[r] = g.d_orientation[r] * k * inv_b;
        }
        const std::span<const double> head_in =
            model.hidden ? std::span<const double>(act.hidden) : std::span<const double>(frame.features);
        for (std::size_t r = 0; r < 3; ++r) {
            grad->b_t[r] += dt[r];
            grad->b_o[r] += dor[r];
            for (std::size_t c = 0; c < m; ++c) {
                grad->w_t[r * m + c] += dt[r] * head_in[c];
                grad->w_o[r * m + c] += dor[r] * head_in[c];
            }
        }
        if (model.hidden) {
            for (std::size_t c = 0; c < m; ++c) {
                double acc = 0.0;
                for (std::size_t r = 0; r < 3; ++r) {
                    acc += model.w_t[r * m + c] * dt[r] + model.w_o[r * m + c] * dor[r];
                }
                d_head[c] = acc * (1.0 - act.hidden[c] * act.hidden[c]);
            }
            const std::size_t d = model.feature_dim;
            for (std::size_t h = 0; h < m; ++h) {
                grad->b_hidden[h] += d_head[h];
                for (std::size_t c = 0; c < d; ++c) grad->w_hidden[h * d + c] += d_head[h] * frame.features[c];
            }
        }
    }
    return total * inv_b;
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning rate must be positive");
    if (batch_size < 1) throw ConfigError("batch size must be at least 1");
    if (convergence_window < 1) throw ConfigError("convergence window must be at least 1");
    if (!(convergence_tol >= 0.0)) throw ConfigError("convergence tolerance must be nonnegative");
    loss.validate();
}

Trainer::Trainer(const PoseDataset& ds, const TrainConfig& cfg) : ds_(ds), cfg_(cfg), rng_(cfg.seed) {
    cfg_.validate();
    if (ds.frames.empty()) throw ConfigError("training dataset is empty");
    if (!ds.feature_dim || *ds.feature_dim == 0) throw ConfigError("training dataset has no feature vectors");
    if (cfg_.batch_size > ds.frames.size()) {
        throw ConfigError("batch size " + std::to_string(cfg_.batch_size) + " exceeds dataset size " +
                          std::to_string(ds.frames.size()));
    }
    model_ = RegressorModel::initialized(*ds.feature_dim, cfg_.hidden, rng_);
    grad_ = RegressorModel::zeros(*ds.feature_dim, cfg_.hidden);
    order_.resize(ds.frames.size());
    reshuffle();
}

void Trainer::reshuffle() {
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    for (std::size_t i = order_.size(); i > 1; --i) {
        std::swap(order_[i - 1], order_[rng_.below(i)]);
    }
    cursor_ = 0;
}

Trainer::Step Trainer::step() {
    if (cursor_ + cfg_.batch_size > order_.size()) reshuffle();
    Step s{iteration_, 0.0, {order_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                             order_.begin() + static_cast<std::ptrdiff_t>(cursor_ + cfg_.batch_size)}};
    cursor_ += cfg_.batch_size;

    s.loss = batch_loss(model_, ds_, s.batch, cfg_.loss, &grad_);
    const double lr = cfg_.learning_rate;
    auto update = [lr](std::vector<double>& p, const std::vector<double>& g) {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr * g[i];
    };
    update(model_.w_hidden, grad_.w_hidden);
    update(model_.b_hidden, grad_.b_hidden);
    update(model_.w_t, grad_.w_t);
    update(model_.b_t, grad_.b_t);
    update(model_.w_o, grad_.w_o);
    update(model_.b_o, grad_.b_o);
    ++iteration_;
    return s;
}

double window_mean(std::span<const TracePoint> points, std::size_t end, std::size_t window) {
    if (window == 0 || window > end || end > points.size()) throw DomainError("window_mean: bad window");
    double sum = 0.0;
    for (std::size_t i = end - window; i < end; ++i) sum += points[i].batch_loss;
    return sum / static_cast<double>(window);
}

TrainTrace train(const PoseDataset& ds, const TrainConfig& cfg) {
    Trainer trainer(ds, cfg);
    TrainTrace trace;
    trace.points.reserve(std::min<std::size_t>(cfg.max_iterations, 1u << 20));
    const std::size_t w = cfg.convergence_window;
    double first_window = 0.0;

    while (trace.points.size() < cfg.max_iterations) {
        const auto s = trainer.step();
        trace.points.push_back({s.iteration, s.loss});
        const std::size_t n = trace.points.size();
        if (n % w != 0) continue;
        const double now = window_mean(trace.points, n, w);
        if (n == w) first_window = now;
        if (now == 0.0) {
            trace.converged = true;
            break;
        }
        if (n < 2 * w) continue;
        // Change between consecutive windows, relative to the first window.
        const double prev = window_mean(trace.points, n - w, w);
        if (std::abs(prev - now) < cfg.convergence_tol * first_window) {
            trace.converged = true;
            break;
        }
    }
    trace.iterations_run = trace.points.size();
    trace.model = trainer.model();
    return trace;
}

std::vector<ErrorRecord> evaluate(const RegressorModel& model, const PoseDataset& ds) {
    std::vector<ErrorRecord> out;
    out.reserve(ds.frames.size());
    for (const auto& frame : ds.frames) {
        const Pose pred = forward(model, frame.features);
        out.push_back({frame.frame_id, translation_error(pred.translation, frame.pose.translation),
                       angle_error(euler_to_quat(pred.orientation), euler_to_quat(frame.pose.orientation))});
    }
    return out;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "# feature_dim=" << ckpt.model.feature_dim << '\n'
        << "# hidden=" << ckpt.model.hidden << '\n'
        << "# seed=" << ckpt.seed << '\n'
        << "# angle_unit=" << to_string(ckpt.angle_unit) << '\n'
        << "tensor\tindex\tvalue\n";
    RegressorModel copy = ckpt.model;
    for_each_tensor(copy, [&out](const char* name, const std::vector<double>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) out << name << '\t' << i << '\t' << format_double(v[i]) << '\n';
    });
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ParseError("cannot write " + path.string());
    file << out.str();
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open checkpoint " + path.string());

    std::map<std::string, std::string, std::less<>> meta;
    std::string line;
    std::size_t line_no = 0;
    bool in_table = false;
    Checkpoint ckpt;
    std::map<std::string, std::vector<double>*, std::less<>> tensors;
    std::map<std::string, std::size_t, std::less<>> filled;

    const auto meta_uint = [&](std::string_view key) -> std::uint64_t {
        const auto it = meta.find(key);
        if (it == meta.end()) throw ParseError("checkpoint is missing '" + std::string(key) + "'");
        std::uint64_t v = 0;
        const auto& s = it->second;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) throw ParseError("bad value for " + std::string(key));
        return v;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!in_table) {
            if (line.starts_with("#")) {
                const auto body = trim(std::string_view(line).substr(1));
                const auto eq = body.find('=');
                if (eq == std::string_view::npos) throw ParseError("expected '# key=value'", line_no);
                meta.emplace(std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1))));
                continue;
            }
            if (line != "tensor\tindex\tvalue") throw ParseError("expected tensor table header", line_no);
            ckpt.model = RegressorModel::zeros(meta_uint("feature_dim"), meta_uint("hidden"));
            ckpt.seed = meta_uint("seed");
            const auto unit = meta.find("angle_unit");
            if (unit != meta.end()) ckpt.angle_unit = parse_angle_unit(unit->second);
            for_each_tensor(ckpt.model, [&](const char* name, std::vector<double>& v) { tensors[name] = &v; });
            in_table = true;
            continue;
        }
        const auto fields = split_on(line, '\t');
        if (fields.size() != 3) throw ParseError("expected 3 columns", line_no);
        const auto it = tensors.find(fields[0]);
        if (it == tensors.end()) throw ParseError("unknown tensor '" + std::string(fields[0]) + "'", line_no);
        const auto index = parse_double(fields[1]);
        const auto value = parse_double(fields[2]);
        if (!index || *index < 0 || *index != std::floor(*index) ||
            static_cast<std::size_t>(*index) >= it->second->size()) {
            throw ParseError("bad index", line_no);
        }
        if (!value || !std::isfinite(*value)) throw ParseError("bad value", line_no);
        (*it->second)[static_cast<std::size_t>(*index)] = *value;
        ++filled[it->first];
    }
    if (!in_table) throw ParseError("checkpoint has no tensor table");
    for (const auto& [name, tensor] : tensors) {
        if (filled[name] != tensor->size()) throw ParseError("tensor '" + name + "' is incomplete");
    }
    return ckpt;
}

} // namespace eulerpose
