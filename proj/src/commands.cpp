#include "eulerpose/commands.hpp"

#include "eulerpose/errors.hpp"
#include "eulerpose/text.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace eulerpose::cli {

namespace fs = std::filesystem;

Representation parse_representation(std::string_view text) {
    if (text == "euler") return Representation::Euler;
    if (text == "quat" || text == "quaternion") return Representation::Quaternion;
    if (text == "matrix") return Representation::Matrix;
    throw ConfigError("unknown representation '" + std::string(text) + "' (expected euler, quat or matrix)");
}

namespace {

std::size_t arity(Representation r) {
    switch (r) {
    case Representation::Euler: return 3;
    case Representation::Quaternion: return 4;
    case Representation::Matrix: return 9;
    }
    return 0;
}

void write_numbers(std::ostream& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out << ' ';
        out << format_double(v);
        first = false;
    }
    out << '\n';
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    return out;
}

} // namespace

void run_convert(const ConvertOptions& opts, std::istream& in, std::ostream& out) {
    const double k = angle_scale(opts.unit);
    const std::size_t want = arity(opts.from);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto tokens = split_whitespace(body);
        if (tokens.size() != want) {
            throw ParseError("expected " + std::to_string(want) + " numbers, found " + std::to_string(tokens.size()),
                             line_no);
        }
        std::vector<double> v;
        for (auto t : tokens) {
            const auto d = parse_double(t);
            if (!d || !std::isfinite(*d)) throw ParseError("bad number '" + std::string(t) + "'", line_no);
            v.push_back(*d);
        }

        Quaternion q;
        try {
            switch (opts.from) {
            case Representation::Euler: q = euler_to_quat(EulerAngles(v[0] / k, v[1] / k, v[2] / k)); break;
            case Representation::Quaternion: q = canonical(normalized({v[0], v[1], v[2], v[3]})); break;
            case Representation::Matrix: {
                RotationMatrix r;
                std::copy(v.begin(), v.end(), r.m.begin());
                q = matrix_to_quat(r);
                break;
            }
            }
        } catch (const std::exception& e) {
            throw ParseError(e.what(), line_no);
        }

        switch (opts.to) {
        case Representation::Euler: {
            // Euler input passes through wrapped, without a quaternion round trip.
            const EulerAngles e = opts.from == Representation::Euler ? EulerAngles(v[0] / k, v[1] / k, v[2] / k)
                                                                     : quat_to_euler(q);
            write_numbers(out, {k * e.yaw(), k * e.pitch(), k * e.roll()});
            break;
        }
        case Representation::Quaternion: write_numbers(out, {q.w, q.x, q.y, q.z}); break;
        case Representation::Matrix: {
            const auto r = quat_to_matrix(q);
            write_numbers(out, {r.m[0], r.m[1], r.m[2], r.m[3], r.m[4], r.m[5], r.m[6], r.m[7], r.m[8]});
            break;
        }
        }
    }
}

PoseDataset run_gen(const GenOptions& opts) {
    PoseDataset ds = generate_synthetic(opts.seed, opts.n, opts.dim, opts.sigma, opts.split);
    if (!opts.out.empty()) write_interchange(ds, opts.out);
    return ds;
}

TrainTrace run_train(const TrainOptions& opts, std::ostream& log) {
    if (opts.out.empty()) throw ConfigError("train: --out is required");
    const PoseDataset ds = read_dataset(opts.data, opts.format, opts.split);
    TrainTrace trace = train(ds, opts.config);

    save_checkpoint({trace.model, opts.config.seed, opts.config.loss.angle_unit}, opts.out);

    const fs::path csv_path = opts.loss_csv.empty() ? fs::path(opts.out.string() + ".loss.csv") : opts.loss_csv;
    std::ostringstream csv;
    csv << "iteration,loss\n";
    for (const auto& p : trace.points) csv << p.iteration << ',' << format_double(p.batch_loss) << '\n';
    open_out(csv_path) << csv.str();

    const std::size_t n = trace.points.size();
    const std::size_t w = std::min(opts.config.convergence_window, n);
    log << "trained " << n << " iterations on " << ds.frames.size() << " frames ("
        << (trace.converged ? "converged" : "iteration limit") << "), final windowed loss "
        << format_double(w ? window_mean(trace.points, n, w) : 0.0) << " [" << to_string(opts.config.loss.angle_unit)
        << "]\n";
    return trace;
}

std::string format_error_pair(double meters, double angle_degrees, AngleUnit unit) {
    if (unit == AngleUnit::Degrees) return eulerpose::format_error_pair(meters, angle_degrees);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.4fm, %.4frad", meters, angle_degrees / kDegPerRad);
    return buf;
}

ReportRow make_report_row(const EvalSummary& s, std::optional<std::size_t> train_frames) {
    ReportRow row;
    row.scene = s.scene;
    row.train_frames = train_frames;
    row.test_frames = s.n_frames;
    row.median_translation = s.median_translation;
    row.median_angle = s.median_angle;
    row.mean_translation = s.mean_translation;
    row.mean_angle = s.mean_angle;
    return row;
}

std::string render_report(const ReportRow& row, AngleUnit unit) {
    const bool with_ref = !row.reference_median.empty() || !row.reference_mean.empty();
    std::ostringstream out;
    out << "Scene\tTrain\tTest";
    if (with_ref) out << "\tMedian (reference)";
    out << "\tMedian";
    if (with_ref) out << "\tMean (reference)";
    out << "\tMean\n";

    out << row.scene << '\t' << (row.train_frames ? std::to_string(*row.train_frames) : "-") << '\t'
        << row.test_frames;
    if (with_ref) out << '\t' << (row.reference_median.empty() ? "-" : row.reference_median);
    out << '\t' << format_error_pair(row.median_translation, row.median_angle, unit);
    if (with_ref) out << '\t' << (row.reference_mean.empty() ? "-" : row.reference_mean);
    out << '\t' << format_error_pair(row.mean_translation, row.mean_angle, unit) << '\n';
    return out.str();
}

EvalSummary run_eval(const EvalOptions& opts, std::ostream& out) {
    const Checkpoint ckpt = load_checkpoint(opts.model);
    const PoseDataset ds = read_dataset(opts.data, opts.format, opts.split);
    if (ds.feature_dim.value_or(0) != ckpt.model.feature_dim) {
        throw ConfigError("model expects " + std::to_string(ckpt.model.feature_dim) + " features, dataset has " +
                          std::to_string(ds.feature_dim.value_or(0)));
    }
    const auto records = evaluate(ckpt.model, ds);
    const std::string scene = opts.scene.empty() ? ds.scene_name : opts.scene;
    const EvalSummary summary = summarize(records, scene);

    if (!opts.out_csv.empty()) {
        const double k = opts.unit == AngleUnit::Degrees ? 1.0 : 1.0 / kDegPerRad;
        std::ostringstream csv;
        csv << "frame_id,translation_error_m,angle_error_" << to_string(opts.unit) << '\n';
        for (const auto& r : records) {
            if (r.frame_id.find_first_of(",\n") != std::string::npos) {
                throw ValidationError("frame id '" + r.frame_id + "' cannot be written to CSV");
            }
            csv << r.frame_id << ',' << format_double(r.translation_error) << ',' << format_double(k * r.angle_error)
                << '\n';
        }
        open_out(opts.out_csv) << csv.str();
    }

    ReportRow row = make_report_row(summary, opts.train_frames);
    row.reference_median = opts.reference_median;
    row.reference_mean = opts.reference_mean;
    out << render_report(row, opts.unit);
    return summary;
}

std::vector<ErrorRecord> read_error_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV " + path.string());
    const auto header = split_on(trim(line), ',');
    if (header.size() != 3 || header[0] != "frame_id" || header[1] != "translation_error_m") {
        throw ParseError("unexpected CSV header", 1);
    }
    double to_deg = 1.0;
    if (header[2] == "angle_error_rad") {
        to_deg = kDegPerRad;
    } else if (header[2] != "angle_error_deg") {
        throw ParseError("unexpected angle column '" + std::string(header[2]) + "'", 1);
    }
    std::vector<ErrorRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto f = split_on(body, ',');
        const auto t = f.size() == 3 ? parse_double(f[1]) : std::nullopt;
        const auto a = f.size() == 3 ? parse_double(f[2]) : std::nullopt;
        if (!t || !a) throw ParseError("malformed row", line_no);
        out.push_back({std::string(f[0]), *t, *a * to_deg});
    }
    return out;
}

} // namespace eulerpose::cli
