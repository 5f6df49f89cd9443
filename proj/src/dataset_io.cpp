#include "eulerpose/dataset_io.hpp"

#include "eulerpose/errors.hpp"
#include "eulerpose/rng.hpp"
#include "eulerpose/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>

namespace eulerpose {

namespace fs = std::filesystem;

std::string_view to_string(Split split) { return split == Split::Train ? "train" : "test"; }

Split parse_split(std::string_view text) {
    if (text == "train") return Split::Train;
    if (text == "test") return Split::Test;
    throw ConfigError("unknown split '" + std::string(text) + "' (expected train or test)");
}

DatasetFormat parse_dataset_format(std::string_view text) {
    if (text == "sevenscenes" || text == "7scenes") return DatasetFormat::SevenScenes;
    if (text == "cambridge") return DatasetFormat::Cambridge;
    if (text == "interchange" || text == "tsv") return DatasetFormat::Interchange;
    throw ConfigError("unknown dataset format '" + std::string(text) + "'");
}

void PoseDataset::validate() const {
    if (frames.empty()) throw ValidationError("dataset '" + scene_name + "' has no frames");
    std::set<std::string_view> seen;
    for (const auto& f : frames) {
        if (!seen.insert(f.frame_id).second) {
            throw ValidationError("duplicate frame id '" + f.frame_id + "'");
        }
        try {
            f.pose.validate();
        } catch (const DomainError& e) {
            throw ValidationError("frame '" + f.frame_id + "': " + e.what());
        }
        const std::size_t expected = feature_dim.value_or(0);
        if (f.features.size() != expected) {
            throw ValidationError("frame '" + f.frame_id + "' has " + std::to_string(f.features.size()) +
                                  " features, expected " + std::to_string(expected));
        }
    }
}

namespace {

double parse_finite(std::string_view token, std::size_t line_no, const char* what) {
    const auto v = parse_double(token);
    if (!v) throw ParseError("cannot parse " + std::string(what) + " '" + std::string(token) + "'", line_no);
    if (!std::isfinite(*v)) throw ParseError(std::string(what) + " is not finite", line_no);
    return *v;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ParseError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

constexpr double kBottomRowTolerance = 1e-6;
constexpr double kQuatNormTolerance = 1e-3;

} // namespace

Pose parse_sevenscenes_pose(std::string_view text) {
    std::array<double, 16> m{};
    std::array<std::size_t, 4> row_line{};
    std::size_t row = 0;
    std::size_t line_no = 0;

    for (std::string_view line : split_on(text, '\n')) {
        ++line_no;
        const auto tokens = split_whitespace(line);
        if (tokens.empty()) continue;
        if (row == 4) throw ParseError("unexpected content after the fourth matrix row", line_no);
        if (tokens.size() != 4) {
            throw ParseError("expected 4 numbers, found " + std::to_string(tokens.size()), line_no);
        }
        for (std::size_t c = 0; c < 4; ++c) {
            m[row * 4 + c] = parse_finite(tokens[c], line_no, "matrix entry");
        }
        row_line[row] = line_no;
        ++row;
    }
    if (row != 4) throw ParseError("expected 4 matrix rows, found " + std::to_string(row), line_no);

    const std::array<double, 4> bottom{0.0, 0.0, 0.0, 1.0};
    for (std::size_t c = 0; c < 4; ++c) {
        if (std::abs(m[12 + c] - bottom[c]) > kBottomRowTolerance) {
            throw ParseError("bottom row must be 0 0 0 1", row_line[3]);
        }
    }

    RotationMatrix r;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) r(i, j) = m[i * 4 + j];
    }
    Quaternion q;
    try {
        q = matrix_to_quat(r);
    } catch (const ValidationError& e) {
        throw ParseError(std::string("rotation block (rows 1-3): ") + e.what(), row_line[0]);
    }

    Pose pose;
    pose.translation = {m[3], m[7], m[11]};
    pose.orientation = quat_to_euler(q);
    return pose;
}

FrameRecord parse_cambridge_line(std::string_view line, std::size_t line_no) {
    const auto tokens = split_whitespace(line);
    if (tokens.size() != 8) {
        throw ParseError("expected 8 fields (path x y z qw qx qy qz), found " + std::to_string(tokens.size()),
                         line_no);
    }
    std::array<double, 7> v{};
    for (std::size_t i = 0; i < 7; ++i) v[i] = parse_finite(tokens[i + 1], line_no, "pose field");

    const Quaternion raw{v[3], v[4], v[5], v[6]};
    const double n = raw.norm();
    if (std::abs(n - 1.0) > kQuatNormTolerance) {
        throw ParseError("quaternion norm " + format_double(n) + " is not within 1e-3 of 1", line_no);
    }

    FrameRecord rec;
    rec.frame_id = std::string(tokens[0]);
    rec.pose.translation = {v[0], v[1], v[2]};
    rec.pose.orientation = quat_to_euler(normalized(raw));
    return rec;
}

PoseDataset generate_synthetic(std::uint64_t seed, std::size_t n, std::size_t feature_dim, double noise_sigma,
                               Split split) {
    if (n < 1) throw ConfigError("generate_synthetic: n must be at least 1");
    if (feature_dim < 6) throw ConfigError("generate_synthetic: feature_dim must be at least 6");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw ConfigError("generate_synthetic: noise_sigma must be finite and nonnegative");
    }

    Rng map_rng(seed);
    std::vector<double> a(feature_dim * 6);  // row-major, dim x 6
    std::vector<double> b(feature_dim);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = (i % 6 < 3 ? kSyntheticTranslationScale : kSyntheticAngleScale) * map_rng.normal();
    }
    for (double& v : b) v = kSyntheticBiasScale * map_rng.normal();

    const std::uint64_t stream = split == Split::Train ? 1 : 2;
    Rng rng(seed + stream * 0x9E3779B97F4A7C15ull);

    PoseDataset ds;
    ds.scene_name = "synthetic-" + std::to_string(seed);
    ds.split = split;
    ds.feature_dim = feature_dim;
    ds.frames.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
        FrameRecord rec;
        char id[48];
        std::snprintf(id, sizeof id, "synthetic/frame-%06zu", i);
        rec.frame_id = id;

        for (double& t : rec.pose.translation) t = rng.uniform(-10.0, 10.0);
        Quaternion q{};
        do {
            q = {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
        } while (q.norm() < 1e-6);
        rec.pose.orientation = quat_to_euler(canonical(normalized(q)));

        const Vec3 phi = rec.pose.orientation.as_array();
        const std::array<double, 6> z{rec.pose.translation[0], rec.pose.translation[1], rec.pose.translation[2],
                                      phi[0], phi[1], phi[2]};
        rec.features.resize(feature_dim);
        for (std::size_t r = 0; r < feature_dim; ++r) {
            double f = b[r];
            for (std::size_t c = 0; c < 6; ++c) f += a[r * 6 + c] * z[c];
            // Always consume the noise draw so the stream does not depend on sigma.
            f += noise_sigma * rng.normal();
            rec.features[r] = f;
        }
        ds.frames.push_back(std::move(rec));
    }
    return ds;
}

namespace {

std::vector<fs::path> sorted_entries(const fs::path& dir, const std::regex& pattern, bool want_dirs) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (want_dirs ? !entry.is_directory() : !entry.is_regular_file()) continue;
        if (std::regex_match(entry.path().filename().string(), pattern)) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<fs::path> sevenscenes_sequences(const fs::path& root, Split split) {
    const fs::path split_file = root / (split == Split::Train ? "TrainSplit.txt" : "TestSplit.txt");
    if (!fs::exists(split_file)) {
        return sorted_entries(root, std::regex(R"(seq-\d\d)"), true);
    }
    // Lines look like "sequence1".
    std::vector<fs::path> seqs;
    const std::string text = read_file(split_file);
    std::size_t line_no = 0;
    for (std::string_view line : split_on(text, '\n')) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        constexpr std::string_view prefix = "sequence";
        if (!line.starts_with(prefix)) {
            throw ParseError(split_file.string() + ": expected 'sequenceN'", line_no);
        }
        const auto num = parse_double(line.substr(prefix.size()));
        if (!num || *num < 0 || *num != std::floor(*num) || *num > 99) {
            throw ParseError(split_file.string() + ": bad sequence number", line_no);
        }
        char name[16];
        std::snprintf(name, sizeof name, "seq-%02d", static_cast<int>(*num));
        seqs.push_back(root / name);
    }
    return seqs;
}

PoseDataset read_sevenscenes(const fs::path& root, Split split) {
    PoseDataset ds;
    ds.scene_name = root.filename().string();
    ds.split = split;
    const std::regex frame_pattern(R"(frame-\d{6}\.pose\.txt)");
    for (const auto& seq : sevenscenes_sequences(root, split)) {
        if (!fs::is_directory(seq)) throw ParseError("missing sequence directory " + seq.string());
        for (const auto& file : sorted_entries(seq, frame_pattern, false)) {
            FrameRecord rec;
            const std::string stem = file.filename().string().substr(0, std::string_view("frame-000000").size());
            rec.frame_id = seq.filename().string() + "/" + stem + ".color.png";
            try {
                rec.pose = parse_sevenscenes_pose(read_file(file));
            } catch (const ParseError& e) {
                throw ParseError(file.string() + ": " + e.what());
            }
            ds.frames.push_back(std::move(rec));
        }
    }
    return ds;
}

PoseDataset read_cambridge(const fs::path& root, Split split) {
    const fs::path file = root / (split == Split::Train ? "dataset_train.txt" : "dataset_test.txt");
    if (!fs::exists(file)) throw ParseError("missing " + file.string());
    PoseDataset ds;
    ds.scene_name = root.filename().string();
    ds.split = split;
    const std::string text = read_file(file);
    std::size_t line_no = 0;
    for (std::string_view line : split_on(text, '\n')) {
        ++line_no;
        if (line_no <= 3 || trim(line).empty()) continue;  // three header lines
        try {
            ds.frames.push_back(parse_cambridge_line(line, line_no));
        } catch (const ParseError& e) {
            throw ParseError(file.string() + ": " + e.what());
        }
    }
    return ds;
}

} // namespace

PoseDataset read_interchange(std::istream& in, std::string scene_name, Split split) {
    PoseDataset ds;
    ds.scene_name = std::move(scene_name);
    ds.split = split;

    std::string line;
    std::size_t line_no = 0;
    std::size_t n_features = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_on(line, '\t');
        if (!have_header) {
            static constexpr std::array<std::string_view, 7> kCols{"frame_id", "x", "y", "z", "yaw", "pitch", "roll"};
            if (fields.size() < kCols.size() || !std::equal(kCols.begin(), kCols.end(), fields.begin())) {
                throw ParseError("interchange header must start with frame_id x y z yaw pitch roll", line_no);
            }
            n_features = fields.size() - kCols.size();
            for (std::size_t i = 0; i < n_features; ++i) {
                if (fields[kCols.size() + i] != "f" + std::to_string(i)) {
                    throw ParseError("feature columns must be named f0, f1, ...", line_no);
                }
            }
            have_header = true;
            continue;
        }
        if (fields.size() != 7 + n_features) {
            throw ParseError("expected " + std::to_string(7 + n_features) + " columns, found " +
                                 std::to_string(fields.size()) + " (mixed feature dimensions?)",
                             line_no);
        }
        FrameRecord rec;
        rec.frame_id = std::string(fields[0]);
        if (rec.frame_id.empty()) throw ParseError("empty frame_id", line_no);
        for (std::size_t i = 0; i < 3; ++i) rec.pose.translation[i] = parse_finite(fields[1 + i], line_no, "translation");
        rec.pose.orientation = EulerAngles(parse_finite(fields[4], line_no, "yaw"),
                                           parse_finite(fields[5], line_no, "pitch"),
                                           parse_finite(fields[6], line_no, "roll"));
        rec.features.reserve(n_features);
        for (std::size_t i = 0; i < n_features; ++i) {
            rec.features.push_back(parse_finite(fields[7 + i], line_no, "feature"));
        }
        ds.frames.push_back(std::move(rec));
    }
    if (!have_header) throw ParseError("interchange file is empty");
    if (n_features > 0) ds.feature_dim = n_features;
    try {
        ds.validate();
    } catch (const ValidationError& e) {
        throw ParseError(e.what());
    }
    return ds;
}

PoseDataset read_dataset(const fs::path& root, DatasetFormat format, Split split) {
    if (!fs::exists(root)) throw ParseError("no such file or directory: " + root.string());

    PoseDataset ds;
    switch (format) {
    case DatasetFormat::SevenScenes:
        ds = read_sevenscenes(root, split);
        break;
    case DatasetFormat::Cambridge:
        ds = read_cambridge(root, split);
        break;
    case DatasetFormat::Interchange: {
        const fs::path file = fs::is_directory(root) ? root / (std::string(to_string(split)) + ".tsv") : root;
        std::ifstream in(file);
        if (!in) throw ParseError("cannot open " + file.string());
        const std::string scene = fs::is_directory(root) ? root.filename().string() : file.stem().string();
        return read_interchange(in, scene, split);
    }
    }
    if (ds.frames.empty()) throw ParseError("no frames found under " + root.string());
    ds.validate();
    return ds;
}

void write_interchange(const PoseDataset& ds, std::ostream& out) {
    ds.validate();
    const std::size_t d = ds.feature_dim.value_or(0);
    out << "frame_id\tx\ty\tz\tyaw\tpitch\troll";
    for (std::size_t i = 0; i < d; ++i) out << "\tf" << i;
    out << '\n';
    for (const auto& f : ds.frames) {
        if (f.frame_id.find_first_of("\t\n\r") != std::string::npos) {
            throw ValidationError("frame id '" + f.frame_id + "' contains a tab or newline");
        }
        out << f.frame_id;
        for (double t : f.pose.translation) out << '\t' << format_double(t);
        for (double a : f.pose.orientation.as_array()) out << '\t' << format_double(a);
        for (double v : f.features) out << '\t' << format_double(v);
        out << '\n';
    }
}

void write_interchange(const PoseDataset& ds, const fs::path& path) {
    std::ostringstream buf;
    write_interchange(ds, buf);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path.string());
    out << buf.str();
    if (!out) throw ParseError("write failed for " + path.string());
}

} // namespace eulerpose
