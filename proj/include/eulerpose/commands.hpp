#pragma once

// Command implementations behind the `eulerpose` executable. Each takes an
// options struct and explicit streams so it can be driven in-process.
// Errors surface as exceptions; the executable turns them into a one-line
// diagnostic and a nonzero exit status.

#include "eulerpose/dataset_io.hpp"
#include "eulerpose/metrics.hpp"
#include "eulerpose/regressor.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace eulerpose::cli {

enum class Representation { Euler, Quaternion, Matrix };
Representation parse_representation(std::string_view text);

struct ConvertOptions {
    Representation from = Representation::Euler;
    Representation to = Representation::Quaternion;
    AngleUnit unit = AngleUnit::Radians;  ///< for Euler input and output
};

/// One conversion per non-blank input line; '#' starts a comment line.
/// Euler rows are `yaw pitch roll`, quaternion rows `w x y z`, matrix rows
/// nine row-major entries. Quaternion output is sign-canonical.
void run_convert(const ConvertOptions& opts, std::istream& in, std::ostream& out);

struct GenOptions {
    std::uint64_t seed = 1;
    std::size_t n = 512;
    std::size_t dim = 32;
    double sigma = 0.0;
    Split split = Split::Train;
    std::filesystem::path out;
};

PoseDataset run_gen(const GenOptions& opts);

struct TrainOptions {
    std::filesystem::path data;
    DatasetFormat format = DatasetFormat::Interchange;
    Split split = Split::Train;
    TrainConfig config;
    std::filesystem::path out;       ///< checkpoint
    std::filesystem::path loss_csv;  ///< empty: `<out>.loss.csv`
};

/// Writes the checkpoint and an `iteration,loss` CSV; logs a short summary to `log`.
TrainTrace run_train(const TrainOptions& opts, std::ostream& log);

struct EvalOptions {
    std::filesystem::path model;
    std::filesystem::path data;
    DatasetFormat format = DatasetFormat::Interchange;
    Split split = Split::Test;
    std::string scene;
    std::filesystem::path out_csv;
    AngleUnit unit = AngleUnit::Degrees;
    std::optional<std::size_t> train_frames;
    std::string reference_median;  ///< rendered verbatim, e.g. "0.32m, 8.12°"
    std::string reference_mean;
};

/// Writes `frame_id,translation_error_m,angle_error_<unit>` rows to
/// out_csv and prints a table row to `out`.
EvalSummary run_eval(const EvalOptions& opts, std::ostream& out);

/// Self-check suites; one PASS/FAIL line each. Returns the failure count.
int run_check(std::ostream& out);

/// "0.5623m, 5.8011°" in degrees, "0.5623m, 0.1012rad" in radians.
std::string format_error_pair(double meters, double angle_degrees, AngleUnit unit);

struct ReportRow {
    std::string scene;
    std::optional<std::size_t> train_frames;
    std::size_t test_frames = 0;
    double median_translation = 0.0;
    double median_angle = 0.0;  ///< degrees
    double mean_translation = 0.0;
    double mean_angle = 0.0;
    std::string reference_median;
    std::string reference_mean;
};

ReportRow make_report_row(const EvalSummary& summary, std::optional<std::size_t> train_frames = std::nullopt);

/// Tab-separated header and row laid out like a per-scene accuracy table.
/// Reference columns appear only when the row carries reference values.
std::string render_report(const ReportRow& row, AngleUnit unit = AngleUnit::Degrees);

/// Reads back a per-frame CSV written by run_eval.
std::vector<ErrorRecord> read_error_csv(const std::filesystem::path& path);

} // namespace eulerpose::cli
