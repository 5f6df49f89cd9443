#pragma once

#include "eulerpose/pose_loss.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eulerpose {

enum class Split { Train, Test };
enum class DatasetFormat { SevenScenes, Cambridge, Interchange };

std::string_view to_string(Split split);
Split parse_split(std::string_view text);
DatasetFormat parse_dataset_format(std::string_view text);

struct FrameRecord {
    std::string frame_id;          ///< relative image path
    Pose pose;
    std::vector<double> features;  ///< empty when the dataset carries none

    friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

struct PoseDataset {
    std::string scene_name;
    Split split = Split::Train;
    std::vector<FrameRecord> frames;
    std::optional<std::size_t> feature_dim;

    /// Nonempty, unique frame ids, valid poses, uniform feature length
    /// matching feature_dim. Throws ValidationError.
    void validate() const;

    friend bool operator==(const PoseDataset&, const PoseDataset&) = default;
};

/// One 7-Scenes `frame-XXXXXX.pose.txt`: a 4x4 camera-to-world matrix in
/// meters, four whitespace-separated rows. Throws ParseError naming the
/// offending line.
Pose parse_sevenscenes_pose(std::string_view text);

/// One Cambridge Landmarks data line: `path x y z qw qx qy qz`.
/// Quaternions within 1e-3 of unit norm are renormalized, others rejected.
/// `line_no` is used only in error messages.
FrameRecord parse_cambridge_line(std::string_view line, std::size_t line_no = 0);

/// Synthetic stand-in for an image dataset.
///
/// The feature map A (dim x 6) and offset b (dim) are drawn from Rng(seed)
/// as standard normals scaled per column: kSyntheticTranslationScale for
/// the three translation columns, kSyntheticAngleScale for the three angle
/// columns, kSyntheticBiasScale for b. The scales give translation (meters,
/// spread ~5.8) and angles (radians, spread ~1.8) comparable weight in
/// the features. Frames come from a second stream,
/// Rng(seed + k * 0x9E3779B97F4A7C15) with k = 1 for train and k = 2 for
/// test, so both splits share one feature map. Per frame, in order:
/// translation uniform in [-10, 10]^3, orientation from a normalized
/// 4-vector of standard normals (uniform on SO(3)), then
/// features = A [X; Phi] + b + noise_sigma * N(0, 1) with Phi in radians.
PoseDataset generate_synthetic(std::uint64_t seed, std::size_t n, std::size_t feature_dim,
                               double noise_sigma, Split split = Split::Train);

inline constexpr double kSyntheticTranslationScale = 0.05;
inline constexpr double kSyntheticAngleScale = 0.3;
inline constexpr double kSyntheticBiasScale = 0.05;

/// Reads a dataset rooted at `root`:
///  - SevenScenes: a scene directory with `seq-XX/frame-XXXXXX.pose.txt`.
///    Sequences come from TrainSplit.txt / TestSplit.txt when present,
///    otherwise every `seq-XX` directory is used.
///  - Cambridge: a scene directory with dataset_train.txt / dataset_test.txt.
///  - Interchange: a .tsv file, or a directory holding `<split>.tsv`.
/// Frames appear in lexicographic file order.
PoseDataset read_dataset(const std::filesystem::path& root, DatasetFormat format, Split split);

/// Interchange TSV: header `frame_id x y z yaw pitch roll [f0 ... f{d-1}]`,
/// tab-separated, angles in radians, numbers in round-trip precision.
void write_interchange(const PoseDataset& ds, const std::filesystem::path& path);
void write_interchange(const PoseDataset& ds, std::ostream& out);
PoseDataset read_interchange(std::istream& in, std::string scene_name, Split split);

} // namespace eulerpose
