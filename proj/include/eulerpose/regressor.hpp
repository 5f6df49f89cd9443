#pragma once

// Feature-vector pose regressor trained with minibatch SGD on euler_loss.
//
// Linear by default; optionally one tanh hidden layer feeding both heads.
// The translation head outputs meters, the orientation head outputs
// radians that are wrapped to (-pi, pi] before the loss sees them.

#include "eulerpose/dataset_io.hpp"
#include "eulerpose/metrics.hpp"
#include "eulerpose/pose_loss.hpp"
#include "eulerpose/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace eulerpose {

struct RegressorModel {
    std::size_t feature_dim = 0;
    std::size_t hidden = 0;  ///< 0 = linear model

    std::vector<double> w_hidden;  ///< hidden x feature_dim, row-major
    std::vector<double> b_hidden;  ///< hidden
    std::vector<double> w_t;       ///< 3 x head_inputs()
    std::vector<double> b_t;       ///< 3
    std::vector<double> w_o;       ///< 3 x head_inputs()
    std::vector<double> b_o;       ///< 3

    std::size_t head_inputs() const { return hidden ? hidden : feature_dim; }

    /// All parameters zero.
    static RegressorModel zeros(std::size_t feature_dim, std::size_t hidden = 0);

    /// Weights uniform in (-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero.
    /// Draw order: w_hidden, w_t, w_o.
    static RegressorModel initialized(std::size_t feature_dim, std::size_t hidden, Rng& rng);

    std::size_t parameter_count() const;
    /// Concatenation w_hidden, b_hidden, w_t, b_t, w_o, b_o.
    std::vector<double> flatten() const;
    void assign(std::span<const double> params);

    friend bool operator==(const RegressorModel&, const RegressorModel&) = default;
};

/// Predicted pose. Throws DomainError when the feature length is wrong.
Pose forward(const RegressorModel& model, std::span<const double> features);

/// Mean euler_loss over `batch` (indices into ds.frames). When `grad` is
/// non-null it receives dLoss/dparams with the same shape as `model`.
double batch_loss(const RegressorModel& model, const PoseDataset& ds, std::span<const std::size_t> batch,
                  const LossConfig& loss, RegressorModel* grad = nullptr);

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t batch_size = 64;
    std::size_t max_iterations = 50000;
    std::uint64_t seed = 0;
    LossConfig loss;
    std::size_t hidden = 0;
    /// Convergence is checked at every multiple of `convergence_window`
    /// iterations: training stops when the mean loss of the latest window
    /// differs from the window before it by less than `convergence_tol`
    /// times the first window's mean, or when a window averages exactly zero.
    std::size_t convergence_window = 100;
    double convergence_tol = 3e-3;

    void validate() const;  ///< Throws ConfigError.
};

struct TracePoint {
    std::size_t iteration = 0;
    double batch_loss = 0.0;

    friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct TrainTrace {
    std::vector<TracePoint> points;
    RegressorModel model;
    bool converged = false;
    std::size_t iterations_run = 0;
};

/// Stepwise SGD. The model is initialized from Rng(cfg.seed), and the same
/// stream then drives a Fisher-Yates reshuffle at the start of every epoch.
/// Batches are consecutive slices of the shuffled order; a tail shorter than
/// batch_size is dropped.
class Trainer {
public:
    /// Throws ConfigError for a dataset without features or a batch larger than the dataset.
    Trainer(const PoseDataset& ds, const TrainConfig& cfg);

    struct Step {
        std::size_t iteration;
        double loss;                      ///< evaluated with pre-update parameters
        std::vector<std::size_t> batch;
    };

    Step step();

    const RegressorModel& model() const { return model_; }
    std::size_t iterations() const { return iteration_; }

private:
    void reshuffle();

    const PoseDataset& ds_;
    TrainConfig cfg_;
    Rng rng_;
    RegressorModel model_;
    RegressorModel grad_;
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
    std::size_t iteration_ = 0;
};

/// Runs Trainer until convergence or cfg.max_iterations.
TrainTrace train(const PoseDataset& ds, const TrainConfig& cfg);

/// Mean of losses[end - window, end). Requires window <= end.
double window_mean(std::span<const TracePoint> points, std::size_t end, std::size_t window);

/// Per-frame errors; angle errors compare the quaternions of the predicted
/// and labeled Euler angles.
std::vector<ErrorRecord> evaluate(const RegressorModel& model, const PoseDataset& ds);

struct Checkpoint {
    RegressorModel model;
    std::uint64_t seed = 0;
    AngleUnit angle_unit = AngleUnit::Degrees;
};

/// Text checkpoint: `# key=value` lines (feature_dim, hidden, seed,
/// angle_unit) followed by a `tensor<TAB>index<TAB>value` table.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace eulerpose
