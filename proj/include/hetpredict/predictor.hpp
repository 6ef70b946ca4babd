#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hetpredict/trace.hpp"

namespace hetpredict {

inline constexpr double kCorrelationThreshold = 0.75;

// Sample Pearson correlation. Returns 0 when either sequence has zero variance.
// Throws LengthMismatch or TooFewPoints (fewer than two pairs).
double pearson(std::span<const double> xs, std::span<const double> ys);

enum class GateDecision { Regression, MedianFallback };

struct CorrelationGate {
  double coefficient = 0.0;
  double threshold = kCorrelationThreshold;
  GateDecision decision = GateDecision::MedianFallback;
};

CorrelationGate correlation_gate(std::span<const double> sizes, std::span<const double> runtimes,
                                 double threshold = kCorrelationThreshold);

// Affine map v -> (v - offset) / scale.
struct Standardization {
  double offset = 0.0;
  double scale = 1.0;

  double apply(double v) const { return (v - offset) / scale; }
  double invert(double z) const { return offset + scale * z; }
};

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<Vec2, 2>;

// Conjugate posterior of the two-parameter linear model in standardized
// coordinates: both the input size and the runtime are centred and scaled
// before fitting, so mean = (intercept, slope) is dimensionless and
// noise_variance is expressed in units of the runtime scale squared.
struct BlrPosterior {
  Vec2 mean{};
  Mat2 covariance{};
  double noise_variance = 1.0;
  double prior_variance = 1.0;
  Standardization feature;
  Standardization target;
};

struct BlrOptions {
  double prior_variance = 1.0;
  // Floor on the noise standard deviation as a fraction of the mean runtime.
  double noise_floor_fraction = 0.01;
};

// Fits the posterior without consulting the correlation gate. Needs at least two
// points with non-constant sizes and runtimes.
BlrPosterior fit_blr(std::span<const double> sizes, std::span<const double> runtimes,
                     const BlrOptions& options = {});

struct MedianRuntime {
  double seconds = 0.0;
};

struct TaskModel {
  std::string workflow;
  std::string task;
  MachineId machine;
  std::variant<BlrPosterior, MedianRuntime> variant;
  std::size_t training_count = 0;
  double min_training_runtime = 0.0;
  CorrelationGate gate;

  bool is_regression() const { return std::holds_alternative<BlrPosterior>(variant); }
};

struct FitOptions {
  double threshold = kCorrelationThreshold;
  BlrOptions blr;
};

inline constexpr std::size_t kMinTrainingRuns = 3;

// Throws TooFewRuns, MixedTasks (task or workflow differs) or MixedMachines.
TaskModel fit_task_model(std::span<const TaskRun> runs, const FitOptions& options = {});

struct Prediction {
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double confidence = 0.95;
  MachineId machine;
};

// Two-sided Gaussian quantile z such that P(|Z| <= z) = confidence.
double gaussian_quantile(double confidence);

Prediction predict_local(const TaskModel& model, double input_size, double confidence = 0.95);

// One model per (workflow, task) of a training set, ordered by (workflow, task).
// fit_all_models fans the groups out across OpenMP threads;
// fit_all_models_serial is the reference loop.
std::vector<TaskModel> fit_all_models(const TraceSet& training, const FitOptions& options = {});
std::vector<TaskModel> fit_all_models_serial(const TraceSet& training, const FitOptions& options = {});

std::string models_to_json(const std::vector<TaskModel>& models);
std::vector<TaskModel> models_from_json(std::string_view text);

}  // namespace hetpredict
