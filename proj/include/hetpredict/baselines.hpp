#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hetpredict/trace.hpp"

namespace hetpredict {

// Mean of runtime/input-size ratios over the training runs (seconds per byte).
struct NaiveModel {
  std::string task;
  double mean_ratio = 0.0;
};

NaiveModel fit_naive(std::span<const TaskRun> runs);
double naive_predict(const NaiveModel& model, double input_size);

enum class OnlineVariant { M, P };

struct OnlineSample {
  double input_size = 0.0;
  double io_read = 0.0;
  double io_write = 0.0;
  double runtime = 0.0;  // seconds
};

struct OnlineModel {
  std::string task;
  std::vector<OnlineSample> training;
  OnlineVariant variant = OnlineVariant::M;
  double correlation = 0.0;
};

OnlineModel fit_online(std::span<const TaskRun> runs, OnlineVariant variant);

// Correlated training data: scale the nearest training point's runtime by the
// input-size ratio. Otherwise M predicts the mean runtime and P draws once from
// the better-fitting of a Normal and a Gamma maximum-likelihood fit.
double online_predict(const OnlineModel& model, double input_size, std::uint64_t seed);

struct NormalFit {
  double mean = 0.0;
  double stddev = 0.0;
  double log_likelihood = 0.0;
};

struct GammaFit {
  double shape = 0.0;
  double scale = 0.0;
  double log_likelihood = 0.0;
};

NormalFit fit_normal(std::span<const double> samples);

// Newton iteration on the shape parameter; requires strictly positive,
// non-constant samples.
GammaFit fit_gamma(std::span<const double> samples);

double normal_log_likelihood(std::span<const double> samples, double mean, double stddev);
double gamma_log_likelihood(std::span<const double> samples, double shape, double scale);

}  // namespace hetpredict
