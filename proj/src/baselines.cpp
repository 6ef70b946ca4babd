#include "hetpredict/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "hetpredict/error.hpp"
#include "hetpredict/predictor.hpp"
#include "hetpredict/stats.hpp"

namespace hetpredict {

NaiveModel fit_naive(std::span<const TaskRun> runs) {
  if (runs.empty()) throw Error(ErrorCode::TooFewRuns, "naive model needs at least one run");
  NaiveModel model;
  model.task = runs.front().task;
  std::vector<double> ratios;
  for (const auto& run : runs) {
    if (run.input_size_uncompressed > 0) {
      ratios.push_back(run.runtime_seconds() / static_cast<double>(run.input_size_uncompressed));
    }
  }
  model.mean_ratio = ratios.empty() ? 0.0 : stats::mean(ratios);
  return model;
}

double naive_predict(const NaiveModel& model, double input_size) { return model.mean_ratio * input_size; }

OnlineModel fit_online(std::span<const TaskRun> runs, OnlineVariant variant) {
  if (runs.empty()) throw Error(ErrorCode::TooFewRuns, "online model needs at least one run");
  OnlineModel model;
  model.task = runs.front().task;
  model.variant = variant;
  std::vector<double> sizes, runtimes;
  for (const auto& run : runs) {
    model.training.push_back({static_cast<double>(run.input_size_uncompressed), static_cast<double>(run.io_read),
                              static_cast<double>(run.io_write), run.runtime_seconds()});
    sizes.push_back(model.training.back().input_size);
    runtimes.push_back(model.training.back().runtime);
  }
  std::stable_sort(model.training.begin(), model.training.end(),
                   [](const OnlineSample& a, const OnlineSample& b) { return a.input_size < b.input_size; });
  model.correlation = sizes.size() >= 2 ? pearson(sizes, runtimes) : 0.0;
  return model;
}

double normal_log_likelihood(std::span<const double> samples, double mean, double stddev) {
  const double var = stddev * stddev;
  double ll = 0.0;
  for (double x : samples) ll += -0.5 * std::log(2.0 * std::numbers::pi * var) - (x - mean) * (x - mean) / (2.0 * var);
  return ll;
}

double gamma_log_likelihood(std::span<const double> samples, double shape, double scale) {
  double ll = 0.0;
  for (double x : samples) {
    ll += (shape - 1.0) * std::log(x) - x / scale - shape * std::log(scale) - std::lgamma(shape);
  }
  return ll;
}

NormalFit fit_normal(std::span<const double> samples) {
  NormalFit fit;
  fit.mean = stats::mean(samples);
  fit.stddev = std::sqrt(stats::variance(samples));
  if (fit.stddev > 0.0) fit.log_likelihood = normal_log_likelihood(samples, fit.mean, fit.stddev);
  return fit;
}

GammaFit fit_gamma(std::span<const double> samples) {
  const double m = stats::mean(samples);
  double mean_log = 0.0;
  for (double x : samples) {
    if (!(x > 0.0)) throw Error(ErrorCode::BadValue, "gamma fit needs positive samples");
    mean_log += std::log(x);
  }
  mean_log /= static_cast<double>(samples.size());
  const double s = std::log(m) - mean_log;
  if (!(s > 0.0)) throw Error(ErrorCode::BadValue, "gamma fit needs non-constant samples");

  // Closed-form starting point, then Newton on log(k) - digamma(k) = s.
  double k = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
  for (int iter = 0; iter < 100; ++iter) {
    const double g = std::log(k) - boost::math::digamma(k) - s;
    const double dg = 1.0 / k - boost::math::trigamma(k);
    double next = k - g / dg;
    if (!(next > 0.0)) next = 0.5 * k;
    const bool done = std::abs(next - k) <= 1e-10 * k;
    k = next;
    if (done) break;
  }
  GammaFit fit;
  fit.shape = k;
  fit.scale = m / k;
  fit.log_likelihood = gamma_log_likelihood(samples, fit.shape, fit.scale);
  return fit;
}

double online_predict(const OnlineModel& model, double input_size, std::uint64_t seed) {
  if (model.training.empty()) throw Error(ErrorCode::TooFewRuns, "online model has no training data");
  if (model.correlation > kCorrelationThreshold) {
    const auto nearest = std::min_element(model.training.begin(), model.training.end(),
                                          [input_size](const OnlineSample& a, const OnlineSample& b) {
                                            return std::abs(a.input_size - input_size) <
                                                   std::abs(b.input_size - input_size);
                                          });
    if (nearest->input_size <= 0.0) return nearest->runtime;
    return nearest->runtime * (input_size / nearest->input_size);
  }

  std::vector<double> runtimes;
  for (const auto& s : model.training) runtimes.push_back(s.runtime);
  const double mean = stats::mean(runtimes);
  if (model.variant == OnlineVariant::M) return mean;

  const auto normal = fit_normal(runtimes);
  if (!(normal.stddev > 0.0)) return mean;
  const auto gamma = fit_gamma(runtimes);

  std::mt19937_64 rng(seed);
  double draw = 0.0;
  if (gamma.log_likelihood > normal.log_likelihood) {
    draw = std::gamma_distribution<double>(gamma.shape, gamma.scale)(rng);
  } else {
    draw = std::normal_distribution<double>(normal.mean, normal.stddev)(rng);
  }
  // A non-positive runtime is meaningless; fall back to the smallest observation.
  if (!(draw > 0.0)) draw = *std::min_element(runtimes.begin(), runtimes.end());
  return draw;
}

}  // namespace hetpredict
