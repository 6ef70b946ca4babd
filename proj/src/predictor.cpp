#include "hetpredict/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <utility>

#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include "hetpredict/error.hpp"
#include "hetpredict/stats.hpp"

namespace hetpredict {
namespace {

Mat2 inverse(const Mat2& m) {
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (!(std::abs(det) > 0.0)) throw Error(ErrorCode::BadValue, "singular posterior precision");
  return Mat2{Vec2{m[1][1] / det, -m[0][1] / det}, Vec2{-m[1][0] / det, m[0][0] / det}};
}

std::vector<std::pair<std::string, std::string>> group_keys(const TraceSet& training,
                                                            std::vector<std::vector<TaskRun>>& groups) {
  std::map<std::pair<std::string, std::string>, std::vector<TaskRun>> by_key;
  for (const auto& run : training.runs) by_key[{run.workflow, run.task}].push_back(run);
  std::vector<std::pair<std::string, std::string>> keys;
  for (auto& [key, runs] : by_key) {
    keys.push_back(key);
    groups.push_back(std::move(runs));
  }
  return keys;
}

}  // namespace

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(xs.size()) + " vs " + std::to_string(ys.size()) + " values");
  }
  if (xs.size() < 2) throw Error(ErrorCode::TooFewPoints, "pearson needs at least two pairs");
  const double mx = stats::mean(xs);
  const double my = stats::mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationGate correlation_gate(std::span<const double> sizes, std::span<const double> runtimes,
                                 double threshold) {
  CorrelationGate gate;
  gate.coefficient = pearson(sizes, runtimes);
  gate.threshold = threshold;
  gate.decision = gate.coefficient > threshold ? GateDecision::Regression : GateDecision::MedianFallback;
  return gate;
}

BlrPosterior fit_blr(std::span<const double> sizes, std::span<const double> runtimes, const BlrOptions& options) {
  if (sizes.size() != runtimes.size()) throw Error(ErrorCode::LengthMismatch, "sizes vs runtimes");
  if (sizes.size() < 2) throw Error(ErrorCode::TooFewPoints, "regression needs at least two points");
  if (!(options.prior_variance > 0.0)) throw Error(ErrorCode::BadValue, "prior variance must be positive");

  BlrPosterior post;
  post.prior_variance = options.prior_variance;
  post.feature = {stats::mean(sizes), std::sqrt(stats::variance(sizes))};
  post.target = {stats::mean(runtimes), std::sqrt(stats::variance(runtimes))};
  if (!(post.feature.scale > 0.0) || !(post.target.scale > 0.0)) {
    throw Error(ErrorCode::BadValue, "regression needs non-constant sizes and runtimes");
  }

  const std::size_t n = sizes.size();
  std::vector<double> z(n), t(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = post.feature.apply(sizes[i]);
    t[i] = post.target.apply(runtimes[i]);
  }

  // Gram matrix and moment vector of the design [1, z].
  Mat2 gram{};
  Vec2 moment{};
  for (std::size_t i = 0; i < n; ++i) {
    gram[0][0] += 1.0;
    gram[0][1] += z[i];
    gram[1][1] += z[i] * z[i];
    moment[0] += t[i];
    moment[1] += z[i] * t[i];
  }
  gram[1][0] = gram[0][1];

  // Maximum-likelihood noise variance of an ordinary least-squares pre-fit.
  const Mat2 gram_inv = inverse(gram);
  const Vec2 ols{gram_inv[0][0] * moment[0] + gram_inv[0][1] * moment[1],
                 gram_inv[1][0] * moment[0] + gram_inv[1][1] * moment[1]};
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = t[i] - ols[0] - ols[1] * z[i];
    rss += r * r;
  }
  const double floor_sd = options.noise_floor_fraction * post.target.offset / post.target.scale;
  post.noise_variance = std::max(rss / static_cast<double>(n), floor_sd * floor_sd);
  if (!(post.noise_variance > 0.0)) post.noise_variance = std::numeric_limits<double>::min();

  const double inv_noise = 1.0 / post.noise_variance;
  const double inv_prior = 1.0 / post.prior_variance;
  Mat2 precision{};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) precision[r][c] = inv_noise * gram[r][c] + (r == c ? inv_prior : 0.0);
  }
  post.covariance = inverse(precision);
  // Symmetrize to kill rounding asymmetry from the explicit inverse.
  post.covariance[0][1] = post.covariance[1][0] = 0.5 * (post.covariance[0][1] + post.covariance[1][0]);
  for (int r = 0; r < 2; ++r) {
    post.mean[r] = inv_noise * (post.covariance[r][0] * moment[0] + post.covariance[r][1] * moment[1]);
  }
  return post;
}

TaskModel fit_task_model(std::span<const TaskRun> runs, const FitOptions& options) {
  if (runs.size() < kMinTrainingRuns) {
    const std::string name = runs.empty() ? std::string("<none>") : runs.front().workflow + "/" + runs.front().task;
    throw Error(ErrorCode::TooFewRuns, name + " has " + std::to_string(runs.size()) + " training runs, need " +
                                           std::to_string(kMinTrainingRuns));
  }
  const auto& first = runs.front();
  std::vector<double> sizes, runtimes;
  for (const auto& run : runs) {
    if (run.task != first.task || run.workflow != first.workflow) {
      throw Error(ErrorCode::MixedTasks, first.workflow + "/" + first.task + " and " + run.workflow + "/" + run.task);
    }
    if (run.machine != first.machine) {
      throw Error(ErrorCode::MixedMachines, first.machine.name + " and " + run.machine.name);
    }
    sizes.push_back(static_cast<double>(run.input_size_uncompressed));
    runtimes.push_back(run.runtime_seconds());
  }

  TaskModel model;
  model.workflow = first.workflow;
  model.task = first.task;
  model.machine = first.machine;
  model.training_count = runs.size();
  model.min_training_runtime = *std::min_element(runtimes.begin(), runtimes.end());
  model.gate = correlation_gate(sizes, runtimes, options.threshold);
  if (model.gate.decision == GateDecision::Regression) {
    model.variant = fit_blr(sizes, runtimes, options.blr);
  } else {
    model.variant = MedianRuntime{stats::median(runtimes)};
  }
  return model;
}

double gaussian_quantile(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw Error(ErrorCode::BadValue, "confidence must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 * (1.0 + confidence));
}

Prediction predict_local(const TaskModel& model, double input_size, double confidence) {
  Prediction p;
  p.confidence = confidence;
  p.machine = model.machine;
  if (const auto* median = std::get_if<MedianRuntime>(&model.variant)) {
    p.point = p.lower = p.upper = median->seconds;
    return p;
  }
  const auto& post = std::get<BlrPosterior>(model.variant);
  const Vec2 phi{1.0, post.feature.apply(input_size)};
  const double mean_std = phi[0] * post.mean[0] + phi[1] * post.mean[1];
  double quad = 0.0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) quad += phi[r] * post.covariance[r][c] * phi[c];
  }
  const double sd = post.target.scale * std::sqrt(post.noise_variance + quad);
  const double half_width = gaussian_quantile(confidence) * sd;
  p.point = post.target.invert(mean_std);
  p.lower = p.point - half_width;
  p.upper = p.point + half_width;
  if (p.point <= 0.0) {
    p.point = model.min_training_runtime;
    p.upper = std::max(p.upper, p.point);
  }
  p.lower = std::clamp(p.lower, 0.0, p.point);
  return p;
}

std::vector<TaskModel> fit_all_models_serial(const TraceSet& training, const FitOptions& options) {
  std::vector<std::vector<TaskRun>> groups;
  group_keys(training, groups);
  std::vector<TaskModel> models;
  models.reserve(groups.size());
  for (const auto& runs : groups) models.push_back(fit_task_model(runs, options));
  return models;
}

std::vector<TaskModel> fit_all_models(const TraceSet& training, const FitOptions& options) {
  std::vector<std::vector<TaskRun>> groups;
  group_keys(training, groups);
  std::vector<TaskModel> models(groups.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(groups.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      models[i] = fit_task_model(groups[i], options);
    } catch (...) {
#pragma omp critical(hetpredict_fit_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return models;
}

namespace {

nlohmann::json standardization_json(const Standardization& s) { return {{"offset", s.offset}, {"scale", s.scale}}; }

Standardization standardization_from(const nlohmann::json& j) {
  return {j.at("offset").get<double>(), j.at("scale").get<double>()};
}

}  // namespace

std::string models_to_json(const std::vector<TaskModel>& models) {
  nlohmann::json doc;
  doc["models"] = nlohmann::json::array();
  for (const auto& m : models) {
    nlohmann::json j;
    j["workflow"] = m.workflow;
    j["task"] = m.task;
    j["machine"] = m.machine.name;
    j["training_count"] = m.training_count;
    j["min_training_runtime_s"] = m.min_training_runtime;
    j["gate"] = {{"coefficient", m.gate.coefficient},
                 {"threshold", m.gate.threshold},
                 {"decision", m.gate.decision == GateDecision::Regression ? "regression" : "median"}};
    if (const auto* median = std::get_if<MedianRuntime>(&m.variant)) {
      j["variant"] = "median";
      j["median_s"] = median->seconds;
    } else {
      const auto& post = std::get<BlrPosterior>(m.variant);
      j["variant"] = "blr";
      j["posterior"] = {{"mean", post.mean},
                        {"covariance", post.covariance},
                        {"noise_variance", post.noise_variance},
                        {"prior_variance", post.prior_variance},
                        {"feature", standardization_json(post.feature)},
                        {"target", standardization_json(post.target)}};
    }
    doc["models"].push_back(std::move(j));
  }
  return doc.dump(2);
}

std::vector<TaskModel> models_from_json(std::string_view text) {
  std::vector<TaskModel> models;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& j : doc.at("models")) {
      TaskModel m;
      m.workflow = j.at("workflow").get<std::string>();
      m.task = j.at("task").get<std::string>();
      m.machine.name = j.at("machine").get<std::string>();
      m.training_count = j.at("training_count").get<std::size_t>();
      m.min_training_runtime = j.at("min_training_runtime_s").get<double>();
      const auto& gate = j.at("gate");
      m.gate.coefficient = gate.at("coefficient").get<double>();
      m.gate.threshold = gate.at("threshold").get<double>();
      m.gate.decision =
          gate.at("decision").get<std::string>() == "regression" ? GateDecision::Regression : GateDecision::MedianFallback;
      if (j.at("variant").get<std::string>() == "median") {
        m.variant = MedianRuntime{j.at("median_s").get<double>()};
      } else {
        const auto& p = j.at("posterior");
        BlrPosterior post;
        post.mean = p.at("mean").get<Vec2>();
        post.covariance = p.at("covariance").get<Mat2>();
        post.noise_variance = p.at("noise_variance").get<double>();
        post.prior_variance = p.at("prior_variance").get<double>();
        post.feature = standardization_from(p.at("feature"));
        post.target = standardization_from(p.at("target"));
        m.variant = post;
      }
      models.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadValue, std::string("model JSON: ") + e.what());
  }
  return models;
}

}  // namespace hetpredict
