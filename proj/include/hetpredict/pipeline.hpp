#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hetpredict/baselines.hpp"
#include "hetpredict/bench_registry.hpp"
#include "hetpredict/dag.hpp"
#include "hetpredict/evaluation.hpp"
#include "hetpredict/extrapolation.hpp"
#include "hetpredict/predictor.hpp"
#include "hetpredict/sched_sim.hpp"

namespace hetpredict {

enum class Method { LotaruG, LotaruA, Naive, OnlineM, OnlineP, Accurate };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

// Comma-separated method names; throws Config on an unknown or empty list.
std::vector<Method> parse_methods(std::string_view list);

struct SuiteOptions {
  FitOptions fit;
  double confidence = 0.95;
  std::uint64_t seed = 0;
};

struct MethodPrediction {
  Prediction prediction;
  std::optional<RuntimeFactor> factor;  // absent for the baselines
};

// Per-(workflow, task) models of every predictor, trained on one local
// training set. Accurate is not a predictor and is rejected here.
class PredictorSuite {
 public:
  PredictorSuite(const TraceSet& training, const ProfileRegistry& registry, SuiteOptions options = {});

  MethodPrediction predict(Method method, const std::string& workflow, const std::string& task,
                           const std::string& instance_id, double input_size, const MachineId& target) const;

  bool has_model(const std::string& workflow, const std::string& task) const {
    return entries_.contains({workflow, task});
  }
  std::vector<TaskModel> task_models() const;
  const ProfileRegistry& registry() const { return registry_; }
  const SuiteOptions& options() const { return options_; }

 private:
  struct Entry {
    TaskModel model;
    NaiveModel naive;
    OnlineModel online_m;
    OnlineModel online_p;
  };

  const Entry& entry(const std::string& workflow, const std::string& task) const;

  ProfileRegistry registry_;
  SuiteOptions options_;
  std::map<std::pair<std::string, std::string>, Entry> entries_;
};

// One task instance of the evaluation traces with its actual runtime (seconds)
// on every machine it was measured on.
struct ObservedInstance {
  std::string workflow;
  std::string task;
  std::string instance_id;
  double input_size = 0.0;
  std::map<MachineId, double> actual;
};

std::vector<ObservedInstance> collect_instances(const TraceSet& evaluation);

struct PredictionRow {
  std::string workflow;
  std::string task;
  std::string method;
  Prediction prediction;
  double factor = 1.0;
  std::string factor_source;
};

struct TaskQuery {
  std::string workflow;
  std::string task;
  double input_size = 0.0;
};

// Query size per (workflow, task): the override if given, else the median
// input size of the task's evaluation instances. Throws Config if neither is
// available.
std::vector<TaskQuery> task_queries(const TraceSet& training, const TraceSet* evaluation,
                                    std::optional<double> input_size_override);

std::vector<PredictionRow> predict_rows(const PredictorSuite& suite, std::span<const TaskQuery> queries,
                                        std::span<const MachineId> targets, std::span<const Method> methods);

void write_prediction_csv(std::ostream& out, std::span<const PredictionRow> rows);

// Error records for every evaluation instance, target and method. Throws
// MissingActual if an instance lacks a measurement on a target and
// MissingModel if a task was never profiled.
std::vector<ErrorRecord> evaluate_methods(const PredictorSuite& suite, std::span<const ObservedInstance> instances,
                                          std::span<const MachineId> targets, std::span<const Method> methods);

// Schedulable workloads for every workflow of the evaluation traces, with one
// estimate table per method over the machine types in `types`.
std::vector<Workload> build_workloads(const PredictorSuite& suite, int training_set, const TraceSet& evaluation,
                                      const std::vector<EdgeSpec>& edges, const std::vector<MachineId>& types,
                                      std::span<const Method> methods);

// Stable 64-bit seed for one task instance (FNV-1a of its key mixed with `seed`).
std::uint64_t instance_seed(std::uint64_t seed, std::string_view workflow, std::string_view task,
                            std::string_view instance_id);

}  // namespace hetpredict
