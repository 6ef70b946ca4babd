#pragma once

#include <span>
#include <string>
#include <string_view>

#include "hetpredict/bench_registry.hpp"
#include "hetpredict/predictor.hpp"

namespace hetpredict {

enum class FactorSource { General, AppSpecific, MedianOfFactors };

std::string_view to_string(FactorSource source);

// Multiplier that turns a local runtime into a runtime on `target`.
struct RuntimeFactor {
  std::string task;  // empty for the task-agnostic general factor
  MachineId target;
  double factor = 1.0;
  FactorSource source = FactorSource::General;
};

// 0.5 * cpu_local/cpu_target + 0.5 * io_local/io_target.
RuntimeFactor general_factor(const MachineProfile& local, const MachineProfile& target);

// local.value / target.value. Throws TaskMismatch if the benchmarks belong to
// different tasks.
RuntimeFactor app_factor(const AppBenchmark& local, const AppBenchmark& target);

// Median of the supplied factors, for a task that has no benchmark of its own.
// Throws NoFactors on empty input.
RuntimeFactor fallback_factor(std::span<const RuntimeFactor> existing);

// Exact application factor if both machines benchmarked `task`, otherwise the
// median of the target's application factors, otherwise the general factor.
RuntimeFactor resolve_app_factor(const ProfileRegistry& registry, const std::string& task, const MachineId& target);

Prediction extrapolate(const Prediction& local, const RuntimeFactor& factor);

}  // namespace hetpredict
