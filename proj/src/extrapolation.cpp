#include "hetpredict/extrapolation.hpp"

#include <vector>

#include "hetpredict/error.hpp"
#include "hetpredict/stats.hpp"

namespace hetpredict {

std::string_view to_string(FactorSource source) {
  switch (source) {
    case FactorSource::General: return "general";
    case FactorSource::AppSpecific: return "app-specific";
    case FactorSource::MedianOfFactors: return "median-of-factors";
  }
  return "unknown";
}

RuntimeFactor general_factor(const MachineProfile& local, const MachineProfile& target) {
  RuntimeFactor f;
  f.target = target.machine;
  f.factor = 0.5 * (local.cpu_events_per_s / target.cpu_events_per_s) + 0.5 * (io_score(local) / io_score(target));
  f.source = FactorSource::General;
  return f;
}

RuntimeFactor app_factor(const AppBenchmark& local, const AppBenchmark& target) {
  if (local.task != target.task) throw Error(ErrorCode::TaskMismatch, local.task + " vs " + target.task);
  return RuntimeFactor{local.task, target.machine, local.value / target.value, FactorSource::AppSpecific};
}

RuntimeFactor fallback_factor(std::span<const RuntimeFactor> existing) {
  if (existing.empty()) throw Error(ErrorCode::NoFactors, "no application factors to take the median of");
  std::vector<double> values;
  values.reserve(existing.size());
  for (const auto& f : existing) values.push_back(f.factor);
  return RuntimeFactor{"", existing.front().target, stats::median(values), FactorSource::MedianOfFactors};
}

RuntimeFactor resolve_app_factor(const ProfileRegistry& registry, const std::string& task, const MachineId& target) {
  const auto& local = registry.local_id();
  if (target == local) return RuntimeFactor{task, target, 1.0, FactorSource::AppSpecific};

  const auto local_bench = registry.app_benchmark(task, local);
  const auto target_bench = registry.app_benchmark(task, target);
  if (local_bench && target_bench) return app_factor(*local_bench, *target_bench);

  std::vector<RuntimeFactor> known;
  for (const auto& [key, bench] : registry.app_benchmarks()) {
    if (key.second != target) continue;
    if (const auto other = registry.app_benchmark(key.first, local)) known.push_back(app_factor(*other, bench));
  }
  if (!known.empty()) {
    auto f = fallback_factor(known);
    f.task = task;
    return f;
  }

  auto f = general_factor(registry.local(), registry.profile(target));
  f.task = task;
  return f;
}

Prediction extrapolate(const Prediction& local, const RuntimeFactor& factor) {
  Prediction out = local;
  out.point *= factor.factor;
  out.lower *= factor.factor;
  out.upper *= factor.factor;
  out.machine = factor.target;
  return out;
}

}  // namespace hetpredict
