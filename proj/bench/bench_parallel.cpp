// Serial reference loops vs their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "hetpredict/heft.hpp"
#include "hetpredict/pipeline.hpp"
#include "hetpredict/synthetic.hpp"

using namespace hetpredict;

namespace {

const SyntheticData& data() {
  static const SyntheticData d = [] {
    SyntheticOptions opts;
    opts.seed = 7;
    return generate_synthetic(opts);
  }();
  return d;
}

const std::vector<Method>& methods() {
  static const std::vector<Method> m{Method::LotaruG, Method::LotaruA, Method::Naive,
                                     Method::OnlineM, Method::OnlineP, Method::Accurate};
  return m;
}

std::vector<std::string> method_names() {
  std::vector<std::string> out;
  for (auto m : methods()) out.emplace_back(to_string(m));
  return out;
}

const std::vector<MachineId>& pool_types() {
  static const std::vector<MachineId> p{{"A1"}, {"A2"}, {"N1"}, {"N2"}, {"C2"}};
  return p;
}

const std::vector<Workload>& workloads() {
  static const std::vector<Workload> w = [] {
    std::vector<Workload> out;
    const auto& d = data();
    for (std::size_t i = 0; i < d.training.size(); ++i) {
      const PredictorSuite suite(d.training[i], d.registry, {});
      auto part = build_workloads(suite, static_cast<int>(i), d.evaluation, d.edges, pool_types(), methods());
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }();
  return w;
}

template <auto Sweep>
void BM_sweep(benchmark::State& state) {
  const auto clusters = generate_clusters(static_cast<std::size_t>(state.range(0)), 20, pool_types(), 42,
                                          reference_bandwidths());
  const auto names = method_names();
  for (auto _ : state) benchmark::DoNotOptimize(Sweep(workloads(), clusters, names));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

// Every local run of every training set and evaluation sample in one set.
const TraceSet& local_runs() {
  static const TraceSet t = [] {
    TraceSet out;
    for (const auto& set : data().training) out.runs.insert(out.runs.end(), set.runs.begin(), set.runs.end());
    for (const auto& run : data().evaluation.runs) {
      if (run.machine.name != "Local") continue;
      out.runs.push_back(run);
      out.runs.back().instance_id += "-eval";
    }
    return out;
  }();
  return t;
}

template <auto Fit>
void BM_fit(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Fit(local_runs(), FitOptions{}));
}

}  // namespace

BENCHMARK(BM_sweep<run_scheduling_sweep_serial>)->Name("sweep/serial")->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep<run_scheduling_sweep>)->Name("sweep/omp")->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fit<fit_all_models_serial>)->Name("fit_all_models/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fit<fit_all_models>)->Name("fit_all_models/omp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
