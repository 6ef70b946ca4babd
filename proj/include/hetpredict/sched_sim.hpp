#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hetpredict/dag.hpp"
#include "hetpredict/heft.hpp"

namespace hetpredict {

// Realized makespans, one row per cluster and one column per method.
struct MakespanTable {
  std::vector<std::string> methods;
  std::vector<std::vector<double>> makespans;
};

// Relative gap to the best method of the same cluster, as fractions.
std::vector<std::vector<double>> makespan_deviations(const MakespanTable& table);

struct DeviationRow {
  std::string method;
  double mean = 0.0;
  double p25 = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
  double p999 = 0.0;
  double max = 0.0;
};

// Mean and nearest-rank percentiles of each method's deviations.
std::vector<DeviationRow> makespan_deviation_stats(const MakespanTable& table);

void write_deviation_stats(std::ostream& out, std::span<const DeviationRow> rows);

enum class BillingGranularity { Hour, Minute };

std::string_view to_string(BillingGranularity granularity);
double unit_seconds(BillingGranularity granularity);

struct BillingModel {
  BillingGranularity granularity = BillingGranularity::Hour;
  std::map<MachineId, double> price_per_unit;

  // Per-minute prices are the hourly price divided by 60.
  static BillingModel from_hourly_prices(BillingGranularity granularity, const std::map<MachineId, double>& hourly);
};

// Each node that ran a real task is rented from its first start to its last
// finish, rounded up to whole billing units.
double predict_cost(const Schedule& schedule, const WorkflowDag& dag, const ClusterSpec& cluster,
                    const BillingModel& billing);

// (predicted - actual) / actual * 100.
double cost_deviation_pct(double predicted, double actual);

// One schedulable workflow with its actual runtimes and one estimate table per
// method (aligned with the method list handed to the experiments).
struct Workload {
  std::string workflow;
  int training_set = 0;
  WorkflowDag dag;
  CostTable actual;
  std::vector<CostTable> estimates;
};

// Two distinct pool indices for cluster `cluster_seed`, reproducible from the seed.
std::pair<std::size_t, std::size_t> pick_workload_pair(std::size_t pool_size, std::uint64_t cluster_seed);

// Makespan of one co-scheduled workload pair on one cluster for every method:
// HEFT plans with the method's estimates, execution replays with actuals.
std::vector<double> simulate_cluster(std::span<const Workload> pool, const ClusterSpec& cluster);

// Every cluster is independent: run_scheduling_sweep splits them across OpenMP
// threads, run_scheduling_sweep_serial is the reference loop. Both produce the
// same table.
MakespanTable run_scheduling_sweep(std::span<const Workload> pool, std::span<const ClusterSpec> clusters,
                                   const std::vector<std::string>& methods);
MakespanTable run_scheduling_sweep_serial(std::span<const Workload> pool, std::span<const ClusterSpec> clusters,
                                          const std::vector<std::string>& methods);

struct CostRow {
  std::string workflow;
  int training_set = 0;
  std::string method;
  BillingGranularity billing = BillingGranularity::Hour;
  double predicted_cost = 0.0;
  double actual_cost = 0.0;
  double deviation_pct = 0.0;
};

// Plans each workload alone on `cloud` per method and compares the cost of the
// plan with the cost of its replay on actual runtimes.
std::vector<CostRow> run_cost_experiment(std::span<const Workload> pool, const std::vector<std::string>& methods,
                                         const ClusterSpec& cloud, std::span<const BillingModel> billing);

void write_cost_rows(std::ostream& out, std::span<const CostRow> rows);

}  // namespace hetpredict
