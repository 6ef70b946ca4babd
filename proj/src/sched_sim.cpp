#include "hetpredict/sched_sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <random>

#include "hetpredict/csv.hpp"
#include "hetpredict/error.hpp"
#include "hetpredict/stats.hpp"

namespace hetpredict {

std::vector<std::vector<double>> makespan_deviations(const MakespanTable& table) {
  std::vector<std::vector<double>> out;
  out.reserve(table.makespans.size());
  for (const auto& row : table.makespans) {
    if (row.size() != table.methods.size()) throw Error(ErrorCode::LengthMismatch, "makespan row vs methods");
    const double best = *std::min_element(row.begin(), row.end());
    if (!(best > 0.0)) throw Error(ErrorCode::BadValue, "non-positive makespan");
    std::vector<double> dev;
    dev.reserve(row.size());
    for (double m : row) dev.push_back((m - best) / best);
    out.push_back(std::move(dev));
  }
  return out;
}

std::vector<DeviationRow> makespan_deviation_stats(const MakespanTable& table) {
  const auto deviations = makespan_deviations(table);
  if (deviations.empty()) throw Error(ErrorCode::EmptyInput, "no clusters");
  std::vector<DeviationRow> rows;
  for (std::size_t m = 0; m < table.methods.size(); ++m) {
    std::vector<double> column;
    column.reserve(deviations.size());
    for (const auto& row : deviations) column.push_back(row[m]);
    DeviationRow r;
    r.method = table.methods[m];
    r.mean = stats::mean(column);
    r.p25 = stats::nearest_rank(column, 25);
    r.p50 = stats::nearest_rank(column, 50);
    r.p90 = stats::nearest_rank(column, 90);
    r.p95 = stats::nearest_rank(column, 95);
    r.p99 = stats::nearest_rank(column, 99);
    r.p999 = stats::nearest_rank(column, 99.9);
    r.max = *std::max_element(column.begin(), column.end());
    rows.push_back(r);
  }
  return rows;
}

void write_deviation_stats(std::ostream& out, std::span<const DeviationRow> rows) {
  out << "method,mean_pct,p25_pct,p50_pct,p90_pct,p95_pct,p99_pct,p99_9_pct,max_pct\n";
  for (const auto& r : rows) {
    out << r.method;
    for (double v : {r.mean, r.p25, r.p50, r.p90, r.p95, r.p99, r.p999, r.max}) out << ',' << csv::fixed(100.0 * v, 2);
    out << '\n';
  }
}

std::string_view to_string(BillingGranularity granularity) {
  return granularity == BillingGranularity::Hour ? "hour" : "minute";
}

double unit_seconds(BillingGranularity granularity) {
  return granularity == BillingGranularity::Hour ? 3600.0 : 60.0;
}

BillingModel BillingModel::from_hourly_prices(BillingGranularity granularity, const std::map<MachineId, double>& hourly) {
  BillingModel model;
  model.granularity = granularity;
  const double scale = granularity == BillingGranularity::Hour ? 1.0 : 1.0 / 60.0;
  for (const auto& [id, price] : hourly) {
    if (!(price > 0.0)) throw Error(ErrorCode::Config, "price for " + id.name + " must be positive");
    model.price_per_unit[id] = price * scale;
  }
  return model;
}

double predict_cost(const Schedule& schedule, const WorkflowDag& dag, const ClusterSpec& cluster,
                    const BillingModel& billing) {
  const auto n = cluster.nodes.size();
  std::vector<double> first(n, std::numeric_limits<double>::infinity());
  std::vector<double> last(n, -std::numeric_limits<double>::infinity());
  for (std::size_t t = 0; t < dag.size(); ++t) {
    if (dag.task(t).pseudo) continue;
    const auto& s = schedule.slots[t];
    first[s.node] = std::min(first[s.node], s.start);
    last[s.node] = std::max(last[s.node], s.finish);
  }
  const double unit = unit_seconds(billing.granularity);
  double cost = 0.0;
  for (std::size_t node = 0; node < n; ++node) {
    if (!(last[node] >= first[node])) continue;
    const auto price = billing.price_per_unit.find(cluster.nodes[node]);
    if (price == billing.price_per_unit.end()) throw Error(ErrorCode::Config, "no price for " + cluster.nodes[node].name);
    cost += std::ceil((last[node] - first[node]) / unit) * price->second;
  }
  return cost;
}

double cost_deviation_pct(double predicted, double actual) {
  if (!(actual > 0.0)) throw Error(ErrorCode::ZeroActual, "actual cost must be positive");
  return (predicted - actual) / actual * 100.0;
}

std::pair<std::size_t, std::size_t> pick_workload_pair(std::size_t pool_size, std::uint64_t cluster_seed) {
  if (pool_size == 0) throw Error(ErrorCode::EmptyInput, "workload pool is empty");
  if (pool_size == 1) return {0, 0};
  // Offset the stream so the pair is independent of the node-type draws.
  std::mt19937_64 rng(cluster_seed ^ 0x9e3779b97f4a7c15ULL);
  auto draw = [&rng](std::uint64_t bound) {
    const std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() / bound) * bound;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return static_cast<std::size_t>(x % bound);
  };
  const auto a = draw(pool_size);
  auto b = draw(pool_size - 1);
  if (b >= a) ++b;
  return {a, b};
}

std::vector<double> simulate_cluster(std::span<const Workload> pool, const ClusterSpec& cluster) {
  const auto [ia, ib] = pick_workload_pair(pool.size(), cluster.seed);
  const auto& a = pool[ia];
  const auto& b = pool[ib];
  const auto merged = merge_dags(a.dag, b.dag);
  const auto actual = merge_costs(merged, a.actual, b.actual);
  std::vector<double> makespans;
  makespans.reserve(a.estimates.size());
  for (std::size_t m = 0; m < a.estimates.size(); ++m) {
    const auto estimates = merge_costs(merged, a.estimates[m], b.estimates[m]);
    const auto plan = heft(merged.dag, cluster, estimates);
    makespans.push_back(execute_with_actuals(plan, merged.dag, cluster, actual).makespan);
  }
  return makespans;
}

MakespanTable run_scheduling_sweep_serial(std::span<const Workload> pool, std::span<const ClusterSpec> clusters,
                                          const std::vector<std::string>& methods) {
  MakespanTable table;
  table.methods = methods;
  for (const auto& cluster : clusters) table.makespans.push_back(simulate_cluster(pool, cluster));
  return table;
}

MakespanTable run_scheduling_sweep(std::span<const Workload> pool, std::span<const ClusterSpec> clusters,
                                   const std::vector<std::string>& methods) {
  MakespanTable table;
  table.methods = methods;
  table.makespans.resize(clusters.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(clusters.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      table.makespans[i] = simulate_cluster(pool, clusters[i]);
    } catch (...) {
#pragma omp critical(hetpredict_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

std::vector<CostRow> run_cost_experiment(std::span<const Workload> pool, const std::vector<std::string>& methods,
                                         const ClusterSpec& cloud, std::span<const BillingModel> billing) {
  std::vector<CostRow> rows;
  for (const auto& w : pool) {
    if (w.estimates.size() != methods.size()) throw Error(ErrorCode::LengthMismatch, "estimates vs methods");
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const auto plan = heft(w.dag, cloud, w.estimates[m]);
      const auto realized = execute_with_actuals(plan, w.dag, cloud, w.actual);
      for (const auto& model : billing) {
        CostRow row;
        row.workflow = w.workflow;
        row.training_set = w.training_set;
        row.method = methods[m];
        row.billing = model.granularity;
        row.predicted_cost = predict_cost(plan, w.dag, cloud, model);
        row.actual_cost = predict_cost(realized, w.dag, cloud, model);
        row.deviation_pct = cost_deviation_pct(row.predicted_cost, row.actual_cost);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void write_cost_rows(std::ostream& out, std::span<const CostRow> rows) {
  out << "workflow,training_set,method,billing,deviation_pct\n";
  for (const auto& r : rows) {
    out << r.workflow << ',' << r.training_set << ',' << r.method << ',' << to_string(r.billing) << ','
        << csv::fixed(r.deviation_pct, 2) << '\n';
  }
}

}  // namespace hetpredict
