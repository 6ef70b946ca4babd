#include "hetpredict/heft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "hetpredict/error.hpp"

namespace hetpredict {
namespace {

std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() / n) * n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

double duration(const WorkflowDag& dag, const CostTable& costs, std::span<const std::size_t> columns,
                std::size_t task, std::size_t node) {
  if (dag.task(task).pseudo) return 0.0;
  return costs.at(task, columns[node]);
}

double ready_time(const WorkflowDag& dag, const ClusterSpec& cluster, const std::vector<Slot>& slots,
                  std::size_t task, std::size_t node) {
  double ready = 0.0;
  for (auto e : dag.in_edges(task)) {
    const auto& edge = dag.edges()[e];
    const auto& pred = slots[edge.from];
    ready = std::max(ready, pred.finish + comm_time(cluster, pred.node, node, edge.transfer_bytes));
  }
  return ready;
}

// Earliest start >= ready at which `length` seconds fit between the busy
// intervals of one node (sorted by start).
double earliest_gap(const std::vector<std::pair<double, double>>& busy, double ready, double length) {
  double candidate = ready;
  for (const auto& [start, finish] : busy) {
    if (candidate + length <= start) return candidate;
    candidate = std::max(candidate, finish);
  }
  return candidate;
}

}  // namespace

std::map<MachineId, double> reference_bandwidths() {
  return {{{"Local"}, 1e9}, {{"A1"}, 1e9}, {{"A2"}, 1e9}, {{"N1"}, 16e9}, {{"N2"}, 16e9}, {{"C2"}, 16e9}};
}

ClusterSpec generate_cluster(std::size_t size, std::span<const MachineId> pool, std::uint64_t seed,
                             const std::map<MachineId, double>& bandwidths) {
  if (pool.empty()) throw Error(ErrorCode::Config, "machine pool is empty");
  ClusterSpec cluster;
  cluster.seed = seed;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < size; ++i) {
    const auto& type = pool[bounded_draw(rng, pool.size())];
    const auto bw = bandwidths.find(type);
    if (bw == bandwidths.end()) throw Error(ErrorCode::Config, "no bandwidth configured for " + type.name);
    cluster.nodes.push_back(type);
    cluster.bandwidth_bps.push_back(bw->second);
  }
  return cluster;
}

std::vector<ClusterSpec> generate_clusters(std::size_t count, std::size_t size, std::span<const MachineId> pool,
                                           std::uint64_t seed, const std::map<MachineId, double>& bandwidths) {
  std::vector<ClusterSpec> clusters;
  clusters.reserve(count);
  for (std::size_t i = 0; i < count; ++i) clusters.push_back(generate_cluster(size, pool, seed + i, bandwidths));
  return clusters;
}

double comm_time(const ClusterSpec& cluster, std::size_t from_node, std::size_t to_node, double bytes) {
  if (from_node == to_node || bytes <= 0.0) return 0.0;
  return bytes * 8.0 / std::min(cluster.bandwidth_bps[from_node], cluster.bandwidth_bps[to_node]);
}

double mean_link_bandwidth(const ClusterSpec& cluster) {
  const std::size_t n = cluster.nodes.size();
  if (n < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) sum += std::min(cluster.bandwidth_bps[i], cluster.bandwidth_bps[j]);
  }
  return sum / static_cast<double>(n * (n - 1) / 2);
}

std::vector<std::size_t> node_columns(const WorkflowDag& dag, const ClusterSpec& cluster, const CostTable& costs) {
  std::vector<std::size_t> columns;
  columns.reserve(cluster.nodes.size());
  for (const auto& type : cluster.nodes) {
    const auto col = costs.type_index(type);
    if (!col) throw Error(ErrorCode::MissingEstimate, "no runtimes for machine type " + type.name);
    columns.push_back(*col);
  }
  for (std::size_t t = 0; t < dag.size(); ++t) {
    if (dag.task(t).pseudo) continue;
    for (std::size_t n = 0; n < columns.size(); ++n) {
      if (!costs.has(t, columns[n])) {
        throw Error(ErrorCode::MissingEstimate, "(" + dag.task(t).label() + ", " + cluster.nodes[n].name + ")");
      }
    }
  }
  return columns;
}

std::vector<double> upward_ranks(const WorkflowDag& dag, const ClusterSpec& cluster, const CostTable& estimates) {
  const auto columns = node_columns(dag, cluster, estimates);
  const double mean_bw = mean_link_bandwidth(cluster);
  std::vector<double> ranks(dag.size(), 0.0);
  const auto order = dag.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto t = *it;
    double mean_cost = 0.0;
    for (std::size_t n = 0; n < columns.size(); ++n) mean_cost += duration(dag, estimates, columns, t, n);
    mean_cost /= static_cast<double>(columns.size());
    double tail = 0.0;
    for (auto e : dag.out_edges(t)) {
      const auto& edge = dag.edges()[e];
      const double comm = mean_bw > 0.0 ? edge.transfer_bytes * 8.0 / mean_bw : 0.0;
      tail = std::max(tail, comm + ranks[edge.to]);
    }
    ranks[t] = mean_cost + tail;
  }
  return ranks;
}

std::vector<std::size_t> priority_order(const WorkflowDag& dag, std::span<const double> ranks) {
  const auto topo = dag.topological_order();
  std::vector<std::size_t> position(dag.size());
  for (std::size_t i = 0; i < topo.size(); ++i) position[topo[i]] = i;
  std::vector<std::size_t> order(dag.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ranks[a] != ranks[b]) return ranks[a] > ranks[b];
    return position[a] < position[b];
  });
  return order;
}

Schedule heft(const WorkflowDag& dag, const ClusterSpec& cluster, const CostTable& estimates) {
  if (cluster.nodes.empty()) throw Error(ErrorCode::Config, "cluster has no nodes");
  const auto columns = node_columns(dag, cluster, estimates);
  const auto ranks = upward_ranks(dag, cluster, estimates);

  Schedule schedule;
  schedule.priority = priority_order(dag, ranks);
  schedule.slots.assign(dag.size(), Slot{});
  std::vector<std::vector<std::pair<double, double>>> busy(cluster.nodes.size());

  for (const auto t : schedule.priority) {
    double best_finish = std::numeric_limits<double>::infinity();
    Slot best;
    for (std::size_t n = 0; n < cluster.nodes.size(); ++n) {
      const double length = duration(dag, estimates, columns, t, n);
      const double ready = ready_time(dag, cluster, schedule.slots, t, n);
      const double start = dag.task(t).pseudo ? ready : earliest_gap(busy[n], ready, length);
      if (start + length < best_finish) {
        best_finish = start + length;
        best = Slot{n, start, start + length};
      }
    }
    schedule.slots[t] = best;
    if (!dag.task(t).pseudo) {
      auto& node = busy[best.node];
      const auto pos = std::upper_bound(node.begin(), node.end(), std::pair{best.start, best.finish});
      node.insert(pos, {best.start, best.finish});
    }
  }
  schedule.makespan = schedule.slots[WorkflowDag::exit()].finish;
  return schedule;
}

Schedule execute_with_actuals(const Schedule& plan, const WorkflowDag& dag, const ClusterSpec& cluster,
                              const CostTable& actuals) {
  const auto columns = node_columns(dag, cluster, actuals);
  std::vector<std::size_t> rank_of(dag.size());
  for (std::size_t i = 0; i < plan.priority.size(); ++i) rank_of[plan.priority[i]] = i;

  // Planned (start, finish, placement position) is consistent with both the
  // precedence edges and the per-node order, so it is a valid replay order.
  std::vector<std::size_t> order(dag.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& sa = plan.slots[a];
    const auto& sb = plan.slots[b];
    if (sa.start != sb.start) return sa.start < sb.start;
    if (sa.finish != sb.finish) return sa.finish < sb.finish;
    return rank_of[a] < rank_of[b];
  });

  Schedule realized;
  realized.priority = plan.priority;
  realized.slots.assign(dag.size(), Slot{});
  std::vector<double> node_free(cluster.nodes.size(), 0.0);
  for (const auto t : order) {
    const auto node = plan.slots[t].node;
    double start = ready_time(dag, cluster, realized.slots, t, node);
    const bool pseudo = dag.task(t).pseudo;
    if (!pseudo) start = std::max(start, node_free[node]);
    const double finish = start + duration(dag, actuals, columns, t, node);
    realized.slots[t] = Slot{node, start, finish};
    if (!pseudo) node_free[node] = finish;
  }
  realized.makespan = realized.slots[WorkflowDag::exit()].finish;
  return realized;
}

std::optional<std::string> validate_schedule(const Schedule& schedule, const WorkflowDag& dag,
                                             const ClusterSpec& cluster, const CostTable& costs, double tolerance) {
  std::ostringstream why;
  if (schedule.slots.size() != dag.size()) return "slot count does not match the DAG";
  const auto columns = node_columns(dag, cluster, costs);
  double latest = 0.0;
  for (std::size_t t = 0; t < dag.size(); ++t) {
    const auto& s = schedule.slots[t];
    if (s.node >= cluster.nodes.size()) return "task " + dag.task(t).label() + " on unknown node";
    const double expected = dag.task(t).pseudo ? 0.0 : costs.at(t, columns[s.node]);
    if (std::abs((s.finish - s.start) - expected) > tolerance * std::max(1.0, expected)) {
      why << "task " << dag.task(t).label() << " runs " << s.finish - s.start << " s, expected " << expected;
      return why.str();
    }
    if (s.start < -tolerance) return "task " + dag.task(t).label() + " starts before time zero";
    latest = std::max(latest, s.finish);
  }
  for (const auto& e : dag.edges()) {
    const auto& from = schedule.slots[e.from];
    const auto& to = schedule.slots[e.to];
    const double arrival = from.finish + comm_time(cluster, from.node, to.node, e.transfer_bytes);
    if (to.start + tolerance * std::max(1.0, arrival) < arrival) {
      why << dag.task(e.to).label() << " starts at " << to.start << " before input from " << dag.task(e.from).label()
          << " arrives at " << arrival;
      return why.str();
    }
  }
  std::vector<std::vector<std::pair<double, double>>> per_node(cluster.nodes.size());
  for (std::size_t t = 0; t < dag.size(); ++t) {
    const auto& s = schedule.slots[t];
    if (!dag.task(t).pseudo && s.finish > s.start) per_node[s.node].emplace_back(s.start, s.finish);
  }
  for (std::size_t n = 0; n < per_node.size(); ++n) {
    auto& intervals = per_node[n];
    std::sort(intervals.begin(), intervals.end());
    for (std::size_t i = 1; i < intervals.size(); ++i) {
      if (intervals[i].first + tolerance * std::max(1.0, intervals[i - 1].second) < intervals[i - 1].second) {
        why << "overlap on node " << n << " at " << intervals[i].first;
        return why.str();
      }
    }
  }
  if (std::abs(schedule.makespan - latest) > tolerance * std::max(1.0, latest)) return "makespan is not the last finish";
  return std::nullopt;
}

}  // namespace hetpredict
