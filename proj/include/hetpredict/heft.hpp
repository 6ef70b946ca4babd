#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hetpredict/dag.hpp"

namespace hetpredict {

// A concrete cluster: one machine type and one NIC bandwidth (bits/s) per node.
struct ClusterSpec {
  std::vector<MachineId> nodes;
  std::vector<double> bandwidth_bps;
  std::uint64_t seed = 0;
};

// Network column of the reference node types: 1 Gbps for Local/A1/A2,
// 16 Gbps for N1/N2/C2.
std::map<MachineId, double> reference_bandwidths();

// Draws `size` node types uniformly from `pool`. Cluster i uses an mt19937_64
// seeded with seed + i and rejection sampling for the bounded draw, so the
// output depends only on (seed, i) and is identical on every platform.
ClusterSpec generate_cluster(std::size_t size, std::span<const MachineId> pool, std::uint64_t seed,
                             const std::map<MachineId, double>& bandwidths);
std::vector<ClusterSpec> generate_clusters(std::size_t count, std::size_t size, std::span<const MachineId> pool,
                                           std::uint64_t seed, const std::map<MachineId, double>& bandwidths);

// Seconds to move `bytes` between two nodes: zero on the same node, otherwise
// limited by the slower NIC.
double comm_time(const ClusterSpec& cluster, std::size_t from_node, std::size_t to_node, double bytes);

// Mean link bandwidth over distinct node pairs; used for the average
// communication cost in rank computation. Zero for a single-node cluster.
double mean_link_bandwidth(const ClusterSpec& cluster);

struct Slot {
  std::size_t node = 0;
  double start = 0.0;
  double finish = 0.0;
};

struct Schedule {
  std::vector<Slot> slots;              // indexed by DAG task
  std::vector<std::size_t> priority;    // order in which tasks were placed
  double makespan = 0.0;
};

// Maps every cluster node to its column in `costs`; throws MissingEstimate if a
// node type has no column or a real task lacks a value for it.
std::vector<std::size_t> node_columns(const WorkflowDag& dag, const ClusterSpec& cluster, const CostTable& costs);

std::vector<double> upward_ranks(const WorkflowDag& dag, const ClusterSpec& cluster, const CostTable& estimates);

// Descending rank, ties broken by topological position.
std::vector<std::size_t> priority_order(const WorkflowDag& dag, std::span<const double> ranks);

// Insertion-based HEFT. Node ties go to the lowest node index.
Schedule heft(const WorkflowDag& dag, const ClusterSpec& cluster, const CostTable& estimates);

// Replays a planned schedule with actual runtimes: same task-to-node mapping,
// same per-node order, times recomputed from precedence and node availability.
Schedule execute_with_actuals(const Schedule& plan, const WorkflowDag& dag, const ClusterSpec& cluster,
                              const CostTable& actuals);

// Independent feasibility check: durations match `costs`, precedence plus
// communication delay is respected and no two real tasks overlap on one node.
// Returns a description of the first violation.
std::optional<std::string> validate_schedule(const Schedule& schedule, const WorkflowDag& dag,
                                             const ClusterSpec& cluster, const CostTable& costs,
                                             double tolerance = 1e-9);

}  // namespace hetpredict
