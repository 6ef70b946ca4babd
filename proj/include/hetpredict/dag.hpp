#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hetpredict/trace.hpp"

namespace hetpredict {

struct DagTask {
  std::string workflow;
  std::string task;
  std::string instance_id;
  bool pseudo = false;  // zero-cost entry/exit node

  std::string label() const { return workflow + "/" + task + "/" + instance_id; }
};

struct DagEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  double transfer_bytes = 0.0;
};

// Task-instance DAG with a single zero-cost entry and exit. Tasks are addressed
// by dense index; index 0 is the entry and index 1 the exit.
class WorkflowDag {
 public:
  WorkflowDag();

  std::size_t add_task(DagTask task);
  void add_edge(std::size_t from, std::size_t to, double transfer_bytes);

  // Links entry to every task without predecessors and every task without
  // successors to exit, then checks acyclicity and reachability.
  void seal();

  static constexpr std::size_t entry() { return 0; }
  static constexpr std::size_t exit() { return 1; }

  std::size_t size() const { return tasks_.size(); }
  const DagTask& task(std::size_t i) const { return tasks_[i]; }
  const std::vector<DagTask>& tasks() const { return tasks_; }
  const std::vector<DagEdge>& edges() const { return edges_; }
  const std::vector<std::size_t>& out_edges(std::size_t i) const { return out_[i]; }
  const std::vector<std::size_t>& in_edges(std::size_t i) const { return in_[i]; }

  // Kahn order with smallest-index-first tie breaking; throws BadValue on a cycle.
  std::vector<std::size_t> topological_order() const;

 private:
  std::vector<DagTask> tasks_;
  std::vector<DagEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

// Runtime in seconds of every task on every machine type. Missing entries are
// NaN; pseudo tasks read as zero.
class CostTable {
 public:
  CostTable() = default;
  CostTable(std::size_t tasks, std::vector<MachineId> types);

  const std::vector<MachineId>& types() const { return types_; }
  std::optional<std::size_t> type_index(const MachineId& id) const;
  std::size_t tasks() const { return tasks_; }

  double at(std::size_t task, std::size_t type) const { return values_[task * types_.size() + type]; }
  void set(std::size_t task, std::size_t type, double seconds) { values_[task * types_.size() + type] = seconds; }
  bool has(std::size_t task, std::size_t type) const { return at(task, type) == at(task, type); }

 private:
  std::size_t tasks_ = 0;
  std::vector<MachineId> types_;
  std::vector<double> values_;
};

struct EdgeSpec {
  std::string workflow;
  std::string from_task;
  std::string to_task;
  std::optional<std::int64_t> transfer_bytes;
};

inline constexpr std::string_view kEdgeHeader = "workflow,from_task,to_task,transfer_bytes";

std::vector<EdgeSpec> parse_edge_csv(const std::filesystem::path& path);
std::vector<EdgeSpec> parse_edge_csv(std::istream& in, std::string_view source);
void write_edge_csv(std::ostream& out, const std::vector<EdgeSpec>& edges);

// Expands a task-level edge list into an instance DAG for one workflow using the
// instances present in `runs`. A task edge links instances pairwise when both
// tasks have the same instance ids and all-to-all otherwise. An edge without an
// explicit transfer size moves the producer's io_write bytes.
WorkflowDag build_workflow_dag(const std::string& workflow, const std::vector<EdgeSpec>& edges,
                               const std::vector<TaskRun>& runs);

// Puts two DAGs under one shared entry/exit pair. Returns the merged DAG and
// the index offset of `b`'s tasks (a's tasks keep their indices).
struct MergedDag {
  WorkflowDag dag;
  std::vector<std::size_t> from_a;  // a index -> merged index
  std::vector<std::size_t> from_b;  // b index -> merged index
};
MergedDag merge_dags(const WorkflowDag& a, const WorkflowDag& b);

CostTable merge_costs(const MergedDag& merged, const CostTable& a, const CostTable& b);

}  // namespace hetpredict
