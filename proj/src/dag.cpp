#include "hetpredict/dag.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <utility>

#include "hetpredict/csv.hpp"
#include "hetpredict/error.hpp"

namespace hetpredict {

WorkflowDag::WorkflowDag() {
  add_task(DagTask{"", "entry", "", true});
  add_task(DagTask{"", "exit", "", true});
}

std::size_t WorkflowDag::add_task(DagTask task) {
  tasks_.push_back(std::move(task));
  out_.emplace_back();
  in_.emplace_back();
  return tasks_.size() - 1;
}

void WorkflowDag::add_edge(std::size_t from, std::size_t to, double transfer_bytes) {
  if (from >= size() || to >= size() || from == to) throw Error(ErrorCode::BadValue, "invalid DAG edge");
  edges_.push_back({from, to, transfer_bytes});
  out_[from].push_back(edges_.size() - 1);
  in_[to].push_back(edges_.size() - 1);
}

void WorkflowDag::seal() {
  bool any = false;
  for (std::size_t i = 2; i < size(); ++i) {
    any = true;
    if (in_[i].empty()) add_edge(entry(), i, 0.0);
    if (out_[i].empty()) add_edge(i, exit(), 0.0);
  }
  if (!any && out_[entry()].empty()) add_edge(entry(), exit(), 0.0);
  topological_order();
}

std::vector<std::size_t> WorkflowDag::topological_order() const {
  std::vector<std::size_t> indegree(size());
  for (const auto& e : edges_) ++indegree[e.to];
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < size(); ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const auto i = ready.top();
    ready.pop();
    order.push_back(i);
    for (auto e : out_[i]) {
      if (--indegree[edges_[e].to] == 0) ready.push(edges_[e].to);
    }
  }
  if (order.size() != size()) throw Error(ErrorCode::BadValue, "workflow graph has a cycle");
  return order;
}

CostTable::CostTable(std::size_t tasks, std::vector<MachineId> types)
    : tasks_(tasks), types_(std::move(types)),
      values_(tasks * types_.size(), std::numeric_limits<double>::quiet_NaN()) {}

std::optional<std::size_t> CostTable::type_index(const MachineId& id) const {
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i] == id) return i;
  }
  return std::nullopt;
}

std::vector<EdgeSpec> parse_edge_csv(std::istream& in, std::string_view source) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MissingColumn, "workflow in " + std::string(source));
  const auto want = csv::split(kEdgeHeader);
  const auto got = csv::split(csv::chomp(line));
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (i >= got.size() || got[i] != want[i]) {
      throw Error(ErrorCode::MissingColumn, std::string(want[i]) + " in " + std::string(source));
    }
  }
  std::vector<EdgeSpec> edges;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto record = csv::chomp(line);
    if (record.empty()) continue;
    const auto f = csv::split(record);
    if (f.size() != 4 || f[0].empty() || f[1].empty() || f[2].empty()) {
      throw Error(ErrorCode::BadValue, std::string(source) + " row " + std::to_string(line_no));
    }
    EdgeSpec e{std::string(f[0]), std::string(f[1]), std::string(f[2]), std::nullopt};
    if (!f[3].empty()) {
      const auto bytes = csv::parse_int(f[3]);
      if (!bytes || *bytes < 0) {
        throw Error(ErrorCode::BadValue, std::string(source) + " row " + std::to_string(line_no) + " column transfer_bytes");
      }
      e.transfer_bytes = *bytes;
    }
    edges.push_back(std::move(e));
  }
  return edges;
}

std::vector<EdgeSpec> parse_edge_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return parse_edge_csv(in, path.string());
}

void write_edge_csv(std::ostream& out, const std::vector<EdgeSpec>& edges) {
  out << kEdgeHeader << '\n';
  for (const auto& e : edges) {
    out << e.workflow << ',' << e.from_task << ',' << e.to_task << ',';
    if (e.transfer_bytes) out << *e.transfer_bytes;
    out << '\n';
  }
}

WorkflowDag build_workflow_dag(const std::string& workflow, const std::vector<EdgeSpec>& edges,
                               const std::vector<TaskRun>& runs) {
  // task -> instance -> io_write of the first run seen for that instance
  std::map<std::string, std::map<std::string, std::int64_t>> instances;
  for (const auto& r : runs) {
    if (r.workflow != workflow) continue;
    instances[r.task].try_emplace(r.instance_id, r.io_write);
  }

  WorkflowDag dag;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const auto& [task, ids] : instances) {
    for (const auto& [id, _] : ids) index[{task, id}] = dag.add_task(DagTask{workflow, task, id, false});
  }

  for (const auto& e : edges) {
    if (e.workflow != workflow) continue;
    const auto from = instances.find(e.from_task);
    const auto to = instances.find(e.to_task);
    if (from == instances.end() || to == instances.end()) {
      throw Error(ErrorCode::BadValue, "edge " + workflow + ":" + e.from_task + "->" + e.to_task +
                                           " references a task with no runs");
    }
    const bool pairwise = from->second.size() == to->second.size() &&
                          std::equal(from->second.begin(), from->second.end(), to->second.begin(),
                                     [](const auto& a, const auto& b) { return a.first == b.first; });
    for (const auto& [src_id, io_write] : from->second) {
      const double bytes = e.transfer_bytes ? static_cast<double>(*e.transfer_bytes) : static_cast<double>(io_write);
      const auto src = index.at({e.from_task, src_id});
      if (pairwise) {
        dag.add_edge(src, index.at({e.to_task, src_id}), bytes);
      } else {
        for (const auto& [dst_id, _] : to->second) dag.add_edge(src, index.at({e.to_task, dst_id}), bytes);
      }
    }
  }
  dag.seal();
  return dag;
}

MergedDag merge_dags(const WorkflowDag& a, const WorkflowDag& b) {
  MergedDag merged;
  auto copy = [&merged](const WorkflowDag& src, std::vector<std::size_t>& map) {
    map.assign(src.size(), 0);
    map[WorkflowDag::entry()] = WorkflowDag::entry();
    map[WorkflowDag::exit()] = WorkflowDag::exit();
    for (std::size_t i = 2; i < src.size(); ++i) map[i] = merged.dag.add_task(src.task(i));
  };
  copy(a, merged.from_a);
  copy(b, merged.from_b);
  auto link = [&merged](const WorkflowDag& src, const std::vector<std::size_t>& map) {
    for (const auto& e : src.edges()) {
      if (src.task(e.from).pseudo || src.task(e.to).pseudo) continue;
      merged.dag.add_edge(map[e.from], map[e.to], e.transfer_bytes);
    }
  };
  link(a, merged.from_a);
  link(b, merged.from_b);
  merged.dag.seal();
  return merged;
}

CostTable merge_costs(const MergedDag& merged, const CostTable& a, const CostTable& b) {
  CostTable out(merged.dag.size(), a.types());
  for (std::size_t t = 0; t < a.types().size(); ++t) {
    for (std::size_t i = 2; i < merged.from_a.size(); ++i) out.set(merged.from_a[i], t, a.at(i, t));
    const auto bt = b.type_index(a.types()[t]);
    for (std::size_t i = 2; i < merged.from_b.size(); ++i) {
      if (bt) out.set(merged.from_b[i], t, b.at(i, *bt));
    }
  }
  return out;
}

}  // namespace hetpredict
