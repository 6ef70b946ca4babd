#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hetpredict {

struct MachineId {
  std::string name;

  friend auto operator<=>(const MachineId&, const MachineId&) = default;
};

enum class TraceLabel { Training, Evaluation };

// One observed execution of one task instance on one machine.
struct TaskRun {
  std::string workflow;
  std::string task;
  std::string instance_id;
  MachineId machine;
  std::int64_t input_size_uncompressed = 0;
  std::optional<std::int64_t> input_size_compressed;
  std::int64_t runtime_ms = 1;
  std::int64_t io_read = 0;
  std::int64_t io_write = 0;
  std::optional<double> cpu_utilization;
  std::optional<std::int64_t> peak_memory;

  double runtime_seconds() const { return static_cast<double>(runtime_ms) / 1000.0; }

  friend bool operator==(const TaskRun&, const TaskRun&) = default;
};

struct TraceSet {
  std::vector<TaskRun> runs;
  TraceLabel label = TraceLabel::Training;
};

inline constexpr std::string_view kTraceHeader =
    "workflow,task,instance_id,machine,input_size_uncompressed,input_size_compressed,"
    "runtime_ms,io_read_bytes,io_write_bytes,cpu_pct,peak_memory_bytes";

// Reads a trace CSV. Throws Error with MissingColumn, BadValue or DuplicateKey;
// a Training set additionally rejects runs from more than one machine
// (MixedMachines).
TraceSet parse_trace_csv(const std::filesystem::path& path, TraceLabel label = TraceLabel::Training);
TraceSet parse_trace_csv(std::istream& in, std::string_view source,
                         TraceLabel label = TraceLabel::Training);

void write_trace_csv(std::ostream& out, const TraceSet& traces);
void write_trace_csv(const std::filesystem::path& path, const TraceSet& traces);

// Lexicographic by task name; runs keep their input order inside each group.
std::map<std::string, std::vector<TaskRun>> group_by_task(const TraceSet& traces);

std::map<std::string, TraceSet> group_by_workflow(const TraceSet& traces);

}  // namespace hetpredict

template <>
struct std::hash<hetpredict::MachineId> {
  std::size_t operator()(const hetpredict::MachineId& id) const noexcept {
    return std::hash<std::string>{}(id.name);
  }
};
