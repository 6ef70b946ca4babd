#include "hetpredict/trace.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "hetpredict/csv.hpp"
#include "hetpredict/error.hpp"

namespace hetpredict {
namespace {

constexpr std::size_t kColumnCount = 11;

std::string where(std::string_view source, std::size_t line, std::string_view column) {
  std::ostringstream os;
  os << source << " row " << line << " column " << column;
  return os.str();
}

void check_header(std::string_view header, std::string_view source) {
  const auto expected = csv::split(kTraceHeader);
  const auto actual = csv::split(csv::chomp(header));
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i >= actual.size() || actual[i] != expected[i]) {
      throw Error(ErrorCode::MissingColumn, std::string(expected[i]) + " in " + std::string(source));
    }
  }
  if (actual.size() != expected.size()) {
    throw Error(ErrorCode::BadValue,
                std::string(source) + " header has unexpected column " + std::string(actual[expected.size()]));
  }
}

std::int64_t non_negative(std::string_view field, std::string_view source, std::size_t line,
                          std::string_view column) {
  const auto value = csv::parse_int(field);
  if (!value || *value < 0) throw Error(ErrorCode::BadValue, where(source, line, column));
  return *value;
}

std::optional<std::int64_t> optional_non_negative(std::string_view field, std::string_view source,
                                                  std::size_t line, std::string_view column) {
  if (field.empty()) return std::nullopt;
  return non_negative(field, source, line, column);
}

std::string shortest(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace

TraceSet parse_trace_csv(std::istream& in, std::string_view source, TraceLabel label) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MissingColumn, "workflow in " + std::string(source) + " (empty file)");
  check_header(line, source);

  TraceSet traces;
  traces.label = label;
  std::set<std::tuple<std::string, std::string, std::string, std::string>> keys;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto record = csv::chomp(line);
    if (record.empty()) continue;
    const auto f = csv::split(record);
    if (f.size() != kColumnCount) {
      throw Error(ErrorCode::BadValue, where(source, line_no, "*") + ": expected 11 fields");
    }

    TaskRun run;
    run.workflow = f[0];
    run.task = f[1];
    run.instance_id = f[2];
    run.machine.name = f[3];
    if (run.workflow.empty()) throw Error(ErrorCode::BadValue, where(source, line_no, "workflow"));
    if (run.task.empty()) throw Error(ErrorCode::BadValue, where(source, line_no, "task"));
    if (run.machine.name.empty()) throw Error(ErrorCode::BadValue, where(source, line_no, "machine"));
    run.input_size_uncompressed = non_negative(f[4], source, line_no, "input_size_uncompressed");
    run.input_size_compressed = optional_non_negative(f[5], source, line_no, "input_size_compressed");
    run.runtime_ms = non_negative(f[6], source, line_no, "runtime_ms");
    if (run.runtime_ms == 0) throw Error(ErrorCode::BadValue, where(source, line_no, "runtime_ms"));
    run.io_read = non_negative(f[7], source, line_no, "io_read_bytes");
    run.io_write = non_negative(f[8], source, line_no, "io_write_bytes");
    if (!f[9].empty()) {
      const auto cpu = csv::parse_double(f[9]);
      if (!cpu || *cpu < 0.0) throw Error(ErrorCode::BadValue, where(source, line_no, "cpu_pct"));
      run.cpu_utilization = *cpu;
    }
    run.peak_memory = optional_non_negative(f[10], source, line_no, "peak_memory_bytes");

    if (!keys.emplace(run.workflow, run.task, run.instance_id, run.machine.name).second) {
      throw Error(ErrorCode::DuplicateKey, std::string(source) + " row " + std::to_string(line_no) + ": (" +
                                               run.workflow + ", " + run.task + ", " + run.instance_id +
                                               ", " + run.machine.name + ")");
    }
    if (label == TraceLabel::Training && !traces.runs.empty() &&
        traces.runs.front().machine != run.machine) {
      throw Error(ErrorCode::MixedMachines, std::string(source) + " row " + std::to_string(line_no) +
                                                ": training traces must come from one machine, saw " +
                                                traces.runs.front().machine.name + " and " + run.machine.name);
    }
    traces.runs.push_back(std::move(run));
  }
  return traces;
}

TraceSet parse_trace_csv(const std::filesystem::path& path, TraceLabel label) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return parse_trace_csv(in, path.string(), label);
}

void write_trace_csv(std::ostream& out, const TraceSet& traces) {
  out << kTraceHeader << '\n';
  for (const auto& r : traces.runs) {
    out << r.workflow << ',' << r.task << ',' << r.instance_id << ',' << r.machine.name << ','
        << r.input_size_uncompressed << ',';
    if (r.input_size_compressed) out << *r.input_size_compressed;
    out << ',' << r.runtime_ms << ',' << r.io_read << ',' << r.io_write << ',';
    if (r.cpu_utilization) out << shortest(*r.cpu_utilization);
    out << ',';
    if (r.peak_memory) out << *r.peak_memory;
    out << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const TraceSet& traces) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write_trace_csv(out, traces);
}

std::map<std::string, std::vector<TaskRun>> group_by_task(const TraceSet& traces) {
  std::map<std::string, std::vector<TaskRun>> groups;
  for (const auto& run : traces.runs) groups[run.task].push_back(run);
  return groups;
}

std::map<std::string, TraceSet> group_by_workflow(const TraceSet& traces) {
  std::map<std::string, TraceSet> groups;
  for (const auto& run : traces.runs) {
    auto& set = groups[run.workflow];
    set.label = traces.label;
    set.runs.push_back(run);
  }
  return groups;
}

}  // namespace hetpredict
