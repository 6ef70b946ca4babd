#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hetpredict/bench_registry.hpp"
#include "hetpredict/dag.hpp"
#include "hetpredict/trace.hpp"

namespace hetpredict {

// Linear-with-noise trace generator. Five nf-core style workflows, every task
// instance runs (a + b * input) * (1 + eps) seconds on the local machine with
// eps ~ N(0, noise), and is slowed down on other machines by a per-tool mix of
// the CPU, I/O and memory score ratios of the reference profiles.
struct SyntheticOptions {
  std::uint64_t seed = 42;
  int samples = 6;           // evaluation instances per task
  int training_sets = 2;
  double noise = 0.10;       // relative runtime noise (standard deviation)
  double downsample = 0.10;  // fraction of one sample used for local profiling
  double constant_tool_fraction = 0.2;
};

struct SyntheticData {
  ProfileRegistry registry;  // reference profiles plus tool benchmarks
  std::vector<TraceSet> training;
  TraceSet evaluation;
  std::vector<EdgeSpec> edges;
  // Ground truth multiplier: target runtime / local runtime per (tool, machine).
  std::map<std::pair<std::string, MachineId>, double> true_factor;
};

inline const std::vector<std::string>& synthetic_workflows() {
  static const std::vector<std::string> names{"bacass", "atacseq", "chipseq", "eager", "methylseq"};
  return names;
}

SyntheticData generate_synthetic(const SyntheticOptions& options);

// Writes training_<i>.csv, evaluation.csv, profiles.csv, app_benchmarks.csv,
// dag.csv and a run.cfg referencing them into `dir`.
void write_synthetic(const SyntheticData& data, const std::filesystem::path& dir, std::uint64_t seed);

}  // namespace hetpredict
