#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hetpredict/pipeline.hpp"
#include "hetpredict/sched_sim.hpp"

namespace hetpredict {

struct RunConfig {
  std::vector<std::filesystem::path> training;  // one file per training set
  std::optional<std::filesystem::path> evaluation;
  std::optional<std::filesystem::path> benchmarks;  // built-in reference profiles when unset
  std::optional<std::filesystem::path> app_benchmarks;
  bool invert_app_bench = false;
  std::optional<std::filesystem::path> dag;
  std::vector<Method> methods{Method::LotaruG, Method::LotaruA, Method::Naive,
                              Method::OnlineM, Method::OnlineP, Method::Accurate};
  double confidence = 0.95;
  std::uint64_t seed = 42;
  double prior_variance = 1.0;
  std::optional<double> input_size;
  std::vector<MachineId> targets;  // every non-local profile when empty
  std::size_t clusters = 200;
  std::size_t cluster_size = 20;
  std::vector<MachineId> pool{{"A1"}, {"A2"}, {"N1"}, {"N2"}, {"C2"}};
  std::size_t cost_nodes_per_type = 4;
  std::vector<BillingGranularity> billing{BillingGranularity::Hour, BillingGranularity::Minute};
  std::map<MachineId, double> hourly_price;  // 1.0 when unset
  std::map<MachineId, double> bandwidth_bps;  // overrides the reference network column
  std::filesystem::path out = "out";

  // Throws Config when an invariant is broken.
  void validate() const;
};

// Flat `key = value` lines, `#` starts a comment. Relative paths resolve
// against the directory of the config file. Unknown keys are Config errors.
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir, std::string_view source);
RunConfig load_config(const std::filesystem::path& path);

// Applies one `key = value` setting; shared by the file parser and flag overrides.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value,
                   const std::filesystem::path& base_dir);

std::vector<BillingGranularity> parse_billing(std::string_view value);

}  // namespace hetpredict
