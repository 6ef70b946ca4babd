#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hetpredict/trace.hpp"

namespace hetpredict {

// Microbenchmark scores of one node type. All four scores are strictly positive.
struct MachineProfile {
  MachineId machine;
  double cpu_events_per_s = 0.0;
  double ram_score = 0.0;
  double read_iops = 0.0;
  double write_iops = 0.0;
};

// Task-specific benchmark result; higher value means a faster machine.
struct AppBenchmark {
  std::string task;
  MachineId machine;
  double value = 0.0;
};

// I/O score used by the general runtime factor: mean of read and write IOPS.
double io_score(const MachineProfile& profile);

class ProfileRegistry {
 public:
  ProfileRegistry(std::map<MachineId, MachineProfile> profiles, MachineId local,
                  std::map<std::pair<std::string, MachineId>, AppBenchmark> app_benchmarks = {});

  const MachineId& local_id() const { return local_; }
  const MachineProfile& local() const { return profiles_.at(local_); }
  const MachineProfile& profile(const MachineId& id) const;
  bool contains(const MachineId& id) const { return profiles_.contains(id); }

  const std::map<MachineId, MachineProfile>& profiles() const { return profiles_; }
  const std::map<std::pair<std::string, MachineId>, AppBenchmark>& app_benchmarks() const {
    return app_benchmarks_;
  }
  std::optional<AppBenchmark> app_benchmark(const std::string& task, const MachineId& machine) const;

  // Every machine except the local one, in name order.
  std::vector<MachineId> targets() const;

  void add_app_benchmarks(const std::vector<AppBenchmark>& benchmarks);

 private:
  std::map<MachineId, MachineProfile> profiles_;
  MachineId local_;
  std::map<std::pair<std::string, MachineId>, AppBenchmark> app_benchmarks_;
};

inline constexpr std::string_view kProfileHeader =
    "machine,is_local,cpu_events_per_s,ram_score,read_iops,write_iops";
inline constexpr std::string_view kAppBenchmarkHeader = "task,machine,value";

ProfileRegistry load_profiles(const std::filesystem::path& path);
ProfileRegistry load_profiles(std::istream& in, std::string_view source);

// With time_like set, each value is a measured benchmark runtime and is stored as
// its reciprocal so that higher still means faster.
std::vector<AppBenchmark> load_app_benchmarks(const std::filesystem::path& path, bool time_like = false);
std::vector<AppBenchmark> load_app_benchmarks(std::istream& in, std::string_view source,
                                              bool time_like = false);

void write_profiles(std::ostream& out, const ProfileRegistry& registry);
void write_app_benchmarks(std::ostream& out, const ProfileRegistry& registry);

// The six node types profiled for the evaluation cluster, with "Local" as the
// profiling machine.
ProfileRegistry reference_profiles();

}  // namespace hetpredict
