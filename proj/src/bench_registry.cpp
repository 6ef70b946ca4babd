#include "hetpredict/bench_registry.hpp"

#include <fstream>
#include <sstream>

#include "hetpredict/csv.hpp"
#include "hetpredict/error.hpp"

namespace hetpredict {
namespace {

void expect_header(std::string_view line, std::string_view expected, std::string_view source) {
  const auto want = csv::split(expected);
  const auto got = csv::split(csv::chomp(line));
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (i >= got.size() || got[i] != want[i]) {
      throw Error(ErrorCode::MissingColumn, std::string(want[i]) + " in " + std::string(source));
    }
  }
}

double score(std::string_view field, std::string_view source, std::size_t line, const std::string& machine,
             std::string_view column) {
  const auto value = csv::parse_double(field);
  if (!value) {
    throw Error(ErrorCode::BadValue,
                std::string(source) + " row " + std::to_string(line) + " column " + std::string(column));
  }
  if (*value <= 0.0) {
    throw Error(ErrorCode::NonPositiveScore, machine + " " + std::string(column) + " in " + std::string(source));
  }
  return *value;
}

}  // namespace

double io_score(const MachineProfile& profile) { return 0.5 * (profile.read_iops + profile.write_iops); }

ProfileRegistry::ProfileRegistry(std::map<MachineId, MachineProfile> profiles, MachineId local,
                                 std::map<std::pair<std::string, MachineId>, AppBenchmark> app_benchmarks)
    : profiles_(std::move(profiles)), local_(std::move(local)), app_benchmarks_(std::move(app_benchmarks)) {
  if (!profiles_.contains(local_)) throw Error(ErrorCode::MissingLocal, "local machine '" + local_.name + "' has no profile");
}

const MachineProfile& ProfileRegistry::profile(const MachineId& id) const {
  const auto it = profiles_.find(id);
  if (it == profiles_.end()) throw Error(ErrorCode::BadValue, "unknown machine '" + id.name + "'");
  return it->second;
}

std::optional<AppBenchmark> ProfileRegistry::app_benchmark(const std::string& task, const MachineId& machine) const {
  const auto it = app_benchmarks_.find({task, machine});
  if (it == app_benchmarks_.end()) return std::nullopt;
  return it->second;
}

std::vector<MachineId> ProfileRegistry::targets() const {
  std::vector<MachineId> out;
  for (const auto& [id, _] : profiles_) {
    if (id != local_) out.push_back(id);
  }
  return out;
}

void ProfileRegistry::add_app_benchmarks(const std::vector<AppBenchmark>& benchmarks) {
  for (const auto& b : benchmarks) {
    if (!app_benchmarks_.emplace(std::pair{b.task, b.machine}, b).second) {
      throw Error(ErrorCode::DuplicateKey, "app benchmark (" + b.task + ", " + b.machine.name + ")");
    }
  }
}

ProfileRegistry load_profiles(std::istream& in, std::string_view source) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MissingColumn, "machine in " + std::string(source) + " (empty file)");
  expect_header(line, kProfileHeader, source);

  std::map<MachineId, MachineProfile> profiles;
  std::optional<MachineId> local;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto record = csv::chomp(line);
    if (record.empty()) continue;
    const auto f = csv::split(record);
    if (f.size() < 6 || f[0].empty()) {
      throw Error(ErrorCode::BadValue, std::string(source) + " row " + std::to_string(line_no));
    }
    MachineProfile p;
    p.machine.name = f[0];
    const auto& name = p.machine.name;
    p.cpu_events_per_s = score(f[2], source, line_no, name, "cpu_events_per_s");
    p.ram_score = score(f[3], source, line_no, name, "ram_score");
    p.read_iops = score(f[4], source, line_no, name, "read_iops");
    p.write_iops = score(f[5], source, line_no, name, "write_iops");

    bool is_local = false;
    if (f[1] == "1" || f[1] == "true") {
      is_local = true;
    } else if (!(f[1] == "0" || f[1] == "false" || f[1].empty())) {
      throw Error(ErrorCode::BadValue, std::string(source) + " row " + std::to_string(line_no) + " column is_local");
    }
    if (is_local) {
      if (local) throw Error(ErrorCode::DuplicateKey, "more than one local machine in " + std::string(source));
      local = p.machine;
    }
    if (!profiles.emplace(p.machine, p).second) {
      throw Error(ErrorCode::DuplicateKey, "machine " + name + " in " + std::string(source));
    }
  }
  if (!local) throw Error(ErrorCode::MissingLocal, "no row flagged is_local in " + std::string(source));
  return ProfileRegistry(std::move(profiles), *local);
}

ProfileRegistry load_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return load_profiles(in, path.string());
}

std::vector<AppBenchmark> load_app_benchmarks(std::istream& in, std::string_view source, bool time_like) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MissingColumn, "task in " + std::string(source) + " (empty file)");
  expect_header(line, kAppBenchmarkHeader, source);

  std::vector<AppBenchmark> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto record = csv::chomp(line);
    if (record.empty()) continue;
    const auto f = csv::split(record);
    if (f.size() < 3 || f[0].empty() || f[1].empty()) {
      throw Error(ErrorCode::BadValue, std::string(source) + " row " + std::to_string(line_no));
    }
    AppBenchmark b{std::string(f[0]), MachineId{std::string(f[1])}, 0.0};
    b.value = score(f[2], source, line_no, b.machine.name, "value");
    if (time_like) b.value = 1.0 / b.value;
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<AppBenchmark> load_app_benchmarks(const std::filesystem::path& path, bool time_like) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return load_app_benchmarks(in, path.string(), time_like);
}

void write_profiles(std::ostream& out, const ProfileRegistry& registry) {
  out << kProfileHeader << '\n';
  for (const auto& [id, p] : registry.profiles()) {
    out << id.name << ',' << (id == registry.local_id() ? 1 : 0) << ',' << p.cpu_events_per_s << ','
        << p.ram_score << ',' << p.read_iops << ',' << p.write_iops << '\n';
  }
}

void write_app_benchmarks(std::ostream& out, const ProfileRegistry& registry) {
  out << kAppBenchmarkHeader << '\n';
  for (const auto& [key, b] : registry.app_benchmarks()) {
    out << b.task << ',' << b.machine.name << ',' << csv::fixed(b.value, 6) << '\n';
  }
}

ProfileRegistry reference_profiles() {
  const MachineProfile rows[] = {
      {{"Local"}, 458, 18700, 437, 415}, {{"A1"}, 223, 11000, 306, 301}, {{"A2"}, 223, 11000, 341, 336},
      {{"N1"}, 369, 13400, 481, 483},    {{"N2"}, 468, 17000, 481, 483}, {{"C2"}, 523, 18900, 481, 483},
  };
  std::map<MachineId, MachineProfile> profiles;
  for (const auto& p : rows) profiles.emplace(p.machine, p);
  return ProfileRegistry(std::move(profiles), MachineId{"Local"});
}

}  // namespace hetpredict
