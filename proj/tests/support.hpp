#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "hetpredict/trace.hpp"

namespace testing {

inline hetpredict::TaskRun make_run(std::string workflow, std::string task, std::string instance, std::string machine,
                                    std::int64_t size, std::int64_t runtime_ms) {
  hetpredict::TaskRun run;
  run.workflow = std::move(workflow);
  run.task = std::move(task);
  run.instance_id = std::move(instance);
  run.machine = {std::move(machine)};
  run.input_size_uncompressed = size;
  run.runtime_ms = runtime_ms;
  run.io_read = size;
  run.io_write = size / 2;
  return run;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("hetpredict-" + tag + "-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path data_dir() { return HETPREDICT_DATA_DIR; }

}  // namespace testing
