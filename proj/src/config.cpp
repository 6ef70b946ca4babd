#include "hetpredict/config.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include "hetpredict/csv.hpp"
#include "hetpredict/error.hpp"

namespace hetpredict {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> list(const std::string& value) {
  std::vector<std::string> out;
  for (auto field : csv::split(value)) {
    auto item = trim(field);
    if (!item.empty()) out.push_back(std::move(item));
  }
  return out;
}

double positive(const std::string& key, const std::string& value) {
  const auto v = csv::parse_double(value);
  if (!v || !(*v > 0.0)) throw Error(ErrorCode::Config, key + " must be a positive number, got '" + value + "'");
  return *v;
}

std::size_t count(const std::string& key, const std::string& value) {
  const auto v = csv::parse_int(value);
  if (!v || *v < 1) throw Error(ErrorCode::Config, key + " must be a positive integer, got '" + value + "'");
  return static_cast<std::size_t>(*v);
}

bool flag(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(ErrorCode::Config, key + " must be true or false, got '" + value + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

std::vector<BillingGranularity> parse_billing(std::string_view value) {
  if (value == "hour") return {BillingGranularity::Hour};
  if (value == "minute") return {BillingGranularity::Minute};
  if (value == "both") return {BillingGranularity::Hour, BillingGranularity::Minute};
  throw Error(ErrorCode::Config, "billing must be hour, minute or both, got '" + std::string(value) + "'");
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value,
                   const std::filesystem::path& base) {
  if (key == "training") {
    c.training.clear();
    for (const auto& item : list(value)) c.training.push_back(resolve(base, item));
  } else if (key == "evaluation") {
    c.evaluation = resolve(base, value);
  } else if (key == "benchmarks") {
    c.benchmarks = resolve(base, value);
  } else if (key == "app_benchmarks") {
    c.app_benchmarks = resolve(base, value);
  } else if (key == "invert_app_bench") {
    c.invert_app_bench = flag(key, value);
  } else if (key == "dag") {
    c.dag = resolve(base, value);
  } else if (key == "methods") {
    c.methods = parse_methods(value);
  } else if (key == "confidence") {
    const auto v = csv::parse_double(value);
    if (!v || !(*v > 0.0 && *v < 1.0)) throw Error(ErrorCode::Config, "confidence must lie in (0, 1), got '" + value + "'");
    c.confidence = *v;
  } else if (key == "seed") {
    const auto v = csv::parse_int(value);
    if (!v || *v < 0) throw Error(ErrorCode::Config, "seed must be a non-negative integer, got '" + value + "'");
    c.seed = static_cast<std::uint64_t>(*v);
  } else if (key == "prior_variance") {
    c.prior_variance = positive(key, value);
  } else if (key == "input_size") {
    c.input_size = positive(key, value);
  } else if (key == "targets") {
    c.targets.clear();
    for (const auto& item : list(value)) c.targets.push_back({item});
  } else if (key == "clusters") {
    c.clusters = count(key, value);
  } else if (key == "cluster_size") {
    c.cluster_size = count(key, value);
  } else if (key == "pool") {
    c.pool.clear();
    for (const auto& item : list(value)) c.pool.push_back({item});
  } else if (key == "cost_nodes_per_type") {
    c.cost_nodes_per_type = count(key, value);
  } else if (key == "billing") {
    c.billing = parse_billing(value);
  } else if (key.starts_with("price.")) {
    c.hourly_price[{key.substr(6)}] = positive(key, value);
  } else if (key.starts_with("bandwidth.")) {
    c.bandwidth_bps[{key.substr(10)}] = positive(key, value);
  } else if (key == "out") {
    c.out = resolve(base, value);
  } else {
    throw Error(ErrorCode::Config, "unknown key '" + key + "'");
  }
}

void RunConfig::validate() const {
  if (methods.empty()) throw Error(ErrorCode::Config, "no methods selected");
  if (pool.empty()) throw Error(ErrorCode::Config, "empty machine pool");
  if (billing.empty()) throw Error(ErrorCode::Config, "no billing granularity selected");
  if (evaluation) {
    for (const auto& t : training) {
      if (std::filesystem::weakly_canonical(t) == std::filesystem::weakly_canonical(*evaluation)) {
        throw Error(ErrorCode::Config, "training and evaluation traces must be different files: " + t.string());
      }
    }
  }
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir, std::string_view source) {
  RunConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    const auto where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw Error(ErrorCode::Config, where + "expected key = value");
    const auto key = trim(std::string_view(text).substr(0, eq));
    const auto value = trim(std::string_view(text).substr(eq + 1));
    try {
      apply_setting(config, key, value, base_dir);
    } catch (const Error& e) {
      throw Error(e.code(), where + e.detail());
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot read config " + path.string());
  return parse_config(in, path.parent_path(), path.string());
}

}  // namespace hetpredict
