#include "hetpredict/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "hetpredict/error.hpp"

namespace hetpredict {
namespace {

constexpr double kGB = 1e9;

const std::vector<std::string>& tool_names() {
  static const std::vector<std::string> names{
      "fastqc",    "trimgalore", "bwa_mem",   "samtools_sort", "picard_markdup", "bowtie2",  "macs2",
      "preseq",    "deeptools",  "qualimap",  "bismark",       "damageprofiler", "unicycler", "prokka",
      "kraken2",   "featurecounts", "bedtools", "homer",       "multiqc_stats",  "methyldackel"};
  return names;
}

const std::map<std::string, int>& workflow_sizes() {
  static const std::map<std::string, int> sizes{
      {"bacass", 5}, {"atacseq", 14}, {"chipseq", 14}, {"eager", 13}, {"methylseq", 8}};
  return sizes;
}

struct Tool {
  double cpu_weight = 0.5;
  double ram_exponent = 0.0;
  bool constant = false;
};

struct TaskShape {
  std::string tool;
  double full_runtime = 0.0;  // local seconds at a full sample of ratio 1
  double alpha = 0.0;         // intercept as a fraction of full_runtime
  double size_ratio = 1.0;    // task input / sample size
  double write_ratio = 0.5;
};

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double true_multiplier(const Tool& tool, const MachineProfile& local, const MachineProfile& target) {
  const double mix = tool.cpu_weight * local.cpu_events_per_s / target.cpu_events_per_s +
                     (1.0 - tool.cpu_weight) * io_score(local) / io_score(target);
  return mix * std::pow(local.ram_score / target.ram_score, tool.ram_exponent);
}

double noisy(std::mt19937_64& rng, double value, double noise) {
  std::normal_distribution<double> eps(0.0, noise);
  double e = eps(rng);
  e = std::clamp(e, -3.0 * noise, 3.0 * noise);
  return value * (1.0 + e);
}

std::int64_t to_ms(double seconds) { return std::max<std::int64_t>(1, std::llround(seconds * 1000.0)); }

}  // namespace

SyntheticData generate_synthetic(const SyntheticOptions& options) {
  if (options.samples < 1 || options.training_sets < 1 || options.noise < 0.0 || options.downsample <= 0.0) {
    throw Error(ErrorCode::Config, "invalid synthetic generator options");
  }
  std::mt19937_64 rng(options.seed);
  const auto reference = reference_profiles();
  const auto& local = reference.local();

  std::map<std::string, Tool> tools;
  for (const auto& name : tool_names()) {
    Tool t;
    t.cpu_weight = uniform(rng, 0.2, 0.8);
    t.ram_exponent = uniform(rng, 0.1, 0.5);
    t.constant = name != "fastqc" && uniform(rng, 0.0, 1.0) < options.constant_tool_fraction;
    tools.emplace(name, t);
  }

  SyntheticData data{reference, {}, {}, {}, {}};
  for (const auto& [name, tool] : tools) {
    for (const auto& [id, profile] : reference.profiles()) {
      data.true_factor[{name, id}] = true_multiplier(tool, local, profile);
    }
  }

  // Tool benchmarks for every other tool, local score 1, measured with 2% noise.
  std::vector<AppBenchmark> benchmarks;
  std::normal_distribution<double> bench_noise(0.0, 0.02);
  for (std::size_t i = 0; i < tool_names().size(); i += 2) {
    const auto& name = tool_names()[i];
    for (const auto& [id, profile] : reference.profiles()) {
      const double value = id == reference.local_id() ? 1.0 : (1.0 + bench_noise(rng)) / data.true_factor.at({name, id});
      benchmarks.push_back({name, id, value});
    }
  }
  data.registry.add_app_benchmarks(benchmarks);

  data.evaluation.label = TraceLabel::Evaluation;
  data.training.resize(static_cast<std::size_t>(options.training_sets));

  for (const auto& workflow : synthetic_workflows()) {
    const int task_count = workflow_sizes().at(workflow);
    std::vector<std::string> pool(tool_names().begin() + 1, tool_names().end());
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<TaskShape> shapes;
    for (int j = 0; j < task_count; ++j) {
      TaskShape s;
      s.tool = j == 0 ? "fastqc" : pool[static_cast<std::size_t>(j - 1)];
      s.full_runtime = uniform(rng, 120.0, 1800.0);
      s.alpha = uniform(rng, 0.005, 0.03);
      s.size_ratio = uniform(rng, 0.3, 1.5);
      s.write_ratio = uniform(rng, 0.3, 1.0);
      shapes.push_back(s);
    }

    for (int j = 1; j < task_count; ++j) {
      const int first = uniform(rng, 0.0, 1.0) < 0.6 ? j - 1 : std::uniform_int_distribution<int>(0, j - 1)(rng);
      data.edges.push_back({workflow, shapes[static_cast<std::size_t>(first)].tool, shapes[static_cast<std::size_t>(j)].tool, {}});
      if (j >= 2 && uniform(rng, 0.0, 1.0) < 0.25) {
        int second = std::uniform_int_distribution<int>(0, j - 1)(rng);
        if (second != first) {
          data.edges.push_back(
              {workflow, shapes[static_cast<std::size_t>(second)].tool, shapes[static_cast<std::size_t>(j)].tool, {}});
        }
      }
    }

    std::vector<double> sample_sizes;
    for (int s = 0; s < options.samples; ++s) sample_sizes.push_back(uniform(rng, 1.0, 4.0) * kGB);

    // A sample of size S gives task t an input of size_ratio * S; the intercept
    // is fixed by the full-size runtime of a ratio-1 sample of 2.5 GB.
    auto local_runtime = [&](const TaskShape& s, double input) {
      const auto& tool = tools.at(s.tool);
      if (tool.constant) return s.full_runtime;
      const double intercept = s.alpha * s.full_runtime;
      const double slope = (s.full_runtime - intercept) / (2.5 * kGB);
      return intercept + slope * input;
    };

    auto make_run = [&](const TaskShape& s, const std::string& instance, const MachineId& machine, double input) {
      TaskRun run;
      run.workflow = workflow;
      run.task = s.tool;
      run.instance_id = instance;
      run.machine = machine;
      run.input_size_uncompressed = std::llround(input);
      const double seconds = local_runtime(s, input) * data.true_factor.at({s.tool, machine});
      run.runtime_ms = to_ms(noisy(rng, seconds, options.noise));
      run.io_read = std::llround(input);
      run.io_write = std::llround(input * s.write_ratio);
      return run;
    };

    for (int t = 0; t < options.training_sets; ++t) {
      const auto sample = static_cast<std::size_t>(t % options.samples);
      const int partitions = std::uniform_int_distribution<int>(3, 5)(rng);
      const double weight_sum = partitions * (partitions + 1) / 2.0;
      for (int p = 0; p < partitions; ++p) {
        const double part = options.downsample * sample_sizes[sample] * (p + 1) / weight_sum;
        for (const auto& s : shapes) {
          data.training[static_cast<std::size_t>(t)].runs.push_back(
              make_run(s, "p" + std::to_string(p), reference.local_id(), part * s.size_ratio));
        }
      }
    }

    for (int sample = 0; sample < options.samples; ++sample) {
      for (const auto& s : shapes) {
        for (const auto& [id, _] : reference.profiles()) {
          data.evaluation.runs.push_back(make_run(s, "s" + std::to_string(sample), id,
                                                  sample_sizes[static_cast<std::size_t>(sample)] * s.size_ratio));
        }
      }
    }
  }
  return data;
}

void write_synthetic(const SyntheticData& data, const std::filesystem::path& dir, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  auto open = [&dir](const std::string& name) {
    std::ofstream out(dir / name);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + (dir / name).string());
    return out;
  };
  std::string training_list;
  for (std::size_t i = 0; i < data.training.size(); ++i) {
    const auto name = "training_" + std::to_string(i) + ".csv";
    write_trace_csv(dir / name, data.training[i]);
    training_list += (i ? "," : "") + name;
  }
  write_trace_csv(dir / "evaluation.csv", data.evaluation);
  {
    auto out = open("profiles.csv");
    write_profiles(out, data.registry);
  }
  {
    auto out = open("app_benchmarks.csv");
    write_app_benchmarks(out, data.registry);
  }
  {
    auto out = open("dag.csv");
    write_edge_csv(out, data.edges);
  }
  auto cfg = open("run.cfg");
  cfg << "# synthetic linear-with-noise traces\n"
      << "training = " << training_list << "\n"
      << "evaluation = evaluation.csv\n"
      << "benchmarks = profiles.csv\n"
      << "app_benchmarks = app_benchmarks.csv\n"
      << "dag = dag.csv\n"
      << "seed = " << seed << "\n"
      << "out = out\n";
}

}  // namespace hetpredict
