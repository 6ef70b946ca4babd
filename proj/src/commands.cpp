#include "hetpredict/commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>

#include "hetpredict/csv.hpp"
#include "hetpredict/error.hpp"

namespace hetpredict {
namespace {

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.out);
  const auto path = config.out / name;
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

TraceSet load_evaluation(const RunConfig& config) {
  if (!config.evaluation) throw Error(ErrorCode::Config, "no evaluation traces configured");
  return parse_trace_csv(*config.evaluation, TraceLabel::Evaluation);
}

std::vector<std::string> method_names(const std::vector<Method>& methods) {
  std::vector<std::string> names;
  for (const auto m : methods) names.emplace_back(to_string(m));
  return names;
}

}  // namespace

ProfileRegistry load_registry(const RunConfig& config) {
  auto registry = config.benchmarks ? load_profiles(*config.benchmarks) : reference_profiles();
  if (config.app_benchmarks) {
    registry.add_app_benchmarks(load_app_benchmarks(*config.app_benchmarks, config.invert_app_bench));
  }
  return registry;
}

std::vector<MachineId> resolve_targets(const RunConfig& config, const ProfileRegistry& registry) {
  if (config.targets.empty()) return registry.targets();
  for (const auto& t : config.targets) {
    if (!registry.contains(t)) throw Error(ErrorCode::Config, "target " + t.name + " has no benchmark profile");
  }
  return config.targets;
}

std::vector<TraceSet> load_training(const RunConfig& config) {
  if (config.training.empty()) throw Error(ErrorCode::Config, "no training traces configured");
  std::vector<TraceSet> sets;
  for (const auto& path : config.training) sets.push_back(parse_trace_csv(path, TraceLabel::Training));
  return sets;
}

SuiteOptions suite_options(const RunConfig& config) {
  SuiteOptions options;
  options.fit.blr.prior_variance = config.prior_variance;
  options.confidence = config.confidence;
  options.seed = config.seed;
  return options;
}

void cmd_predict(const RunConfig& config, std::ostream& diag) {
  config.validate();
  const auto registry = load_registry(config);
  const auto targets = resolve_targets(config, registry);
  const auto training = load_training(config);
  std::optional<TraceSet> evaluation;
  if (config.evaluation && !config.input_size) evaluation = load_evaluation(config);
  if (std::find(config.methods.begin(), config.methods.end(), Method::Accurate) != config.methods.end()) {
    diag << "note: accurate has no predictions and is skipped\n";
  }

  std::size_t total = 0;
  for (std::size_t i = 0; i < training.size(); ++i) {
    const PredictorSuite suite(training[i], registry, suite_options(config));
    const auto queries = task_queries(training[i], evaluation ? &*evaluation : nullptr, config.input_size);
    const auto rows = predict_rows(suite, queries, targets, config.methods);
    const auto suffix = "_" + std::to_string(i);
    auto out = open_output(config, "predictions" + suffix + ".csv");
    write_prediction_csv(out, rows);
    auto models = open_output(config, "models" + suffix + ".json");
    models << models_to_json(suite.task_models()) << '\n';
    total += rows.size();
  }
  diag << "wrote " << total << " predictions for " << training.size() << " training set(s) to " << config.out.string()
       << '\n';
}

void cmd_evaluate(const RunConfig& config, std::ostream& diag) {
  config.validate();
  const auto registry = load_registry(config);
  const auto targets = resolve_targets(config, registry);
  const auto training = load_training(config);
  const auto evaluation = load_evaluation(config);
  const auto instances = collect_instances(evaluation);

  std::vector<ErrorRecord> records;
  for (const auto& set : training) {
    const PredictorSuite suite(set, registry, suite_options(config));
    // Only the workflows this training set profiled.
    std::vector<ObservedInstance> covered;
    for (const auto& inst : instances) {
      if (suite.has_model(inst.workflow, inst.task)) covered.push_back(inst);
    }
    auto part = evaluate_methods(suite, covered, targets, config.methods);
    records.insert(records.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no evaluation instance matches a trained task");

  {
    auto out = open_output(config, "errors.csv");
    write_error_report(out, records);
  }
  std::map<std::string, std::vector<ErrorRecord>> by_method;
  for (const auto& r : records) by_method[r.method].push_back(r);

  auto mpe = open_output(config, "mpe.csv");
  auto cdf = open_output(config, "cdf.csv");
  mpe << "method,group,count,mpe_pct\n";
  cdf << "method,error,fraction\n";
  for (const auto& name : method_names(config.methods)) {
    const auto& group = by_method.at(name);
    auto rows = median_prediction_error(group, GroupBy::Machine);
    const auto all = median_prediction_error(group, GroupBy::All);
    rows.insert(rows.end(), all.begin(), all.end());
    for (const auto& g : rows) {
      mpe << name << ',' << g.group << ',' << g.count << ',' << csv::fixed(g.mpe * 100.0, 2) << '\n';
    }
    diag << name << ": MPE " << csv::fixed(all.front().mpe * 100.0, 2) << "%\n";
    for (const auto& p : error_cdf(group)) {
      cdf << name << ',' << csv::fixed(p.error, 6) << ',' << csv::fixed(p.fraction, 6) << '\n';
    }
  }
}

void cmd_simulate(const RunConfig& config, std::ostream& diag) {
  config.validate();
  if (!config.dag) throw Error(ErrorCode::Config, "no DAG edge list configured");
  const auto registry = load_registry(config);
  const auto training = load_training(config);
  const auto evaluation = load_evaluation(config);
  const auto edges = parse_edge_csv(*config.dag);

  auto bandwidths = reference_bandwidths();
  for (const auto& [id, bps] : config.bandwidth_bps) bandwidths[id] = bps;
  for (const auto& id : config.pool) {
    if (!bandwidths.contains(id)) throw Error(ErrorCode::Config, "no bandwidth for pool machine " + id.name);
  }

  std::vector<Workload> pool;
  for (std::size_t i = 0; i < training.size(); ++i) {
    const PredictorSuite suite(training[i], registry, suite_options(config));
    auto part = build_workloads(suite, static_cast<int>(i), evaluation, edges, config.pool, config.methods);
    pool.insert(pool.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  if (pool.empty()) throw Error(ErrorCode::EmptyInput, "no evaluation workflow matches a trained task");
  const auto names = method_names(config.methods);

  const auto clusters = generate_clusters(config.clusters, config.cluster_size, config.pool, config.seed, bandwidths);
  const auto table = run_scheduling_sweep(pool, clusters, names);
  {
    auto out = open_output(config, "deviation_stats.csv");
    const auto stats = makespan_deviation_stats(table);
    write_deviation_stats(out, stats);
  }

  ClusterSpec cloud;
  cloud.seed = config.seed;
  for (const auto& id : config.pool) {
    for (std::size_t k = 0; k < config.cost_nodes_per_type; ++k) {
      cloud.nodes.push_back(id);
      cloud.bandwidth_bps.push_back(bandwidths.at(id));
    }
  }
  std::map<MachineId, double> hourly;
  for (const auto& id : config.pool) {
    const auto it = config.hourly_price.find(id);
    hourly[id] = it == config.hourly_price.end() ? 1.0 : it->second;
  }
  std::vector<BillingModel> billing;
  for (const auto g : config.billing) billing.push_back(BillingModel::from_hourly_prices(g, hourly));
  const auto costs = run_cost_experiment(pool, names, cloud, billing);
  auto out = open_output(config, "cost.csv");
  write_cost_rows(out, costs);
  diag << "simulated " << clusters.size() << " clusters of " << config.cluster_size << " nodes over " << pool.size()
       << " workloads\n";
}

void cmd_gen_synthetic(const SyntheticOptions& options, const std::filesystem::path& dir, std::ostream& diag) {
  const auto data = generate_synthetic(options);
  write_synthetic(data, dir, options.seed);
  diag << "wrote synthetic traces (" << data.evaluation.runs.size() << " evaluation runs) to " << dir.string() << '\n';
}

}  // namespace hetpredict
