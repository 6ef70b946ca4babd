#include "hetpredict/pipeline.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "hetpredict/csv.hpp"
#include "hetpredict/error.hpp"
#include "hetpredict/stats.hpp"

namespace hetpredict {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::LotaruG: return "lotaru-g";
    case Method::LotaruA: return "lotaru-a";
    case Method::Naive: return "naive";
    case Method::OnlineM: return "online-m";
    case Method::OnlineP: return "online-p";
    case Method::Accurate: return "accurate";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (auto m : {Method::LotaruG, Method::LotaruA, Method::Naive, Method::OnlineM, Method::OnlineP, Method::Accurate}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::vector<Method> parse_methods(std::string_view list) {
  std::vector<Method> methods;
  for (auto field : csv::split(list)) {
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    if (field.empty()) continue;
    const auto m = parse_method(field);
    if (!m) throw Error(ErrorCode::Config, "unknown method '" + std::string(field) + "'");
    if (std::find(methods.begin(), methods.end(), *m) == methods.end()) methods.push_back(*m);
  }
  if (methods.empty()) throw Error(ErrorCode::Config, "no methods selected");
  return methods;
}

std::uint64_t instance_seed(std::uint64_t seed, std::string_view workflow, std::string_view task,
                            std::string_view instance_id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  mix(workflow);
  mix(task);
  mix(instance_id);
  // splitmix64 finalizer over seed + hash
  std::uint64_t z = seed + h + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PredictorSuite::PredictorSuite(const TraceSet& training, const ProfileRegistry& registry, SuiteOptions options)
    : registry_(registry), options_(options) {
  if (training.runs.empty()) throw Error(ErrorCode::EmptyInput, "training traces contain no runs");
  const auto& machine = training.runs.front().machine;
  if (machine != registry_.local_id()) {
    throw Error(ErrorCode::MixedMachines, "training traces come from " + machine.name + " but the local profile is " +
                                              registry_.local_id().name);
  }
  const auto models = fit_all_models(training, options_.fit);
  std::map<std::pair<std::string, std::string>, std::vector<TaskRun>> groups;
  for (const auto& run : training.runs) groups[{run.workflow, run.task}].push_back(run);
  for (const auto& model : models) {
    const auto& runs = groups.at({model.workflow, model.task});
    entries_.emplace(std::pair{model.workflow, model.task},
                     Entry{model, fit_naive(runs), fit_online(runs, OnlineVariant::M), fit_online(runs, OnlineVariant::P)});
  }
}

const PredictorSuite::Entry& PredictorSuite::entry(const std::string& workflow, const std::string& task) const {
  const auto it = entries_.find({workflow, task});
  if (it == entries_.end()) throw Error(ErrorCode::MissingModel, workflow + "/" + task + " has no training runs");
  return it->second;
}

std::vector<TaskModel> PredictorSuite::task_models() const {
  std::vector<TaskModel> out;
  for (const auto& [_, e] : entries_) out.push_back(e.model);
  return out;
}

MethodPrediction PredictorSuite::predict(Method method, const std::string& workflow, const std::string& task,
                                         const std::string& instance_id, double input_size,
                                         const MachineId& target) const {
  const auto& e = entry(workflow, task);
  MethodPrediction out;
  auto constant = [&](double seconds) {
    out.prediction = Prediction{seconds, seconds, seconds, options_.confidence, target};
    return out;
  };
  switch (method) {
    case Method::LotaruG:
    case Method::LotaruA: {
      const auto local = predict_local(e.model, input_size, options_.confidence);
      RuntimeFactor f = method == Method::LotaruG
                            ? general_factor(registry_.local(), registry_.profile(target))
                            : resolve_app_factor(registry_, task, target);
      f.task = task;
      out.prediction = extrapolate(local, f);
      out.factor = f;
      return out;
    }
    case Method::Naive: return constant(naive_predict(e.naive, input_size));
    case Method::OnlineM: return constant(online_predict(e.online_m, input_size, 0));
    case Method::OnlineP:
      return constant(online_predict(e.online_p, input_size, instance_seed(options_.seed, workflow, task, instance_id)));
    case Method::Accurate: break;
  }
  throw Error(ErrorCode::Config, "accurate runtimes come from evaluation traces, not from a predictor");
}

std::vector<ObservedInstance> collect_instances(const TraceSet& evaluation) {
  std::map<std::tuple<std::string, std::string, std::string>, ObservedInstance> by_key;
  for (const auto& r : evaluation.runs) {
    auto [it, inserted] = by_key.try_emplace({r.workflow, r.task, r.instance_id});
    auto& inst = it->second;
    if (inserted) {
      inst.workflow = r.workflow;
      inst.task = r.task;
      inst.instance_id = r.instance_id;
      inst.input_size = static_cast<double>(r.input_size_uncompressed);
    }
    inst.actual[r.machine] = r.runtime_seconds();
  }
  std::vector<ObservedInstance> out;
  out.reserve(by_key.size());
  for (auto& [_, inst] : by_key) out.push_back(std::move(inst));
  return out;
}

std::vector<TaskQuery> task_queries(const TraceSet& training, const TraceSet* evaluation,
                                    std::optional<double> input_size_override) {
  std::set<std::pair<std::string, std::string>> tasks;
  for (const auto& r : training.runs) tasks.emplace(r.workflow, r.task);
  std::map<std::pair<std::string, std::string>, std::vector<double>> sizes;
  if (evaluation) {
    for (const auto& inst : collect_instances(*evaluation)) sizes[{inst.workflow, inst.task}].push_back(inst.input_size);
  }
  std::vector<TaskQuery> queries;
  for (const auto& [workflow, task] : tasks) {
    TaskQuery q{workflow, task, 0.0};
    if (input_size_override) {
      q.input_size = *input_size_override;
    } else if (const auto it = sizes.find({workflow, task}); it != sizes.end()) {
      q.input_size = stats::median(it->second);
    } else {
      throw Error(ErrorCode::Config, "no query input size for " + workflow + "/" + task +
                                         " (set input_size or provide evaluation traces)");
    }
    queries.push_back(std::move(q));
  }
  return queries;
}

std::vector<PredictionRow> predict_rows(const PredictorSuite& suite, std::span<const TaskQuery> queries,
                                        std::span<const MachineId> targets, std::span<const Method> methods) {
  std::vector<PredictionRow> rows;
  for (const auto& q : queries) {
    for (const auto& target : targets) {
      for (const auto method : methods) {
        if (method == Method::Accurate) continue;
        const auto p = suite.predict(method, q.workflow, q.task, "query", q.input_size, target);
        PredictionRow row{q.workflow, q.task, std::string(to_string(method)), p.prediction, 1.0, "none"};
        if (p.factor) {
          row.factor = p.factor->factor;
          row.factor_source = std::string(to_string(p.factor->source));
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void write_prediction_csv(std::ostream& out, std::span<const PredictionRow> rows) {
  out << "workflow,task,machine,method,point_s,lower_s,upper_s,confidence,factor,factor_source\n";
  for (const auto& r : rows) {
    const auto& p = r.prediction;
    out << r.workflow << ',' << r.task << ',' << p.machine.name << ',' << r.method << ',' << csv::fixed(p.point, 3)
        << ',' << csv::fixed(p.lower, 3) << ',' << csv::fixed(p.upper, 3) << ',' << csv::fixed(p.confidence, 3) << ','
        << csv::fixed(r.factor, 6) << ',' << r.factor_source << '\n';
  }
}

std::vector<ErrorRecord> evaluate_methods(const PredictorSuite& suite, std::span<const ObservedInstance> instances,
                                          std::span<const MachineId> targets, std::span<const Method> methods) {
  std::vector<ErrorRecord> records;
  for (const auto& inst : instances) {
    for (const auto& target : targets) {
      const auto actual = inst.actual.find(target);
      if (actual == inst.actual.end()) {
        throw Error(ErrorCode::MissingActual, "(" + inst.workflow + "/" + inst.task + "/" + inst.instance_id + ", " +
                                                  target.name + ")");
      }
      for (const auto method : methods) {
        const double predicted =
            method == Method::Accurate
                ? actual->second
                : suite.predict(method, inst.workflow, inst.task, inst.instance_id, inst.input_size, target)
                      .prediction.point;
        records.push_back(make_error_record(inst.workflow, inst.task, inst.instance_id, target.name,
                                            std::string(to_string(method)), predicted, actual->second));
      }
    }
  }
  return records;
}

std::vector<Workload> build_workloads(const PredictorSuite& suite, int training_set, const TraceSet& evaluation,
                                      const std::vector<EdgeSpec>& edges, const std::vector<MachineId>& types,
                                      std::span<const Method> methods) {
  const auto instances = collect_instances(evaluation);
  std::map<std::tuple<std::string, std::string, std::string>, const ObservedInstance*> lookup;
  for (const auto& inst : instances) lookup[{inst.workflow, inst.task, inst.instance_id}] = &inst;

  std::vector<Workload> pool;
  for (const auto& [workflow, traces] : group_by_workflow(evaluation)) {
    bool any_model = false;
    for (const auto& r : traces.runs) any_model = any_model || suite.has_model(workflow, r.task);
    if (!any_model) continue;

    Workload w;
    w.workflow = workflow;
    w.training_set = training_set;
    w.dag = build_workflow_dag(workflow, edges, traces.runs);
    w.actual = CostTable(w.dag.size(), types);
    for (std::size_t m = 0; m < methods.size(); ++m) w.estimates.emplace_back(w.dag.size(), types);

    for (std::size_t t = 2; t < w.dag.size(); ++t) {
      const auto& node = w.dag.task(t);
      const auto* inst = lookup.at({node.workflow, node.task, node.instance_id});
      for (std::size_t k = 0; k < types.size(); ++k) {
        const auto actual = inst->actual.find(types[k]);
        if (actual == inst->actual.end()) {
          throw Error(ErrorCode::MissingActual, "(" + node.label() + ", " + types[k].name + ")");
        }
        w.actual.set(t, k, actual->second);
        for (std::size_t m = 0; m < methods.size(); ++m) {
          const double estimate =
              methods[m] == Method::Accurate
                  ? actual->second
                  : suite.predict(methods[m], node.workflow, node.task, node.instance_id, inst->input_size, types[k])
                        .prediction.point;
          w.estimates[m].set(t, k, estimate);
        }
      }
    }
    pool.push_back(std::move(w));
  }
  return pool;
}

}  // namespace hetpredict
