#include <doctest.h>

#include <set>
#include <sstream>

#include "hetpredict/commands.hpp"
#include "hetpredict/error.hpp"
#include "support.hpp"

using namespace hetpredict;

namespace {

TraceSet small_training() {
  TraceSet t;
  // "lin" is linear in size, "flat" does not depend on it.
  for (int i = 1; i <= 4; ++i) {
    t.runs.push_back(testing::make_run("wf", "lin", "p" + std::to_string(i), "Local", i * 1000000000LL,
                                       2000 + i * 10000));
    t.runs.push_back(testing::make_run("wf", "flat", "p" + std::to_string(i), "Local", i * 1000000000LL,
                                       i % 2 ? 30000 : 31000));
  }
  return t;
}

TraceSet small_evaluation(const std::vector<std::string>& machines) {
  TraceSet t;
  t.label = TraceLabel::Evaluation;
  for (const auto& m : machines) {
    t.runs.push_back(testing::make_run("wf", "lin", "s1", m, 8000000000LL, 90000));
    t.runs.push_back(testing::make_run("wf", "flat", "s1", m, 8000000000LL, 33000));
  }
  return t;
}

const std::vector<Method> kAll{Method::LotaruG, Method::LotaruA, Method::Naive,
                               Method::OnlineM, Method::OnlineP, Method::Accurate};

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("method names") {
  for (auto m : kAll) CHECK(parse_method(to_string(m)) == m);
  CHECK(parse_methods("lotaru-g, naive,naive") == std::vector<Method>{Method::LotaruG, Method::Naive});
  CHECK_THROWS_AS(parse_methods("lotaru-g,magic"), Error);
  CHECK_THROWS_AS(parse_methods(""), Error);
}

TEST_CASE("instance seeds are stable and distinct") {
  CHECK(instance_seed(1, "wf", "t", "s1") == instance_seed(1, "wf", "t", "s1"));
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(instance_seed(1, "wf", "t", "s" + std::to_string(i)));
  CHECK(seen.size() == 1000);
  CHECK(instance_seed(1, "wf", "ts", "1") != instance_seed(1, "wf", "t", "s1"));
  CHECK(instance_seed(2, "wf", "t", "s1") != instance_seed(1, "wf", "t", "s1"));
}

TEST_CASE("suite predictions per method") {
  const auto reg = reference_profiles();
  const PredictorSuite suite(small_training(), reg);
  const MachineId a1{"A1"};
  const auto g = suite.predict(Method::LotaruG, "wf", "lin", "s1", 8e9, a1);
  REQUIRE(g.factor.has_value());
  CHECK(g.factor->source == FactorSource::General);
  const auto local = suite.predict(Method::LotaruG, "wf", "lin", "s1", 8e9, reg.local_id());
  CHECK(g.prediction.point == doctest::Approx(local.prediction.point * g.factor->factor));
  CHECK(g.prediction.machine == a1);
  CHECK(local.prediction.point == doctest::Approx(82.0).epsilon(0.01));

  // No app benchmarks at all: Lotaru-A ends at the general factor.
  const auto a = suite.predict(Method::LotaruA, "wf", "lin", "s1", 8e9, a1);
  CHECK(a.prediction.point == doctest::Approx(g.prediction.point));

  // Baselines ignore the target machine.
  for (auto m : {Method::Naive, Method::OnlineM, Method::OnlineP}) {
    const auto x = suite.predict(m, "wf", "flat", "s1", 8e9, a1);
    const auto y = suite.predict(m, "wf", "flat", "s1", 8e9, MachineId{"C2"});
    CHECK(x.prediction.point == y.prediction.point);
    CHECK_FALSE(x.factor.has_value());
  }
  CHECK(suite.predict(Method::Naive, "wf", "lin", "s1", 8e9, a1).prediction.point ==
        doctest::Approx(8.0 * (12.0 + 11.0 + 32.0 / 3 + 10.5) / 4));
  CHECK_THROWS_AS(suite.predict(Method::Accurate, "wf", "lin", "s1", 8e9, a1), Error);
  CHECK_THROWS_AS(suite.predict(Method::Naive, "wf", "ghost", "s1", 8e9, a1), Error);
}

TEST_CASE("suite rejects training traces from another machine") {
  auto t = small_training();
  for (auto& r : t.runs) r.machine = {"A1"};
  CHECK_THROWS_AS(PredictorSuite(t, reference_profiles()), Error);
  CHECK_THROWS_AS(PredictorSuite(TraceSet{}, reference_profiles()), Error);
}

TEST_CASE("prediction rows: tasks x targets x methods") {
  const auto reg = reference_profiles();
  const auto training = small_training();
  const PredictorSuite suite(training, reg);
  const auto queries = task_queries(training, nullptr, 5e9);
  const auto targets = reg.targets();
  const auto rows = predict_rows(suite, queries, targets, kAll);
  CHECK(rows.size() == 2 * 5 * 5);
  std::ostringstream out;
  write_prediction_csv(out, rows);
  CHECK(out.str().starts_with("workflow,task,machine,method,point_s,lower_s,upper_s,confidence,factor,factor_source\n"));
  for (const auto& r : rows) {
    CHECK(r.prediction.lower <= r.prediction.point);
    CHECK(r.prediction.point <= r.prediction.upper);
  }
  CHECK_THROWS_AS(task_queries(training, nullptr, std::nullopt), Error);
  const auto eval = small_evaluation({"A1"});
  CHECK(task_queries(training, &eval, std::nullopt)[0].input_size == 8e9);
}

TEST_CASE("evaluation of methods") {
  const auto reg = reference_profiles();
  const PredictorSuite suite(small_training(), reg);
  const auto targets = reg.targets();
  std::vector<std::string> names;
  for (const auto& t : targets) names.push_back(t.name);
  const auto instances = collect_instances(small_evaluation(names));
  const auto records = evaluate_methods(suite, instances, targets, kAll);
  CHECK(records.size() == 2 * 5 * 6);
  for (const auto& r : records) {
    if (r.method == "accurate") CHECK(r.error == 0);
  }

  names.pop_back();
  const auto partial = collect_instances(small_evaluation(names));
  try {
    evaluate_methods(suite, partial, targets, kAll);
    FAIL("expected MissingActual");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingActual);
  }
}

TEST_CASE("workloads carry one estimate table per method") {
  const auto reg = reference_profiles();
  const PredictorSuite suite(small_training(), reg);
  const std::vector<MachineId> pool{{"A1"}, {"C2"}};
  const std::vector<EdgeSpec> edges{{"wf", "lin", "flat", std::nullopt}};
  const auto eval = small_evaluation({"A1", "C2"});
  const auto w = build_workloads(suite, 3, eval, edges, pool, kAll);
  REQUIRE(w.size() == 1);
  CHECK(w[0].training_set == 3);
  CHECK(w[0].estimates.size() == kAll.size());
  for (std::size_t t = 2; t < w[0].dag.size(); ++t) {
    for (std::size_t k = 0; k < pool.size(); ++k) CHECK(w[0].estimates.back().at(t, k) == w[0].actual.at(t, k));
  }
}

TEST_CASE("config parsing") {
  testing::TempDir dir("cfg");
  std::istringstream in(
      "# comment\n"
      "training = a.csv, b.csv\n"
      "evaluation = /abs/eval.csv  # trailing comment\n"
      "methods = lotaru-a,naive\n"
      "confidence = 0.9\n"
      "seed = 7\n"
      "clusters = 10\n"
      "billing = minute\n"
      "price.A1 = 2.5\n"
      "bandwidth.N1 = 4e9\n"
      "targets = A1,C2\n");
  const auto c = parse_config(in, dir.path(), "run.cfg");
  REQUIRE(c.training.size() == 2);
  CHECK(c.training[0] == dir.path() / "a.csv");
  CHECK(*c.evaluation == "/abs/eval.csv");
  CHECK(c.methods == std::vector<Method>{Method::LotaruA, Method::Naive});
  CHECK(c.confidence == 0.9);
  CHECK(c.seed == 7);
  CHECK(c.clusters == 10);
  CHECK(c.billing == std::vector<BillingGranularity>{BillingGranularity::Minute});
  CHECK(c.hourly_price.at({"A1"}) == 2.5);
  CHECK(c.bandwidth_bps.at({"N1"}) == 4e9);
  CHECK(c.targets.size() == 2);
  CHECK(c.cluster_size == 20);
}

TEST_CASE("config errors") {
  auto code = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_config(in, "", "run.cfg").validate();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code("bogus = 1\n") == ErrorCode::Config);
  CHECK(code("methods = fast\n") == ErrorCode::Config);
  CHECK(code("confidence = 1.5\n") == ErrorCode::Config);
  CHECK(code("no equals sign\n") == ErrorCode::Config);
  CHECK(code("billing = weekly\n") == ErrorCode::Config);
  CHECK(code("training = x.csv\nevaluation = x.csv\n") == ErrorCode::Config);
  std::istringstream in("bogus = 1\n");
  try {
    parse_config(in, "", "run.cfg");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("run.cfg:1") != std::string::npos);
  }
}

TEST_CASE("synthetic generator") {
  SyntheticOptions opts;
  opts.seed = 5;
  const auto a = generate_synthetic(opts);
  const auto b = generate_synthetic(opts);
  CHECK(a.evaluation.runs == b.evaluation.runs);
  REQUIRE(a.training.size() == 2);
  CHECK(a.training[0].runs == b.training[0].runs);

  std::set<std::string> workflows;
  std::set<MachineId> machines;
  for (const auto& r : a.evaluation.runs) {
    workflows.insert(r.workflow);
    machines.insert(r.machine);
    CHECK(r.runtime_ms > 0);
  }
  CHECK(workflows.size() == 5);
  CHECK(machines.size() == 6);
  for (const auto& t : a.training) {
    std::map<std::pair<std::string, std::string>, int> per_task;
    for (const auto& r : t.runs) {
      CHECK(r.machine.name == "Local");
      ++per_task[{r.workflow, r.task}];
    }
    for (const auto& [_, n] : per_task) CHECK(n >= 3);
  }
  // Tool benchmarks track the hidden factors.
  for (const auto& [key, bench] : a.registry.app_benchmarks()) {
    if (key.second == a.registry.local_id()) continue;
    const double f = 1.0 / bench.value;
    CHECK(f == doctest::Approx(a.true_factor.at(key)).epsilon(0.1));
  }
  // Every edge references tasks of its workflow and the edge list is acyclic per workflow.
  for (const auto& w : synthetic_workflows()) CHECK_NOTHROW(build_workflow_dag(w, a.edges, a.evaluation.runs));

  opts.seed = 6;
  CHECK(generate_synthetic(opts).evaluation.runs != a.evaluation.runs);
}

}  // TEST_SUITE
