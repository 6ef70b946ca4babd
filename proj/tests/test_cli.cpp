#include <doctest.h>

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <map>
#include <sstream>

#include "hetpredict/csv.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(HETPREDICT_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

// Three-point training trace for two tasks on Local.
void write_small_inputs(const testing::TempDir& dir) {
  testing::write_file(dir / "train.csv",
                      "workflow,task,instance_id,machine,input_size_uncompressed,input_size_compressed,runtime_ms,"
                      "io_read_bytes,io_write_bytes,cpu_pct,peak_memory_bytes\n"
                      "wf,a,p1,Local,1000000000,,12000,1,1,,\n"
                      "wf,a,p2,Local,2000000000,,22000,1,1,,\n"
                      "wf,a,p3,Local,3000000000,,32000,1,1,,\n"
                      "wf,b,p1,Local,1000000000,,50000,1,1,,\n"
                      "wf,b,p2,Local,2000000000,,50100,1,1,,\n"
                      "wf,b,p3,Local,3000000000,,49900,1,1,,\n");
  testing::write_file(dir / "run.cfg", "training = train.csv\nbenchmarks = " + (testing::data_dir() / "reference_profiles.csv").string() +
                                           "\ninput_size = 5e9\nout = out\n");
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and flag errors") {
  CHECK(run("--help") == 0);
  CHECK(run("predict --help") == 0);
  CHECK(run("") == 2);
  CHECK(run("predict") == 2);                       // --config is required
  CHECK(run("predict --config x --bogus") == 2);    // unknown flag
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("predict emits tasks x targets x methods rows") {
  testing::TempDir dir("cli-predict");
  write_small_inputs(dir);
  CHECK(run("predict --config " + q(dir / "run.cfg") + " --methods lotaru-g,lotaru-a,naive,online-m,online-p") == 0);
  const auto rows = lines(testing::read_file(dir / "out" / "predictions_0.csv"));
  CHECK(rows.size() == 1 + 2 * 5 * 5);
  CHECK(rows[0] == "workflow,task,machine,method,point_s,lower_s,upper_s,confidence,factor,factor_source");
  CHECK(std::filesystem::exists(dir / "out" / "models_0.json"));

  // Accurate has nothing to predict and is skipped.
  CHECK(run("predict --config " + q(dir / "run.cfg") + " --methods naive,accurate --out " + q(dir / "o2")) == 0);
  CHECK(lines(testing::read_file(dir / "o2" / "predictions_0.csv")).size() == 1 + 2 * 5);
}

TEST_CASE("config and data errors map to exit codes") {
  testing::TempDir dir("cli-errors");
  write_small_inputs(dir);
  CHECK(run("predict --config " + q(dir / "run.cfg") + " --methods lotaru-x") == 2);
  CHECK(run("predict --config " + q(dir / "missing.cfg")) == 2);
  CHECK(run("predict --config " + q(dir / "run.cfg") + " --confidence 2") == 2);

  testing::write_file(dir / "empty.csv", "");
  testing::write_file(dir / "empty.cfg", "training = empty.csv\ninput_size = 1e9\n");
  CHECK(run("predict --config " + q(dir / "empty.cfg")) == 3);

  testing::write_file(dir / "header.csv",
                      "workflow,task,instance_id,machine,input_size_uncompressed,input_size_compressed,runtime_ms,"
                      "io_read_bytes,io_write_bytes,cpu_pct,peak_memory_bytes\n");
  testing::write_file(dir / "header.cfg", "training = header.csv\ninput_size = 1e9\n");
  CHECK(run("predict --config " + q(dir / "header.cfg")) == 3);
}

TEST_CASE("evaluate and simulate on synthetic traces") {
  testing::TempDir dir("cli-synth");
  REQUIRE(run("gen-synthetic --seed 3 --out " + q(dir / "syn")) == 0);
  const auto cfg = q(dir / "syn" / "run.cfg");

  REQUIRE(run("evaluate --config " + cfg) == 0);
  const auto out = dir / "syn" / "out";
  // MPE table equals medians recomputed from the error report.
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  const auto errors = lines(testing::read_file(out / "errors.csv"));
  REQUIRE(errors.size() > 1);
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const auto f = hetpredict::csv::split(errors[i]);
    const double e = *hetpredict::csv::parse_double(f[7]);
    groups[{std::string(f[4]), std::string(f[3])}].push_back(e);
    groups[{std::string(f[4]), "all"}].push_back(e);
  }
  const auto mpe = lines(testing::read_file(out / "mpe.csv"));
  CHECK(mpe[0] == "method,group,count,mpe_pct");
  CHECK(mpe.size() == 1 + 6 * 6);
  for (std::size_t i = 1; i < mpe.size(); ++i) {
    const auto f = hetpredict::csv::split(mpe[i]);
    const auto& g = groups.at({std::string(f[0]), std::string(f[1])});
    CHECK(*hetpredict::csv::parse_int(f[2]) == static_cast<std::int64_t>(g.size()));
    CHECK(std::string(f[3]) == hetpredict::csv::fixed(oracle::median(g) * 100, 2));
    if (f[0] == "accurate") CHECK(f[3] == "0.00");
  }
  CHECK(lines(testing::read_file(out / "cdf.csv"))[0] == "method,error,fraction");

  // Simulation: smoke size, deterministic, accurate-only gives zero deviations.
  const auto start = std::chrono::steady_clock::now();
  testing::write_file(dir / "syn" / "smoke.cfg", testing::read_file(dir / "syn" / "run.cfg") + "clusters = 10\n");
  const auto smoke = q(dir / "syn" / "smoke.cfg");
  REQUIRE(run("simulate --config " + smoke + " --out " + q(dir / "s1")) == 0);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(10));
  REQUIRE(run("simulate --config " + smoke + " --out " + q(dir / "s2")) == 0);
  CHECK(testing::read_file(dir / "s1" / "deviation_stats.csv") == testing::read_file(dir / "s2" / "deviation_stats.csv"));
  CHECK(testing::read_file(dir / "s1" / "cost.csv") == testing::read_file(dir / "s2" / "cost.csv"));
  CHECK(lines(testing::read_file(dir / "s1" / "cost.csv"))[0] == "workflow,training_set,method,billing,deviation_pct");

  REQUIRE(run("simulate --config " + smoke + " --methods accurate --billing hour --out " + q(dir / "s3")) == 0);
  const auto acc = lines(testing::read_file(dir / "s3" / "deviation_stats.csv"));
  REQUIRE(acc.size() == 2);
  CHECK(acc[1] == "accurate,0.00,0.00,0.00,0.00,0.00,0.00,0.00,0.00");
  for (const auto& row : lines(testing::read_file(dir / "s3" / "cost.csv"))) {
    if (row.starts_with("workflow")) continue;
    CHECK(row.ends_with(",accurate,hour,0.00"));
  }
}

TEST_CASE("evaluate with a machine missing from the evaluation traces is a data error") {
  testing::TempDir dir("cli-missing");
  REQUIRE(run("gen-synthetic --seed 4 --samples 2 --out " + q(dir / "syn")) == 0);
  const auto eval = lines(testing::read_file(dir / "syn" / "evaluation.csv"));
  std::string kept;
  for (const auto& l : eval) {
    if (l.find(",N2,") == std::string::npos) kept += l + "\n";
  }
  testing::write_file(dir / "syn" / "evaluation.csv", kept);
  CHECK(run("evaluate --config " + q(dir / "syn" / "run.cfg")) == 3);
}

}  // TEST_SUITE
