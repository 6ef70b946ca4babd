#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "hetpredict/bench_registry.hpp"
#include "hetpredict/error.hpp"
#include "support.hpp"

using namespace hetpredict;

namespace {

ErrorCode load_error(const std::string& text) {
  std::istringstream in(text);
  try {
    load_profiles(in, "profiles.csv");
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("bench_registry") {

TEST_CASE("shipped fixture matches the reference profiles") {
  const auto reg = load_profiles(testing::data_dir() / "reference_profiles.csv");
  CHECK(reg.profiles().size() == 6);
  CHECK(reg.local_id().name == "Local");
  CHECK(reg.local().cpu_events_per_s == 458);
  CHECK(reg.local().read_iops == 437);
  CHECK(reg.local().write_iops == 415);
  const auto ref = reference_profiles();
  for (const auto& [id, p] : ref.profiles()) {
    const auto& q = reg.profile(id);
    CHECK(q.cpu_events_per_s == p.cpu_events_per_s);
    CHECK(q.ram_score == p.ram_score);
    CHECK(q.read_iops == p.read_iops);
    CHECK(q.write_iops == p.write_iops);
  }
  const auto targets = reg.targets();
  REQUIRE(targets.size() == 5);
  CHECK(targets.front().name == "A1");
  CHECK(std::find(targets.begin(), targets.end(), MachineId{"Local"}) == targets.end());
}

TEST_CASE("no local row is MissingLocal") {
  CHECK(load_error(std::string(kProfileHeader) + "\nA1,0,223,11000,306,301\n") == ErrorCode::MissingLocal);
}

TEST_CASE("zero score is NonPositiveScore") {
  CHECK(load_error(std::string(kProfileHeader) + "\nLocal,1,458,18700,437,0\n") == ErrorCode::NonPositiveScore);
  CHECK(load_error(std::string(kProfileHeader) + "\nLocal,1,-1,18700,437,415\n") == ErrorCode::NonPositiveScore);
}

TEST_CASE("duplicate machines and two local rows are rejected") {
  CHECK(load_error(std::string(kProfileHeader) + "\nLocal,1,458,18700,437,415\nLocal,0,1,1,1,1\n") ==
        ErrorCode::DuplicateKey);
  CHECK(load_error(std::string(kProfileHeader) + "\nLocal,1,458,18700,437,415\nB,1,1,1,1,1\n") ==
        ErrorCode::DuplicateKey);
}

TEST_CASE("io_score") {
  const auto reg = reference_profiles();
  CHECK(io_score(reg.local()) == 426.0);
  CHECK(io_score(reg.profile({"A1"})) == 303.5);
  MachineProfile same{{"x"}, 1, 1, 250, 250};
  CHECK(io_score(same) == 250);
}

TEST_CASE("io_score lies between the two IOPS values") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(1e-3, 1e6);
  for (int i = 0; i < 1000; ++i) {
    MachineProfile p{{"x"}, 1, 1, u(rng), u(rng)};
    CHECK(io_score(p) >= std::min(p.read_iops, p.write_iops));
    CHECK(io_score(p) <= std::max(p.read_iops, p.write_iops));
  }
}

TEST_CASE("load is independent of row order") {
  std::vector<std::string> rows{"Local,1,458,18700,437,415", "A1,0,223,11000,306,301", "A2,0,223,11000,341,336",
                                "N1,0,369,13400,481,483",    "N2,0,468,17000,481,483", "C2,0,523,18900,481,483"};
  std::string reference;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(rows.begin(), rows.end(), rng);
    std::string text = std::string(kProfileHeader) + "\n";
    for (const auto& r : rows) text += r + "\n";
    std::istringstream in(text);
    std::ostringstream out;
    write_profiles(out, load_profiles(in, "p.csv"));
    if (reference.empty()) reference = out.str();
    CHECK(out.str() == reference);
  }
}

TEST_CASE("app benchmarks: throughput values kept, time-like values inverted") {
  const std::string text = std::string(kAppBenchmarkHeader) + "\nbwa,Local,60\nbwa,A1,30\n";
  std::istringstream a(text), b(text);
  const auto throughput = load_app_benchmarks(a, "app.csv");
  const auto time_like = load_app_benchmarks(b, "app.csv", true);
  REQUIRE(throughput.size() == 2);
  CHECK(throughput[0].value == 60);
  CHECK(time_like[0].value == doctest::Approx(1.0 / 60));
  CHECK(time_like[1].value == doctest::Approx(1.0 / 30));

  auto reg = reference_profiles();
  reg.add_app_benchmarks(throughput);
  REQUIRE(reg.app_benchmark("bwa", {"A1"}).has_value());
  CHECK_FALSE(reg.app_benchmark("bwa", {"N1"}).has_value());
  CHECK_THROWS_AS(reg.add_app_benchmarks(throughput), Error);
}

TEST_CASE("app benchmark values must be positive") {
  std::istringstream in(std::string(kAppBenchmarkHeader) + "\nbwa,Local,0\n");
  CHECK_THROWS_AS(load_app_benchmarks(in, "app.csv"), Error);
}

}  // TEST_SUITE
