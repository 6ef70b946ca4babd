#include <doctest.h>

#include <algorithm>
#include <random>

#include "hetpredict/error.hpp"
#include "hetpredict/extrapolation.hpp"

using namespace hetpredict;

namespace {

RuntimeFactor factor(double f) { return RuntimeFactor{"t", {"A1"}, f, FactorSource::AppSpecific}; }

}  // namespace

TEST_SUITE("extrapolation") {

TEST_CASE("general factor Local to A1 is about 1.7") {
  const auto reg = reference_profiles();
  const auto f = general_factor(reg.local(), reg.profile({"A1"}));
  CHECK(f.factor == doctest::Approx(0.5 * 458.0 / 223.0 + 0.5 * 426.0 / 303.5).epsilon(1e-12));
  CHECK(f.factor == doctest::Approx(1.729).epsilon(1e-3));
  CHECK(f.source == FactorSource::General);
  CHECK(f.target.name == "A1");
}

TEST_CASE("general factor identity and a faster target") {
  const auto reg = reference_profiles();
  for (const auto& [id, p] : reg.profiles()) CHECK(general_factor(p, p).factor == 1.0);
  const auto c2 = general_factor(reg.local(), reg.profile({"C2"}));
  CHECK(c2.factor == doctest::Approx(0.5 * 458.0 / 523.0 + 0.5 * 426.0 / 482.0).epsilon(1e-12));
  CHECK(c2.factor < 1.0);
}

TEST_CASE("general factor falls as target scores rise") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(1, 1000), bump(1.001, 3);
  for (int i = 0; i < 500; ++i) {
    MachineProfile local{{"L"}, u(rng), u(rng), u(rng), u(rng)};
    MachineProfile target{{"T"}, u(rng), u(rng), u(rng), u(rng)};
    const double base = general_factor(local, target).factor;
    auto faster_cpu = target;
    faster_cpu.cpu_events_per_s *= bump(rng);
    auto faster_io = target;
    faster_io.read_iops *= bump(rng);
    CHECK(general_factor(local, faster_cpu).factor < base);
    CHECK(general_factor(local, faster_io).factor < base);
  }
}

TEST_CASE("general factor is not reciprocal") {
  // Counterexample: doubling CPU only.
  MachineProfile a{{"a"}, 100, 1, 100, 100};
  MachineProfile b{{"b"}, 200, 1, 100, 100};
  const double ab = general_factor(a, b).factor;  // 0.75
  const double ba = general_factor(b, a).factor;  // 1.5
  CHECK(ab == doctest::Approx(0.75));
  CHECK(ba == doctest::Approx(1.5));
  CHECK(ab * ba != doctest::Approx(1.0));
}

TEST_CASE("app factor") {
  const AppBenchmark local{"bwa", {"Local"}, 60};
  CHECK(app_factor(local, {"bwa", {"A1"}, 60}).factor == 1.0);
  // Throughput semantics: a target scoring twice as high runs in half the time.
  const auto fast = app_factor(local, {"bwa", {"C2"}, 120});
  CHECK(fast.factor == 0.5);
  CHECK(fast.source == FactorSource::AppSpecific);
  CHECK(fast.target.name == "C2");
  CHECK(app_factor(local, {"bwa", {"A1"}, 30}).factor == 2.0);
  try {
    app_factor(local, {"samtools", {"A1"}, 1});
    FAIL("expected TaskMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TaskMismatch);
  }
}

TEST_CASE("fallback factor") {
  const std::vector<RuntimeFactor> one{factor(2.0)};
  CHECK(fallback_factor(one).factor == 2.0);
  const std::vector<RuntimeFactor> four{factor(4.0), factor(0.5), factor(1.5), factor(1.0)};
  CHECK(fallback_factor(four).factor == 1.25);
  const std::vector<RuntimeFactor> three{factor(0.8), factor(1.0), factor(1.4)};
  CHECK(fallback_factor(three).factor == 1.0);
  CHECK(fallback_factor(three).source == FactorSource::MedianOfFactors);
  CHECK_THROWS_AS(fallback_factor(std::vector<RuntimeFactor>{}), Error);
}

TEST_CASE("fallback factor is permutation invariant and bounded") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.1, 5);
  for (int i = 0; i < 300; ++i) {
    std::vector<RuntimeFactor> fs;
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    for (int k = 0; k < n; ++k) fs.push_back(factor(u(rng)));
    const double m = fallback_factor(fs).factor;
    std::shuffle(fs.begin(), fs.end(), rng);
    CHECK(fallback_factor(fs).factor == m);
    const auto [lo, hi] = std::minmax_element(fs.begin(), fs.end(), [](const auto& a, const auto& b) {
      return a.factor < b.factor;
    });
    CHECK(m >= lo->factor);
    CHECK(m <= hi->factor);
  }
}

TEST_CASE("application factor cascade") {
  auto reg = reference_profiles();
  reg.add_app_benchmarks({{"a", {"Local"}, 1.0}, {"a", {"A1"}, 1.25},
                          {"b", {"Local"}, 1.0}, {"b", {"A1"}, 1.0},
                          {"c", {"Local"}, 1.0}, {"c", {"A1"}, 1 / 1.4}});
  const auto exact = resolve_app_factor(reg, "a", {"A1"});
  CHECK(exact.factor == doctest::Approx(0.8));
  CHECK(exact.source == FactorSource::AppSpecific);

  const auto median = resolve_app_factor(reg, "unknown", {"A1"});
  CHECK(median.factor == doctest::Approx(1.0));
  CHECK(median.source == FactorSource::MedianOfFactors);
  CHECK(median.task == "unknown");

  const auto general = resolve_app_factor(reg, "a", {"N1"});
  CHECK(general.source == FactorSource::General);
  CHECK(general.factor == doctest::Approx(general_factor(reg.local(), reg.profile({"N1"})).factor));

  CHECK(resolve_app_factor(reg, "a", {"Local"}).factor == 1.0);
}

TEST_CASE("extrapolate scales every bound") {
  Prediction local{100, 90, 110, 0.95, {"Local"}};
  const auto p = extrapolate(local, RuntimeFactor{"t", {"A1"}, 1.7, FactorSource::General});
  CHECK(p.point == doctest::Approx(170));
  CHECK(p.lower == doctest::Approx(153));
  CHECK(p.upper == doctest::Approx(187));
  CHECK(p.machine.name == "A1");
  CHECK(p.confidence == 0.95);

  const auto same = extrapolate(local, RuntimeFactor{"t", {"Local"}, 1.0, FactorSource::General});
  CHECK(same.point == 100);
  CHECK(same.lower == 90);
  CHECK(same.upper == 110);
}

TEST_CASE("extrapolation preserves ordering of predictions") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.01, 1e4), f(0.05, 20);
  for (int i = 0; i < 500; ++i) {
    Prediction a{u(rng), 0, 0, 0.95, {"Local"}};
    Prediction b{u(rng), 0, 0, 0.95, {"Local"}};
    a.lower = a.upper = a.point;
    b.lower = b.upper = b.point;
    const RuntimeFactor rf{"t", {"X"}, f(rng), FactorSource::General};
    CHECK((a.point < b.point) == (extrapolate(a, rf).point < extrapolate(b, rf).point));
  }
}

}  // TEST_SUITE
