#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "heis/parallel.hpp"
#include "heis/stats.hpp"

using namespace heis;

TEST_CASE("compensated sum") {
  CompensatedSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  CHECK(s.value() == 2.0);
}

TEST_CASE("mean and variance") {
  const std::vector<double> xs{1, 2, 3, 4};
  const auto m = mean_estimate(xs);
  CHECK(m.mean == 2.5);
  CHECK(m.n == 4);
  // sample sd sqrt(5/3)
  CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  const auto v = variance_estimate(xs);
  CHECK(v.mean == doctest::Approx(5.0 / 3.0));
  CHECK(v.std_error > 0.0);
}

TEST_CASE("correlation") {
  std::vector<double> a, b, c;
  for (int i = 0; i < 100; ++i) {
    a.push_back(i);
    b.push_back(3.0 * i - 7.0);
    c.push_back(-0.5 * i);
  }
  CHECK(correlation_estimate(a, b).mean == doctest::Approx(1.0));
  CHECK(correlation_estimate(a, c).mean == doctest::Approx(-1.0));
}

TEST_CASE("proportions") {
  const auto big = proportion_estimate(300, 1000);
  CHECK(big.mean == 0.3);
  CHECK(big.std_error == doctest::Approx(std::sqrt(0.3 * 0.7 / 1000)));
  const auto zero = proportion_estimate(0, 20);
  CHECK(zero.mean == 0.0);
  CHECK(zero.std_error > 0.0);
  const auto one = proportion_estimate(20, 20);
  CHECK(one.mean == 1.0);
  CHECK(one.std_error > 0.0);
  // one-sigma Wilson half width, written out
  const double n = 20, p = 0.25, z = 1.0;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n);
  CHECK(proportion_estimate(5, 20).std_error == doctest::Approx(half));
}

TEST_CASE("wilson lower bound") {
  CHECK(wilson_lower_bound(0, 100, 2.326) == doctest::Approx(0.0));
  const double n = 1000, p = 0.1, z = 2.3263478740408408;
  const double centre = (p + z * z / (2 * n)) / (1 + z * z / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n);
  CHECK(wilson_lower_bound(100, 1000, z) == doctest::Approx(centre - half));
  CHECK(wilson_lower_bound(100, 1000, z) < 0.1);
  CHECK(combined_stderr(3, 4) == 5.0);
}

TEST_CASE("for_each_trial propagates the first error") {
  std::vector<int> seen(100, 0);
  for (Exec e : {Exec::serial, Exec::openmp}) {
    for_each_trial(100, e, [&](std::size_t i) { seen[i] += 1; });
    try {
      for_each_trial(100, e, [&](std::size_t i) {
        if (i == 40 || i == 70) throw std::runtime_error(std::to_string(i));
      });
      FAIL("no throw");
    } catch (const std::runtime_error& ex) {
      CHECK(std::string(ex.what()) == "40");
    }
  }
  for (int s : seen) CHECK(s == 2);
}
