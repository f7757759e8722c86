#include <cmath>
#include <vector>

#include "doctest.h"
#include "heis/brownian.hpp"
#include "heis/girsanov.hpp"

using namespace heis;

namespace {

ReferenceCurve poly2(double p, double q) {
  return ReferenceCurve(HorizontalCurve::chain({std::make_shared<QuadraticArc>(Vec2{p, 0}, Vec2{0, q})}, {1.0}));
}

std::vector<Vec2> line_path(const TimeGrid& g, Vec2 slope) {
  std::vector<Vec2> b;
  for (double t : g.times()) b.push_back(slope * t);
  return b;
}

SamplerConfig small(Exec e = Exec::openmp) { return {6, 1, 0, e}; }

}  // namespace

TEST_CASE("reference curve constants") {
  const ReferenceCurve l = ReferenceCurve::line({1, 0});
  CHECK(l.c_phi() == doctest::Approx(1.0));
  CHECK(l.energy() == doctest::Approx(1.0));
  CHECK(l.accel_sup() == 0.0);
  CHECK(l.jumps().empty());
  CHECK_FALSE(l.is_zero());
  CHECK(ReferenceCurve::zero().is_zero());
  const ReferenceCurve p = poly2(1, 1);
  CHECK(p.c_phi() == doctest::Approx(2.0));
  CHECK(p.energy() == doctest::Approx(1.0 + 4.0 / 3.0));
  CHECK(p.accel_sup() == doctest::Approx(2.0));
  CHECK(p.curve().at(1.0).z == doctest::Approx(1.0 / 6.0));
  const ReferenceCurve bent(HorizontalCurve::chain(
      {std::make_shared<QuadraticArc>(Vec2{1, 0}), std::make_shared<QuadraticArc>(Vec2{0, 1})}, {1.0, 1.0}));
  REQUIRE(bent.jumps().size() == 1);
  CHECK(bent.jumps()[0].t == 0.5);
  CHECK(bent.jumps()[0].dv.x == doctest::Approx(-2.0));
  CHECK(bent.jumps()[0].dv.y == doctest::Approx(2.0));
  const CurveOnGrid g(bent, 4);
  REQUIRE(g.jumps.size() == 1);
  CHECK(g.jumps[0].first == 8);
  CHECK_THROWS(ReferenceCurve(HorizontalCurve::chain({std::make_shared<QuadraticArc>(Vec2{1, 0})}, {1.0},
                                                     GroupElement{1, 0, 0})));
}

TEST_CASE("exp martingale on a deterministic path") {
  const TimeGrid g = TimeGrid::dyadic(8);
  const auto b = line_path(g, {1, 0});
  // sum phi' dB = 1, energy 1
  CHECK(exp_martingale(ReferenceCurve::line({1, 0}), g, b) == doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
  CHECK(exp_martingale(ReferenceCurve::zero(), g, b) == 1.0);
  const auto si = stochastic_integral(CurveOnGrid(poly2(1, 1), 8), line_path(g, {0.5, 0.5}));
  // left-point Riemann sums of int (1, 2t) . (0.5, 0.5) dt = 1
  CHECK(si.left_point == doctest::Approx(1.0 - 0.5 * g.step()).epsilon(1e-13));
  CHECK(si.by_parts == doctest::Approx(1.0 + 0.5 * g.step()).epsilon(1e-13));
  CHECK_THROWS_AS(exp_martingale(poly2(1, 1), g, line_path(g, {0, 1e6})), GirsanovConsistencyError);
  CHECK_THROWS_AS(exp_martingale(poly2(1, 1), TimeGrid::dyadic(7), b), GridMismatch);
}

TEST_CASE("by-parts form agrees with the left-point sum on brownian paths") {
  const ReferenceCurve bent(HorizontalCurve::chain(
      {std::make_shared<QuadraticArc>(Vec2{1, 0}, Vec2{0, 1}), std::make_shared<QuadraticArc>(Vec2{0, 1})},
      {1.0, 1.0}));
  const CurveOnGrid phi(bent, 10);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto b = sample_bm(TimeGrid::dyadic(10), {1, s});
    const auto si = stochastic_integral(phi, b);
    REQUIRE(std::abs(si.left_point - si.by_parts) <= 10 * phi.h * (1 + phi.accel_sup));
    REQUIRE(std::isfinite(exp_martingale(phi, b)));
  }
}

TEST_CASE("tube indicator") {
  const TimeGrid g = TimeGrid::dyadic(6);
  const ReferenceCurve l = ReferenceCurve::line({1, 0});
  CHECK(tube_indicator(l, g, line_path(g, {1, 0}), 1e-9));
  auto off = line_path(g, {1, 0});
  off[40].y += 0.3;
  CHECK(tube_indicator(l, g, off, 0.31));
  CHECK_FALSE(tube_indicator(l, g, off, 0.3));
  CHECK_FALSE(tube_indicator(l, g, off, 0.29));
}

TEST_CASE("regime flag") {
  const ReferenceCurve l = ReferenceCurve::line({1, 0});
  CHECK_FALSE(out_of_regime(l, 0.9, 0.5));
  CHECK(out_of_regime(l, 0.9, 1.0));
  CHECK(out_of_regime(l, 0.5, 0.25));  // 0.25 <= 0.25 + 0.0625
}

TEST_CASE("martingale has mean one") {
  const auto m = martingale_mean(poly2(1, 1), 20000, {8, 1, 0, Exec::openmp});
  CHECK(std::abs(m.mean - 1.0) < 3 * m.std_error);
}

TEST_CASE("rejection estimators") {
  const ReferenceCurve l = ReferenceCurve::line({1, 0});
  CHECK_THROWS_AS(conditional_distance_estimate(l, 0.9, 0.05, 50, small()), InsufficientAcceptance);
  try {
    conditional_distance_estimate(l, 0.9, 0.05, 50, small());
  } catch (const InsufficientAcceptance& e) {
    CHECK(e.accepted == 0);
    CHECK(e.total == 50);
  }
  const auto est = conditional_distance_estimate(l, 0.5, 1.5, 4000, small());
  CHECK(est.accepted > 0);
  CHECK(est.total == 4000);
  CHECK(est.p_hat >= 0.0);
  CHECK(est.p_hat <= 1.0);
  CHECK(est.out_of_regime);
  const auto ad = conditional_distance_adaptive(l, 0.9, 0.05, 16, 64, 10, small());
  CHECK(std::isnan(ad.p_hat));
  CHECK(ad.accepted == 0);
  CHECK(ad.total == 64);
  const auto grown = conditional_distance_adaptive(l, 0.9, 1.0, 16, 4096, 200, small());
  CHECK(grown.accepted >= 200);
  CHECK(grown.total <= 4096);
  // the first `grown.total` trials are the same as a fixed run of that size
  const auto fixed = conditional_distance_estimate(l, 0.9, 1.0, grown.total, small());
  CHECK(fixed.accepted == grown.accepted);
  CHECK(fixed.p_hat == grown.p_hat);
  // acceptance is monotone in delta on matched paths
  std::size_t prev = 0;
  for (double d : {0.6, 0.8, 1.0, 1.5}) {
    const auto p = tube_probability(l, d, 4000, small());
    const auto hits = static_cast<std::size_t>(std::llround(p.mean * 4000));
    CHECK(hits >= prev);
    prev = hits;
  }
}

TEST_CASE("shift sampler") {
  const ReferenceCurve l = ReferenceCurve::line({1, 0});
  const auto s = girsanov_shift_sampler(l, 1.0, 0.9, 20000, small());
  const auto r = tube_probability(l, 1.0, 20000, {6, 1, 1, Exec::openmp});
  CHECK(std::abs(s.tube_probability.mean - r.mean) < 3 * combined_stderr(s.tube_probability.std_error, r.std_error));
  CHECK(s.ess >= 10.0);
  CHECK(s.accepted > 0);
  CHECK_THROWS_AS(girsanov_shift_sampler(l, 0.1, 0.9, 200, small()), DegenerateWeights);
}

TEST_CASE("ratio experiment rows") {
  const auto rows = girsanov_ratio_experiment(ReferenceCurve::line({1, 0}), {1.5, 1.0, 0.05}, 2000, small());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].target == doctest::Approx(std::exp(-0.5)));
  CHECK(rows[0].accepted >= rows[1].accepted);
  CHECK(std::isnan(rows[2].estimate));
  CHECK(rows[2].accepted == 0);
  CHECK(rows[0].total == 2000);
}

TEST_CASE("time change diagnostics") {
  const auto rows = time_change_diagnostics({0.5, 1.0}, 5000, {8, 1, 0, Exec::openmp});
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].mean_tau.mean == doctest::Approx(0.25).epsilon(0.1));
  CHECK(std::abs(rows[0].var_a.mean - rows[0].mean_tau.mean) <
        4 * combined_stderr(rows[0].var_a.std_error, rows[0].mean_tau.std_error));
  CHECK_THROWS(time_change_diagnostics({0.3}, 10, {8, 1, 0, Exec::openmp}));
}

TEST_CASE("support positivity") {
  const auto s = support_positivity(ReferenceCurve::line({1, 0}), 1.0, 4000, small());
  CHECK(s.hits > 0);
  CHECK(s.lower_bound > 0.0);
  CHECK(s.lower_bound < s.p_hat.mean);
  CHECK_FALSE(s.inconclusive);
  const auto none = support_positivity(ReferenceCurve::line({1, 0}), 0.01, 200, small());
  CHECK(none.hits == 0);
  CHECK(none.inconclusive);
}

TEST_CASE("estimators do not depend on the execution policy") {
  const ReferenceCurve p = poly2(1, 1);
  const auto a = conditional_distance_estimate(p, 0.9, 1.0, 3000, small(Exec::serial));
  const auto b = conditional_distance_estimate(p, 0.9, 1.0, 3000, small(Exec::openmp));
  CHECK(a.p_hat == b.p_hat);
  CHECK(a.accepted == b.accepted);
  const auto ra = girsanov_ratio_experiment(p, {1.5, 1.0}, 3000, small(Exec::serial));
  const auto rb = girsanov_ratio_experiment(p, {1.5, 1.0}, 3000, small(Exec::openmp));
  for (int i = 0; i < 2; ++i) {
    CHECK(ra[i].estimate == rb[i].estimate);
    CHECK(ra[i].std_error == rb[i].std_error);
  }
  const auto ma = martingale_mean(p, 3000, small(Exec::serial));
  const auto mb = martingale_mean(p, 3000, small(Exec::openmp));
  CHECK(ma.mean == mb.mean);
  CHECK(ma.std_error == mb.std_error);
}
