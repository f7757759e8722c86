#include <cmath>
#include <numbers>

#include "doctest.h"
#include "heis/curve.hpp"
#include "oracles.hpp"

using namespace heis;

namespace {

// 1/2 int_0^u omega(c, c') by Simpson
double lift_oracle(const Arc& a, double u) {
  return 0.5 * oracle::simpson([&](double s) { return omega(a.planar(s), a.planar_rate(s)); }, 0.0, u, 4000);
}

double energy_oracle(const Arc& a) {
  return oracle::simpson([&](double s) { return norm_sq(a.planar_rate(s)); }, 0.0, 1.0, 4000);
}

}  // namespace

TEST_CASE("quadratic arc: poly2 lift is t^3 / 6") {
  const QuadraticArc a({1, 0}, {0, 1});
  for (double u : {0.0, 0.3, 0.7, 1.0}) {
    CHECK(a.lift(u) == doctest::Approx(u * u * u / 6.0).epsilon(1e-14));
    CHECK(std::abs(a.lift(u) - lift_oracle(a, u)) < 1e-12);
  }
  CHECK(a.energy() == doctest::Approx(1.0 + 4.0 / 3.0));
  CHECK(std::abs(QuadraticArc({0.3, -2}, {1.5, 0.25}).energy() - energy_oracle(QuadraticArc({0.3, -2}, {1.5, 0.25}))) <
        1e-10);
}

TEST_CASE("circle arc: lift (t - sin t) / 2 for the unit circle") {
  const CircleArc a(1.0, 1.0 / (2 * std::numbers::pi), 1);
  for (double u : {0.1, 0.5, 1.0})
    CHECK(a.lift(u) == doctest::Approx(0.5 * (u - std::sin(u))).epsilon(1e-13));
  const CircleArc loop(0.7, 2.0, -1);
  CHECK(loop.planar(1.0).x == doctest::Approx(0.0));
  CHECK(loop.lift(1.0) == doctest::Approx(-2.0 * std::numbers::pi * 0.49));
  CHECK(std::abs(loop.lift(0.37) - lift_oracle(loop, 0.37)) < 1e-10);
  CHECK(std::abs(loop.energy() - energy_oracle(loop)) < 1e-8);
  CHECK_THROWS(CircleArc(-1.0, 1.0, 1));
}

TEST_CASE("general arc quadrature against simpson") {
  const GeneralArc a([](double u) { return Vec2{std::sin(3 * u), u * u}; },
                     [](double u) { return Vec2{3 * std::cos(3 * u), 2 * u}; },
                     [](double u) { return Vec2{-9 * std::sin(3 * u), 2.0}; });
  for (double u : {0.2, 0.6, 1.0}) CHECK(std::abs(a.lift(u) - lift_oracle(a, u)) < 1e-10);
  CHECK(std::abs(a.energy() - energy_oracle(a)) < 1e-9);
  CHECK(a.planar_accel(0.5).y == 2.0);
}

TEST_CASE("horizontal curves: chaining, continuity and defect") {
  const auto q = std::make_shared<QuadraticArc>(Vec2{1, 0.5}, Vec2{-0.3, 0.2});
  const auto c = std::make_shared<CircleArc>(0.4, 1.0, 1);
  const auto l = std::make_shared<QuadraticArc>(Vec2{-1, 2});
  const HorizontalCurve h = HorizontalCurve::chain({q, c, l}, {1.0, 2.0, 1.0});
  CHECK(h.breakpoints() == std::vector<double>{0.0, 0.25, 0.75, 1.0});
  CHECK(h.at(0.0) == GroupElement::identity());
  const GroupElement end1 = q->local(1.0);
  const GroupElement end2 = end1 * c->local(1.0);
  const GroupElement end3 = end2 * l->local(1.0);
  CHECK(group_distance(h.at(0.25), end1) < 1e-14);
  CHECK(group_distance(h.at(0.75), end2) < 1e-14);
  CHECK(group_distance(h.at(1.0), end3) < 1e-14);
  CHECK(group_distance(h.at(0.25 - 1e-13), h.at(0.25)) < 1e-6);
  CHECK(horizontality_defect(h) <= 1e-12);
  // energy: each arc's energy divided by its duration
  CHECK(energy(h) == doctest::Approx(q->energy() / 0.25 + c->energy() / 0.5 + l->energy() / 0.25));
  const TangentVector v = h.velocity(0.1);
  CHECK(v.v1 == doctest::Approx(q->planar_rate(0.4).x / 0.25));
  CHECK(std::abs(maurer_cartan(h, 0.5).c) < 1e-12);
  const SampledPath s = h.sample(TimeGrid::uniform(64));
  CHECK(s.size() == 65);
  CHECK(s[64] == h.at(1.0));
}

TEST_CASE("horizontal lift of piecewise-linear planar paths") {
  oracle::Rand r(23);
  const TimeGrid g = TimeGrid::uniform(16);
  std::vector<Vec2> x{{0, 0}};
  for (int i = 0; i < 16; ++i) x.push_back({r(-1, 1), r(-1, 1)});
  const HorizontalCurve h = horizontal_lift(g, x);
  CHECK(horizontality_defect(h) <= 1e-12);
  double z = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    z += 0.5 * omega(x[i], x[i + 1] - x[i]);
    CHECK(std::abs(h.at(g[i + 1]).z - z) < 1e-13);
    CHECK(h.at(g[i + 1]).x == doctest::Approx(x[i + 1].x));
  }
}

TEST_CASE("smooth horizontal lift") {
  const HorizontalCurve h = horizontal_lift([](double t) { return Vec2{t, t * t}; },
                                            [](double t) { return Vec2{1, 2 * t}; });
  CHECK(h.at(1.0).z == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
  CHECK(h.planar_accel(0.5).y == doctest::Approx(2.0));
}

TEST_CASE("parametric paths and curve distance") {
  const ParametricPath xi([](double t) { return GroupElement{0, 0, t}; }, [](double) { return GroupElement{0, 0, 1}; });
  CHECK(maurer_cartan(xi, 0.3).c == 1.0);
  CHECK(horizontality_defect(xi) == doctest::Approx(1.0));
  const HorizontalCurve zero = HorizontalCurve::chain({std::make_shared<QuadraticArc>(Vec2{})}, {1.0});
  CHECK(path_distance(zero, xi, TimeGrid::uniform(8)) == doctest::Approx(1.0));
}
