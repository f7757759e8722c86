#include <cmath>
#include <numbers>

#include "doctest.h"
#include "heis/density.hpp"
#include "oracles.hpp"

using namespace heis;

namespace {

// brute-force max_s |phi(s)^{-1} xi(s)| with the quotient written out by hand
double brute_distance(const Curve& phi, double a1, double a2, double a3, std::size_t nodes) {
  double worst = 0.0;
  for (std::size_t i = 0; i <= nodes; ++i) {
    const double s = static_cast<double>(i) / nodes;
    const GroupElement p = phi.at(s);
    const double qx = a1 * s - p.x, qy = a2 * s - p.y;
    const double qz = a3 * s - p.z - 0.5 * (p.x * a2 * s - a1 * s * p.y);
    worst = std::max(worst, oracle::hnorm(qx, qy, qz));
  }
  return worst;
}

}  // namespace

TEST_CASE("identity-anchored vertical helix") {
  for (int n : {1, 3, 8, 20}) {
    const HorizontalCurve h = helix_vertical(n);
    CHECK(h.at(0.0) == GroupElement::identity());
    CHECK(horizontality_defect(h) <= 1e-12);
    const double n2 = static_cast<double>(n) * n;
    for (double s : {0.1, 0.5, 0.77, 1.0}) {
      CHECK(std::abs(h.at(s).z - (s - std::sin(n2 * s) / n2)) < 1e-13);
      CHECK(std::abs(h.at(s).x - (2.0 / n) * (std::cos(n2 * s) - 1)) < 1e-13);
    }
    CHECK(energy(h) == doctest::Approx(2.5 * n2 - 0.75 * std::sin(2 * n2)).epsilon(1e-12));
  }
  CHECK_THROWS(helix_vertical(0));
}

TEST_CASE("vertical helix distance is bounded by C / n with C <= 5") {
  for (int n : {4, 8, 16, 32, 64}) {
    const HorizontalCurve h = helix_vertical(n);
    const std::size_t nodes = helix_grid_nodes(n, 1.0);
    CHECK(nodes >= 16384);
    CHECK(nodes >= 64u * n * n);
    const double d = path_distance(h, linear_target(0, 0, 1), TimeGrid::uniform(nodes));
    CHECK(d == doctest::Approx(brute_distance(h, 0, 0, 1, nodes)).epsilon(1e-12));
    CHECK(n * d <= 5.0);
  }
}

TEST_CASE("offset-start helix") {
  const double a1 = 0.7, a2 = -1.3, a3 = 1.1;
  for (int n : {2, 5, 9}) {
    const HorizontalCurve h = helix_linear({a1, a2, a3, n, HelixVariant::offset_start});
    CHECK(h.at(0.0).x == doctest::Approx(2.0 / n));
    CHECK(horizontality_defect(h) <= 1e-10);
    const double k = static_cast<double>(n) * n * a3;
    for (double s : {0.0, 0.2, 0.45, 0.9, 1.0}) {
      const GroupElement q = quotient(h.at(s), linear_target(a1, a2, a3).at(s));
      const double iz = oracle::simpson(
          [&](double r) { return a1 * std::sin(k * r) - 2 * a2 * std::cos(k * r); }, 0, s, 20000);
      CHECK(std::abs(q.x + (2.0 / n) * std::cos(k * s)) <= 1e-10);
      CHECK(std::abs(q.y + std::sin(k * s) / n) <= 1e-10);
      CHECK(std::abs(q.z - iz / n) <= 1e-10);
    }
  }
  // vertical case: the quotient lies in the plane, so the distance is exactly 2 / n
  const HorizontalCurve v = helix_vertical(8, HelixVariant::offset_start);
  CHECK(path_distance(v, linear_target(0, 0, 1), TimeGrid::uniform(16384)) == doctest::Approx(0.25));
}

TEST_CASE("general linear helix") {
  const HelixSpec spec{1, 1, 1, 16};
  const HorizontalCurve h = helix_linear(spec);
  CHECK(h.at(0.0) == GroupElement::identity());
  CHECK(horizontality_defect(h) <= 1e-12);
  const double e = oracle::simpson([&](double s) { return norm_sq(h.velocity(s).planar()); }, 0, 1, 200000);
  CHECK(energy(h) == doctest::Approx(e).epsilon(1e-9));
  const auto rows = helix_table({1, 1, 1}, {4, 8, 16, 32});
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].distance_refined < rows[i - 1].distance_refined);
  for (const auto& r : rows) CHECK(r.bound_constant == doctest::Approx(r.n * r.distance_refined));
}

TEST_CASE("a3 = 0 is the straight lift") {
  for (HelixVariant v : {HelixVariant::identity_anchored, HelixVariant::offset_start}) {
    const HorizontalCurve h = helix_linear({0.4, -2, 0, 7, v});
    CHECK(path_distance(h, linear_target(0.4, -2, 0), TimeGrid::uniform(1024)) == 0.0);
  }
}

TEST_CASE("approximate_path") {
  const std::size_t nodes = 1 << 14;
  const TimeGrid g = TimeGrid::uniform(nodes);
  std::vector<GroupElement> vertical, bent, horizontal;
  const HorizontalCurve poly = HorizontalCurve::chain({std::make_shared<QuadraticArc>(Vec2{1, 0}, Vec2{0, 1})}, {1.0});
  for (double t : g.times()) {
    vertical.push_back({0, 0, t});
    bent.push_back({std::sin(t), 0, t});
    horizontal.push_back(poly.at(t));
  }
  const SampledPath xv(g, vertical), xb(g, bent), xh(g, horizontal);

  const Approximation one = approximate_path(xv, 8, 1);
  CHECK(one.distance == doctest::Approx(path_distance(helix_vertical(8), linear_target(0, 0, 1), g)).epsilon(1e-12));

  // horizontal target: only the linearisation error of the chord remains
  const Approximation h = approximate_path(xh, 16, 64);
  CHECK(horizontality_defect(h.curve) <= 1e-12);
  CHECK(h.distance < 0.01);

  double prev = 1e300;
  for (int k = 2; k <= 6; ++k) {
    const int m = 1 << k;
    const Approximation a = approximate_path(xb, m, m);
    CHECK(horizontality_defect(a.curve) <= 1e-12);
    CHECK(a.curve.at(0.0) == GroupElement::identity());
    CHECK(a.distance < prev);
    prev = a.distance;
    // joints are continuous
    for (double t : a.curve.breakpoints())
      if (t > 0.0 && t < 1.0) CHECK(group_distance(a.curve.at(t), a.curve.at(std::nextafter(t, 0.0))) < 1e-6);
  }
  CHECK_THROWS(approximate_path(xv, 0, 1));
  CHECK_THROWS(approximate_path(xv, 4, 0));
}

TEST_CASE("carnot-caratheodory upper bound") {
  CHECK(cc_upper_bound(GroupElement::identity()) == 0.0);
  CHECK(cc_upper_bound({1, 0, 0}) == 1.0);
  CHECK(cc_upper_bound({0, 0, 2}) == doctest::Approx(2 * std::sqrt(2 * std::numbers::pi)));
  oracle::Rand r(29);
  double c_check = 0.0;
  for (int i = 0; i < 200; ++i) {
    const GroupElement g = r.g(2);
    const HorizontalCurve j = cc_join(g);
    const GroupElement e = j.at(1.0);
    CHECK(std::abs(e.x - g.x) < 1e-10);
    CHECK(std::abs(e.y - g.y) < 1e-10);
    CHECK(std::abs(e.z - g.z) < 1e-10);
    CHECK(horizontality_defect(j) <= 1e-12);
    const double len = cc_upper_bound(g);
    // constant speed: length^2 = energy
    CHECK(std::abs(len * len - energy(j)) <= 1e-10 * (1 + len * len));
    c_check = std::max(c_check, homogeneous_norm(g) / len);
  }
  MESSAGE("homogeneous_norm / cc_upper_bound <= " << c_check);
  CHECK(c_check <= 1.0);
  CHECK(cc_join(GroupElement::identity()).at(1.0) == GroupElement::identity());
}
