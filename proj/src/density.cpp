#include "heis/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace heis {

namespace {

// x - sin x without cancellation for small x
double x_minus_sin(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return x * x2 * (1.0 / 6.0 - x2 * (1.0 / 120.0 - x2 / 5040.0));
  }
  return x - std::sin(x);
}

double one_minus_cos(double x) {
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s;
}

int oscillation_panels(double k) { return std::max(1, static_cast<int>(std::ceil(std::abs(k) / std::numbers::pi))); }

void check_n(int n) {
  if (n < 1) throw std::invalid_argument("helix: n must be at least 1");
}

}  // namespace

HelixVariant parse_helix_variant(const std::string& s) {
  if (s == "identity-anchored" || s == "identity") return HelixVariant::identity_anchored;
  if (s == "offset-start" || s == "verbatim") return HelixVariant::offset_start;
  throw std::invalid_argument("unknown helix variant '" + s + "'");
}

std::string to_string(HelixVariant v) {
  return v == HelixVariant::identity_anchored ? "identity-anchored" : "offset-start";
}

IdentityHelixArc::IdentityHelixArc(double a1, double a2, double a3, int n)
    : a_{a1, a2}, a3_(a3), n_(n), k_(static_cast<double>(n) * n * a3) {
  check_n(n);
  if (a3 == 0.0) throw std::invalid_argument("IdentityHelixArc: a3 must be nonzero");
}

Vec2 IdentityHelixArc::h(double u) const {
  const double ku = k_ * u;
  return {-(2.0 / n_) * one_minus_cos(ku), std::sin(ku) / n_};
}

Vec2 IdentityHelixArc::dh(double u) const {
  const double ku = k_ * u;
  return {-(2.0 * k_ / n_) * std::sin(ku), (k_ / n_) * std::cos(ku)};
}

Vec2 IdentityHelixArc::planar(double u) const { return a_ * u + h(u); }
Vec2 IdentityHelixArc::planar_rate(double u) const { return a_ + dh(u); }

Vec2 IdentityHelixArc::planar_accel(double u) const {
  const double ku = k_ * u;
  const double k2 = k_ * k_ / n_;
  return {-2.0 * k2 * std::cos(ku), -k2 * std::sin(ku)};
}

double IdentityHelixArc::lift(double u) const {
  const double ku = k_ * u;
  // int_0^u omega(h, h') and int_0^u omega(a, h)
  const double hh = 2.0 * a3_ * x_minus_sin(ku) / k_;
  const double ah = a_.x * one_minus_cos(ku) / (n_ * k_) + (2.0 * a_.y / n_) * x_minus_sin(ku) / k_;
  return 0.5 * (u * omega(a_, h(u)) - 2.0 * ah + hh);
}

double IdentityHelixArc::lift_rate(double u) const {
  const double hh = (2.0 * k_ / (n_ * n_)) * one_minus_cos(k_ * u);
  return 0.5 * (u * omega(a_, dh(u)) - omega(a_, h(u)) + hh);
}

double IdentityHelixArc::energy() const {
  // |a|^2 + 2 a . h(1) + int |h'|^2, with int sin^2(ku) = 1/2 - sin(2k) / (4k)
  const double kn2 = k_ * k_ / (n_ * n_);
  const double hh = kn2 * (1.0 + 3.0 * (0.5 - std::sin(2.0 * k_) / (4.0 * k_)));
  return norm_sq(a_) + 2.0 * dot(a_, h(1.0)) + hh;
}

int IdentityHelixArc::resolution() const { return oscillation_panels(k_); }

OffsetHelixArc::OffsetHelixArc(double a1, double a2, double a3, int n)
    : a1_(a1), a2_(a2), a3_(a3), n_(n), k_(static_cast<double>(n) * n * a3) {
  check_n(n);
  if (a3 == 0.0) throw std::invalid_argument("OffsetHelixArc: a3 must be nonzero");
}

Vec2 OffsetHelixArc::planar(double u) const {
  const double ku = k_ * u;
  return {a1_ * u + (2.0 / n_) * std::cos(ku), a2_ * u + std::sin(ku) / n_};
}

Vec2 OffsetHelixArc::planar_rate(double u) const {
  const double ku = k_ * u;
  return {a1_ - (2.0 * k_ / n_) * std::sin(ku), a2_ + (k_ / n_) * std::cos(ku)};
}

Vec2 OffsetHelixArc::planar_accel(double u) const {
  const double ku = k_ * u;
  const double k2 = k_ * k_ / n_;
  return {-2.0 * k2 * std::cos(ku), -k2 * std::sin(ku)};
}

double OffsetHelixArc::lift(double u) const {
  const double ku = k_ * u;
  const double c = std::cos(ku);
  const double s = std::sin(ku);
  return a3_ * u - (a2_ * u / n_) * c + (a1_ * u / (2.0 * n_)) * s +
         (2.0 * a2_ * s / k_ - a1_ * one_minus_cos(ku) / k_) / n_;
}

double OffsetHelixArc::lift_rate(double u) const {
  const double ku = k_ * u;
  const double c = std::cos(ku);
  const double s = std::sin(ku);
  return a3_ - a2_ * c / n_ + a2_ * u * k_ * s / n_ + a1_ * s / (2.0 * n_) + a1_ * u * k_ * c / (2.0 * n_) +
         (2.0 * a2_ * c - a1_ * s) / n_;
}

double OffsetHelixArc::energy() const {
  const double kn2 = k_ * k_ / (n_ * n_);
  const double hh = kn2 * (1.0 + 3.0 * (0.5 - std::sin(2.0 * k_) / (4.0 * k_)));
  // cross term 2 int a . h' = 2 a . (h(1) - h(0))
  const Vec2 dh{(2.0 / n_) * (std::cos(k_) - 1.0), std::sin(k_) / n_};
  return a1_ * a1_ + a2_ * a2_ + 2.0 * (a1_ * dh.x + a2_ * dh.y) + hh;
}

int OffsetHelixArc::resolution() const { return oscillation_panels(k_); }

HorizontalCurve helix_vertical(int n, HelixVariant variant) { return helix_linear({0.0, 0.0, 1.0, n, variant}); }

HorizontalCurve helix_linear(const HelixSpec& spec) {
  check_n(spec.n);
  ArcPtr arc;
  if (spec.a3 == 0.0)
    arc = std::make_shared<QuadraticArc>(Vec2{spec.a1, spec.a2});
  else if (spec.variant == HelixVariant::identity_anchored)
    arc = std::make_shared<IdentityHelixArc>(spec.a1, spec.a2, spec.a3, spec.n);
  else
    arc = std::make_shared<OffsetHelixArc>(spec.a1, spec.a2, spec.a3, spec.n);
  return HorizontalCurve({{0.0, 1.0, GroupElement::identity(), arc}});
}

ParametricPath linear_target(double a1, double a2, double a3) {
  return ParametricPath([=](double t) { return GroupElement{a1 * t, a2 * t, a3 * t}; },
                        [=](double) { return GroupElement{a1, a2, a3}; });
}

std::size_t helix_grid_nodes(int n, double a3) {
  const double want = std::max(16384.0, 64.0 * n * n * std::max(1.0, std::abs(a3)));
  std::size_t nodes = 1;
  while (static_cast<double>(nodes) < want) nodes <<= 1;
  return nodes;
}

std::vector<HelixRow> helix_table(const HelixSpec& base, const std::vector<int>& ns) {
  const ParametricPath xi = linear_target(base.a1, base.a2, base.a3);
  std::vector<HelixRow> rows;
  for (int n : ns) {
    HelixSpec s = base;
    s.n = n;
    const HorizontalCurve phi = helix_linear(s);
    const std::size_t nodes = helix_grid_nodes(n, base.a3);
    HelixRow r;
    r.n = n;
    r.distance = path_distance(phi, xi, TimeGrid::uniform(nodes));
    r.distance_refined = path_distance(phi, xi, TimeGrid::uniform(4 * nodes));
    r.bound_constant = n * r.distance_refined;
    rows.push_back(r);
  }
  return rows;
}

namespace {

GroupElement interpolate(const SampledPath& p, double t) {
  const TimeGrid& g = p.grid();
  const std::size_t i = g.interval_of(t);
  const double w = (t - g[i]) / (g[i + 1] - g[i]);
  const GroupElement& a = p[i];
  const GroupElement& b = p[i + 1];
  if (w == 0.0) return a;
  if (w == 1.0) return b;
  return {a.x + w * (b.x - a.x), a.y + w * (b.y - a.y), a.z + w * (b.z - a.z)};
}

}  // namespace

Approximation approximate_path(const SampledPath& target, int n, int segments) {
  check_n(n);
  if (segments < 1) throw std::invalid_argument("approximate_path: segments must be at least 1");
  if (homogeneous_norm(target[0]) != 0.0) throw std::invalid_argument("approximate_path: target must start at e");
  std::vector<ArcPtr> arcs;
  std::vector<double> durations(static_cast<std::size_t>(segments), 1.0);
  const double n2 = static_cast<double>(n) * n;
  GroupElement at = GroupElement::identity();
  for (int j = 0; j < segments; ++j) {
    const double t1 = (j + 1 == segments) ? 1.0 : static_cast<double>(j + 1) / segments;
    const GroupElement a = quotient(at, interpolate(target, t1));
    // under one full turn the helix adds almost no area but still moves the
    // end point by ~ n |a3|; take the chord and leave the area to later pieces
    ArcPtr arc;
    if (n2 * std::abs(a.z) < 2.0 * std::numbers::pi)
      arc = std::make_shared<QuadraticArc>(a.planar());
    else
      arc = std::make_shared<IdentityHelixArc>(a.x, a.y, a.z, n);
    at = at * arc->local(1.0);
    arcs.push_back(std::move(arc));
  }
  HorizontalCurve curve = HorizontalCurve::chain(arcs, durations);
  const double d = path_distance(curve.values(target.grid()), target.values());
  return {std::move(curve), d};
}

double cc_upper_bound(const GroupElement& g) {
  return norm(g.planar()) + 2.0 * std::sqrt(std::numbers::pi * std::abs(g.z));
}

HorizontalCurve cc_join(const GroupElement& g) {
  const double line = norm(g.planar());
  const double r = std::sqrt(std::abs(g.z) / std::numbers::pi);
  const double loop = 2.0 * std::numbers::pi * r;
  std::vector<ArcPtr> arcs;
  std::vector<double> durations;
  if (line > 0.0) {
    arcs.push_back(std::make_shared<QuadraticArc>(g.planar()));
    durations.push_back(line);
  }
  if (loop > 0.0) {
    arcs.push_back(std::make_shared<CircleArc>(r, 1.0, g.z > 0.0 ? 1 : -1));
    durations.push_back(loop);
  }
  if (arcs.empty()) return HorizontalCurve::chain({std::make_shared<QuadraticArc>(Vec2{})}, {1.0});
  return HorizontalCurve::chain(arcs, durations);
}

}  // namespace heis
