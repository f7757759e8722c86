#include "heis/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heis/quadrature.hpp"

namespace heis {

double QuadraticArc::energy() const {
  return norm_sq(p1_) + 2.0 * dot(p1_, p2_) + 4.0 / 3.0 * norm_sq(p2_);
}

CircleArc::CircleArc(double radius, double turns, int orientation)
    : r_(radius), k_(turns), s_(orientation >= 0 ? 1 : -1) {
  if (!(radius >= 0.0)) throw std::invalid_argument("CircleArc: radius must be non-negative");
}

Vec2 CircleArc::planar(double u) const {
  const double th = 2.0 * std::numbers::pi * k_ * u;
  return {r_ * (std::cos(th) - 1.0), s_ * r_ * std::sin(th)};
}

Vec2 CircleArc::planar_rate(double u) const {
  const double w = 2.0 * std::numbers::pi * k_;
  const double th = w * u;
  return {-r_ * w * std::sin(th), s_ * r_ * w * std::cos(th)};
}

Vec2 CircleArc::planar_accel(double u) const {
  const double w = 2.0 * std::numbers::pi * k_;
  const double th = w * u;
  return {-r_ * w * w * std::cos(th), -s_ * r_ * w * w * std::sin(th)};
}

double CircleArc::lift(double u) const {
  const double th = 2.0 * std::numbers::pi * k_ * u;
  return 0.5 * s_ * r_ * r_ * (th - std::sin(th));
}

double CircleArc::lift_rate(double u) const {
  const double w = 2.0 * std::numbers::pi * k_;
  return 0.5 * s_ * r_ * r_ * w * (1.0 - std::cos(w * u));
}

double CircleArc::energy() const {
  const double w = 2.0 * std::numbers::pi * k_ * r_;
  return w * w;
}

GeneralArc::GeneralArc(Fn c, Fn dc, Fn ddc, int resolution)
    : c_(std::move(c)), dc_(std::move(dc)), ddc_(std::move(ddc)), resolution_(std::max(1, resolution)) {
  if (!c_ || !dc_) throw std::invalid_argument("GeneralArc: planar part and its derivative are required");
}

Vec2 GeneralArc::planar_accel(double u) const {
  if (ddc_) return ddc_(u);
  constexpr double h = 1e-5;
  const double lo = std::max(0.0, u - h);
  const double hi = std::min(1.0, u + h);
  return (dc_(hi) - dc_(lo)) * (1.0 / (hi - lo));
}

double GeneralArc::lift(double u) const {
  if (u <= 0.0) return 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil(resolution_ * u)));
  return integrate([this](double s) { return 0.5 * omega(c_(s), dc_(s)); }, 0.0, u, 1e-10, panels).value;
}

double GeneralArc::energy() const {
  return integrate([this](double s) { return norm_sq(dc_(s)); }, 0.0, 1.0, 1e-10, resolution_).value;
}

HorizontalCurve HorizontalCurve::chain(const std::vector<ArcPtr>& arcs,
                                       const std::vector<double>& durations, GroupElement origin) {
  if (arcs.empty() || arcs.size() != durations.size())
    throw std::invalid_argument("HorizontalCurve::chain: need one duration per arc");
  double total = 0.0;
  for (double d : durations) {
    if (!(d > 0.0)) throw std::invalid_argument("HorizontalCurve::chain: durations must be positive");
    total += d;
  }
  std::vector<Piece> pieces;
  pieces.reserve(arcs.size());
  GroupElement start = origin;
  double t = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    acc += durations[i];
    const double t1 = (i + 1 == arcs.size()) ? 1.0 : acc / total;
    pieces.push_back({t, t1, start, arcs[i]});
    start = start * arcs[i]->local(1.0);
    t = t1;
  }
  return HorizontalCurve(std::move(pieces));
}

HorizontalCurve::HorizontalCurve(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("HorizontalCurve: no pieces");
  if (pieces_.front().t0 != 0.0 || pieces_.back().t1 != 1.0)
    throw std::invalid_argument("HorizontalCurve: pieces must cover [0, 1]");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!pieces_[i].arc) throw std::invalid_argument("HorizontalCurve: null arc");
    if (!(pieces_[i].t1 > pieces_[i].t0)) throw std::invalid_argument("HorizontalCurve: empty piece");
    if (i > 0 && pieces_[i].t0 != pieces_[i - 1].t1)
      throw std::invalid_argument("HorizontalCurve: pieces must be contiguous");
  }
}

std::size_t HorizontalCurve::piece_of(double t) const {
  if (t <= 0.0) return 0;
  if (t >= 1.0) return pieces_.size() - 1;
  const auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                                   [](double v, const Piece& p) { return v < p.t0; });
  return static_cast<std::size_t>(it - pieces_.begin()) - 1;
}

GroupElement HorizontalCurve::at(double t) const {
  const Piece& p = pieces_[piece_of(t)];
  const double u = (t - p.t0) / (p.t1 - p.t0);
  return p.start * p.arc->local(u);
}

TangentVector HorizontalCurve::velocity(double t) const {
  const Piece& p = pieces_[piece_of(t)];
  const double span = p.t1 - p.t0;
  const double u = (t - p.t0) / span;
  const Vec2 rate = p.arc->planar_rate(u);
  const double zrate = p.arc->lift_rate(u) + 0.5 * omega(p.start.planar(), rate);
  return {rate.x / span, rate.y / span, zrate / span, p.start * p.arc->local(u)};
}

Vec2 HorizontalCurve::planar_accel(double t) const {
  const Piece& p = pieces_[piece_of(t)];
  const double span = p.t1 - p.t0;
  return p.arc->planar_accel((t - p.t0) / span) * (1.0 / (span * span));
}

std::vector<double> HorizontalCurve::breakpoints() const {
  std::vector<double> b;
  b.reserve(pieces_.size() + 1);
  for (const auto& p : pieces_) b.push_back(p.t0);
  b.push_back(1.0);
  return b;
}

std::vector<GroupElement> HorizontalCurve::values(const TimeGrid& grid) const {
  std::vector<GroupElement> out(grid.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    while (j + 1 < pieces_.size() && t >= pieces_[j].t1) ++j;
    const Piece& p = pieces_[j];
    out[i] = p.start * p.arc->local((t - p.t0) / (p.t1 - p.t0));
  }
  return out;
}

SampledPath HorizontalCurve::sample(const TimeGrid& grid) const {
  return SampledPath(grid, values(grid), Interpolation::piecewise_linear);
}

ParametricPath::ParametricPath(PositionFn pos, VelocityFn vel, std::vector<double> breakpoints)
    : pos_(std::move(pos)), vel_(std::move(vel)), breaks_(std::move(breakpoints)) {
  if (!pos_ || !vel_) throw std::invalid_argument("ParametricPath: position and velocity are required");
  if (breaks_.size() < 2 || breaks_.front() != 0.0 || breaks_.back() != 1.0)
    throw std::invalid_argument("ParametricPath: breakpoints must run from 0 to 1");
}

TangentVector ParametricPath::velocity(double t) const {
  const GroupElement v = vel_(t);
  return {v.x, v.y, v.z, pos_(t)};
}

AlgebraElement maurer_cartan(const Curve& c, double t) {
  const TangentVector v = c.velocity(t);
  return {v.v1, v.v2, v.v3 - 0.5 * omega(v.base.planar(), v.planar())};
}

double horizontality_defect(const Curve& c, int samples_per_piece) {
  const auto b = c.breakpoints();
  double worst = 0.0;
  const int m = std::max(1, samples_per_piece);
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    for (int k = 0; k < m; ++k) {
      const double t = b[i] + (b[i + 1] - b[i]) * static_cast<double>(k) / m;
      worst = std::max(worst, std::abs(maurer_cartan(c, t).c));
    }
  }
  return worst;
}

double energy(const HorizontalCurve& c) {
  double e = 0.0;
  for (const auto& p : c.pieces()) e += p.arc->energy() / (p.t1 - p.t0);
  return e;
}

HorizontalCurve horizontal_lift(const TimeGrid& grid, std::span<const Vec2> planar) {
  if (planar.size() != grid.size()) throw GridMismatch("horizontal_lift: point count does not match grid");
  if (!(planar.front() == Vec2{})) throw std::invalid_argument("horizontal_lift: planar path must start at 0");
  std::vector<HorizontalCurve::Piece> pieces;
  pieces.reserve(grid.intervals());
  GroupElement start{};
  for (std::size_t i = 0; i < grid.intervals(); ++i) {
    const Vec2 dx = planar[i + 1] - planar[i];
    pieces.push_back({grid[i], grid[i + 1], start, std::make_shared<QuadraticArc>(dx)});
    start = {planar[i + 1].x, planar[i + 1].y, start.z + 0.5 * omega(planar[i], dx)};
  }
  return HorizontalCurve(std::move(pieces));
}

HorizontalCurve horizontal_lift(GeneralArc::Fn planar, GeneralArc::Fn rate, GeneralArc::Fn accel,
                                int resolution) {
  const Vec2 p0 = planar(0.0);
  if (!(std::abs(p0.x) <= 1e-14 && std::abs(p0.y) <= 1e-14))
    throw std::invalid_argument("horizontal_lift: planar path must start at 0");
  auto arc = std::make_shared<GeneralArc>(std::move(planar), std::move(rate), std::move(accel), resolution);
  return HorizontalCurve({{0.0, 1.0, GroupElement::identity(), std::move(arc)}});
}

double path_distance(const Curve& p, const Curve& q, const TimeGrid& grid) {
  double worst = 0.0;
  for (double t : grid.times()) worst = std::max(worst, homogeneous_norm4(quotient(p.at(t), q.at(t))));
  return std::sqrt(std::sqrt(worst));
}

}  // namespace heis
