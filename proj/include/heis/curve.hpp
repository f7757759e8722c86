// Piecewise-smooth curves in the Heisenberg group. A HorizontalCurve is a
// chain of arcs, each left-translated to start where the previous one
// ended; every arc stores its planar part together with the exact lift
// z(u) = 1/2 int_0^u omega(c, c'), so horizontality holds by construction.
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "heis/group.hpp"
#include "heis/path.hpp"

namespace heis {

/// Any curve on [0, 1] that can report position and velocity; derivatives
/// at breakpoints are right-sided.
class Curve {
 public:
  virtual ~Curve() = default;
  virtual GroupElement at(double t) const = 0;
  virtual TangentVector velocity(double t) const = 0;
  /// Piece boundaries, including 0 and 1.
  virtual std::vector<double> breakpoints() const = 0;
};

/// One smooth piece on the local parameter u in [0, 1].
class Arc {
 public:
  virtual ~Arc() = default;
  virtual Vec2 planar(double u) const = 0;
  virtual Vec2 planar_rate(double u) const = 0;
  virtual Vec2 planar_accel(double u) const = 0;
  /// Vertical coordinate of the arc in its own frame.
  virtual double lift(double u) const = 0;
  virtual double lift_rate(double u) const = 0;
  /// int_0^1 |planar_rate(u)|^2 du.
  virtual double energy() const = 0;
  /// Number of sub-panels needed to resolve the arc's oscillation.
  virtual int resolution() const { return 1; }

  GroupElement local(double u) const { return GroupElement::from(planar(u), lift(u)); }
};

using ArcPtr = std::shared_ptr<const Arc>;

/// c(u) = p1 u + p2 u^2. Covers straight segments (p2 = 0) and the
/// quadratic reference curves.
class QuadraticArc final : public Arc {
 public:
  QuadraticArc(Vec2 p1, Vec2 p2 = {}) : p1_(p1), p2_(p2) {}
  Vec2 planar(double u) const override { return p1_ * u + p2_ * (u * u); }
  Vec2 planar_rate(double u) const override { return p1_ + p2_ * (2.0 * u); }
  Vec2 planar_accel(double) const override { return p2_ * 2.0; }
  double lift(double u) const override { return omega(p1_, p2_) * u * u * u / 6.0; }
  double lift_rate(double u) const override { return 0.5 * omega(p1_, p2_) * u * u; }
  double energy() const override;

 private:
  Vec2 p1_, p2_;
};

/// Closed loop c(u) = r (cos(2 pi k u) - 1, s sin(2 pi k u)), s = +-1, which
/// encloses signed area s k pi r^2.
class CircleArc final : public Arc {
 public:
  CircleArc(double radius, double turns, int orientation);
  Vec2 planar(double u) const override;
  Vec2 planar_rate(double u) const override;
  Vec2 planar_accel(double u) const override;
  double lift(double u) const override;
  double lift_rate(double u) const override;
  double energy() const override;

 private:
  double r_, k_;
  int s_;
};

/// Planar part given by arbitrary C^2 functions with c(0) = 0; the lift is
/// evaluated by adaptive quadrature at 1e-10 absolute tolerance.
class GeneralArc final : public Arc {
 public:
  using Fn = std::function<Vec2(double)>;
  GeneralArc(Fn c, Fn dc, Fn ddc = {}, int resolution = 1);
  Vec2 planar(double u) const override { return c_(u); }
  Vec2 planar_rate(double u) const override { return dc_(u); }
  Vec2 planar_accel(double u) const override;
  double lift(double u) const override;
  double lift_rate(double u) const override { return 0.5 * omega(c_(u), dc_(u)); }
  double energy() const override;
  int resolution() const override { return resolution_; }

 private:
  Fn c_, dc_, ddc_;
  int resolution_;
};

/// A chain of arcs over consecutive time intervals.
class HorizontalCurve final : public Curve {
 public:
  struct Piece {
    double t0 = 0.0;
    double t1 = 1.0;
    GroupElement start{};
    ArcPtr arc;
  };

  /// Arcs with relative durations; starts are chained by left translation
  /// from `origin`.
  static HorizontalCurve chain(const std::vector<ArcPtr>& arcs, const std::vector<double>& durations,
                               GroupElement origin = GroupElement::identity());
  /// Pieces with explicit start points; used for curves that are not a
  /// plain chain starting at the identity.
  explicit HorizontalCurve(std::vector<Piece> pieces);

  GroupElement at(double t) const override;
  TangentVector velocity(double t) const override;
  std::vector<double> breakpoints() const override;

  /// Planar acceleration (right-sided), used by integration by parts.
  Vec2 planar_accel(double t) const;
  const std::vector<Piece>& pieces() const { return pieces_; }
  /// Node samples. The path must start at the identity.
  SampledPath sample(const TimeGrid& grid) const;
  /// Node values without the identity-start check.
  std::vector<GroupElement> values(const TimeGrid& grid) const;

 private:
  std::size_t piece_of(double t) const;
  std::vector<Piece> pieces_;
};

/// General (possibly non-horizontal) curve given by closures.
class ParametricPath final : public Curve {
 public:
  using PositionFn = std::function<GroupElement(double)>;
  using VelocityFn = std::function<GroupElement(double)>;  // (x', y', z')
  ParametricPath(PositionFn pos, VelocityFn vel, std::vector<double> breakpoints = {0.0, 1.0});

  GroupElement at(double t) const override { return pos_(t); }
  TangentVector velocity(double t) const override;
  std::vector<double> breakpoints() const override { return breaks_; }

 private:
  PositionFn pos_;
  VelocityFn vel_;
  std::vector<double> breaks_;
};

/// (x'(t), z'(t) - omega(x(t), x'(t)) / 2).
AlgebraElement maurer_cartan(const Curve& c, double t);

/// sup |z' - omega(x, x') / 2| over the breakpoints (right-sided) and
/// `samples_per_piece` interior points of every piece.
double horizontality_defect(const Curve& c, int samples_per_piece = 256);

/// int_0^1 |x'|^2 ds, closed form or quadrature per arc.
double energy(const HorizontalCurve& c);

/// Horizontal lift of a piecewise-linear planar path; the z increment over
/// step i is exactly omega(x(t_i), dx_i) / 2.
HorizontalCurve horizontal_lift(const TimeGrid& grid, std::span<const Vec2> planar);

/// Horizontal lift of a smooth planar path x(t) with x(0) = 0.
HorizontalCurve horizontal_lift(GeneralArc::Fn planar, GeneralArc::Fn rate,
                                GeneralArc::Fn accel = {}, int resolution = 1);

/// max over grid nodes of |p(t)^{-1} q(t)|.
double path_distance(const Curve& p, const Curve& q, const TimeGrid& grid);

}  // namespace heis
