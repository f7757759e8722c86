// Horizontal helices shrinking onto non-horizontal lines, piecewise helix
// approximants of arbitrary paths, and explicit horizontal joins.
#pragma once

#include <string>
#include <vector>

#include "heis/curve.hpp"

namespace heis {

enum class HelixVariant {
  identity_anchored,  // phase-shifted so that phi_n(0) = e
  offset_start,       // starts at (2/n, 0, 0)
};
HelixVariant parse_helix_variant(const std::string& s);
std::string to_string(HelixVariant v);

struct HelixSpec {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 1.0;
  int n = 1;
  HelixVariant variant = HelixVariant::identity_anchored;
};

/// x(u) = a u + h(u), h = ((2/n)(cos ku - 1), sin(ku) / n), k = n^2 a3,
/// with the closed-form lift.
class IdentityHelixArc final : public Arc {
 public:
  IdentityHelixArc(double a1, double a2, double a3, int n);
  Vec2 planar(double u) const override;
  Vec2 planar_rate(double u) const override;
  Vec2 planar_accel(double u) const override;
  double lift(double u) const override;
  double lift_rate(double u) const override;
  double energy() const override;
  int resolution() const override;

 private:
  Vec2 h(double u) const;
  Vec2 dh(double u) const;
  Vec2 a_;
  double a3_, n_, k_;
};

/// (a1 u + (2/n) cos ku, a2 u + sin(ku) / n) with its closed-form
/// vertical part; the arc does not start at the origin.
class OffsetHelixArc final : public Arc {
 public:
  OffsetHelixArc(double a1, double a2, double a3, int n);
  Vec2 planar(double u) const override;
  Vec2 planar_rate(double u) const override;
  Vec2 planar_accel(double u) const override;
  double lift(double u) const override;
  double lift_rate(double u) const override;
  double energy() const override;
  int resolution() const override;

 private:
  double a1_, a2_, a3_, n_, k_;
};

HorizontalCurve helix_vertical(int n, HelixVariant variant = HelixVariant::identity_anchored);
/// a3 = 0 gives the straight lift of (a1 s, a2 s) for both variants.
HorizontalCurve helix_linear(const HelixSpec& spec);

/// xi(t) = (a1 t, a2 t, a3 t).
ParametricPath linear_target(double a1, double a2, double a3);

/// Uniform node count used to evaluate helix distances:
/// max(2^14, 64 n^2 max(1, |a3|)) rounded up to a power of two.
std::size_t helix_grid_nodes(int n, double a3);

struct HelixRow {
  int n = 0;
  double distance = 0.0;          // on helix_grid_nodes
  double distance_refined = 0.0;  // on a 4x finer grid
  double bound_constant = 0.0;    // n * distance_refined
};

/// Distance from the helix of index n to its linear target for each n.
std::vector<HelixRow> helix_table(const HelixSpec& base, const std::vector<int>& ns);

struct Approximation {
  HorizontalCurve curve;
  double distance;  // at the target's grid nodes
};

/// Coordinate-linear interpolation of `target` on `segments` equal pieces,
/// each piece replaced by a left-translated identity-anchored helix of
/// index n. Segment j aims at target(t_{j+1}) from where the chain
/// actually is, so end errors are corrected rather than summed. A segment
/// whose vertical increment gives less than one turn (n^2 |a3| < 2 pi) is
/// a straight chord; its residual area is picked up by later segments.
Approximation approximate_path(const SampledPath& target, int n, int segments);

/// Length of a straight horizontal segment to (x, 0) followed by a circular
/// loop enclosing area z: |x| + 2 sqrt(pi |z|).
double cc_upper_bound(const GroupElement& g);
/// The join itself, at constant speed, so energy = cc_upper_bound^2.
HorizontalCurve cc_join(const GroupElement& g);

}  // namespace heis
