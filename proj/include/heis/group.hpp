// Heisenberg group arithmetic: group law, Lie bracket, differentials of
// translations, and the homogeneous norm.
//
// Coordinates are (x, y, z) with the group law
//   (v1, z1) . (v2, z2) = (v1 + v2, z1 + z2 + omega(v1, v2) / 2),
// where omega is the standard symplectic form on the plane.
#pragma once

#include <cmath>
#include <stdexcept>

namespace heis {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {s * x, s * y}; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double norm_sq(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Standard symplectic form: omega(u, w) = u.x * w.y - w.x * u.y.
constexpr double omega(Vec2 u, Vec2 w) { return u.x * w.y - w.x * u.y; }

struct GroupElement {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec2 planar() const { return {x, y}; }
  constexpr bool operator==(const GroupElement&) const = default;

  static constexpr GroupElement identity() { return {}; }
  static constexpr GroupElement from(Vec2 v, double z) { return {v.x, v.y, z}; }
};

constexpr GroupElement group_mul(const GroupElement& a, const GroupElement& b) {
  return {a.x + b.x, a.y + b.y,
          a.z + b.z + 0.5 * omega(a.planar(), b.planar())};
}

constexpr GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  return group_mul(a, b);
}

constexpr GroupElement inverse(const GroupElement& g) { return {-g.x, -g.y, -g.z}; }

/// g1^{-1} g2, written out so the kernels do not round through two products.
constexpr GroupElement quotient(const GroupElement& g1, const GroupElement& g2) {
  return {g2.x - g1.x, g2.y - g1.y,
          g2.z - g1.z - 0.5 * omega(g1.planar(), g2.planar())};
}

inline bool is_finite(const GroupElement& g) {
  return std::isfinite(g.x) && std::isfinite(g.y) && std::isfinite(g.z);
}

/// Element (a, c) of the Lie algebra, identified with R^2 x R.
struct AlgebraElement {
  double a1 = 0.0;
  double a2 = 0.0;
  double c = 0.0;

  constexpr bool operator==(const AlgebraElement&) const = default;
};

constexpr AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) {
  return {0.0, 0.0, omega({a.a1, a.a2}, {b.a1, b.a2})};
}

/// Tangent vector (v1, v2, v3) at the point `base`.
struct TangentVector {
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;
  GroupElement base{};

  constexpr Vec2 planar() const { return {v1, v2}; }
};

// Left translation follows the convention L_k(g) = k^{-1} g. With that
// convention the left and right differentials have the same coordinate
// formula; only the base point of the result differs.
constexpr TangentVector left_diff(const GroupElement& k, const TangentVector& v) {
  return {v.v1, v.v2, v.v3 + 0.5 * omega(v.planar(), k.planar()),
          group_mul(inverse(k), v.base)};
}

constexpr TangentVector right_diff(const GroupElement& k, const TangentVector& v) {
  return {v.v1, v.v2, v.v3 + 0.5 * omega(v.planar(), k.planar()),
          group_mul(v.base, k)};
}

/// |g| = (|v|^4 + z^2)^(1/4).
inline double homogeneous_norm(const GroupElement& g) {
  const double r2 = g.x * g.x + g.y * g.y;
  return std::sqrt(std::sqrt(r2 * r2 + g.z * g.z));
}

/// Fourth power of the homogeneous norm; avoids the two square roots in
/// inner loops that only compare or maximise.
constexpr double homogeneous_norm4(const GroupElement& g) {
  const double r2 = g.x * g.x + g.y * g.y;
  return r2 * r2 + g.z * g.z;
}

/// Left-invariant distance |g1^{-1} g2|.
inline double group_distance(const GroupElement& g1, const GroupElement& g2) {
  return homogeneous_norm(quotient(g1, g2));
}

/// The homogeneous distance exactly as displayed in the source formula,
/// with cross-term coefficient +1. Kept as a diagnostic alongside the
/// canonical group_distance; the two are only claimed to be equivalent.
inline double rho_display(const GroupElement& g1, const GroupElement& g2) {
  const double dx = g1.x - g2.x;
  const double dy = g1.y - g2.y;
  const double r2 = dx * dx + dy * dy;
  const double dz = g1.z - g2.z + omega(g1.planar(), g2.planar());
  return std::sqrt(std::sqrt(r2 * r2 + dz * dz));
}

/// Anisotropic dilation (x, y, z) -> (l x, l y, l^2 z).
inline GroupElement dilate(double lambda, const GroupElement& g) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilate: lambda must be positive");
  return {lambda * g.x, lambda * g.y, lambda * lambda * g.z};
}

}  // namespace heis
