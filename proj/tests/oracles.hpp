// Reference computations used only by the tests: written out by hand,
// independent of the library's own routines.
#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "heis/group.hpp"

namespace oracle {

// composite Simpson rule on n (even) panels
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline heis::GroupElement mul(const heis::GroupElement& a, const heis::GroupElement& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z + 0.5 * (a.x * b.y - b.x * a.y)};
}

inline double hnorm(double x, double y, double z) { return std::pow(std::pow(x * x + y * y, 2) + z * z, 0.25); }

struct Rand {
  std::mt19937_64 eng;
  explicit Rand(std::uint64_t seed = 42) : eng(seed) {}
  double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  heis::GroupElement g(double r = 10.0) { return {(*this)(-r, r), (*this)(-r, r), (*this)(-r, r)}; }
};

}  // namespace oracle
