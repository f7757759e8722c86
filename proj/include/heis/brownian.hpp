// Planar Brownian motion, Levy area, and the hypoelliptic Brownian motion
// g_t = (B_t, A_t).
//
// Paths are built by dyadic Brownian-bridge refinement: the value at t = 1
// is drawn first, then midpoints level by level. Every node has a fixed id
// (root 0, level-l midpoint j has id 2^(l-1) + j) and its two normals are
// drawn from the counter-based generator at that id. Consequences:
//   * node values at a dyadic time are identical for every finer step, so
//     grids nest exactly;
//   * a sampler may stop after any level, since coarse nodes are final.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <span>
#include <vector>

#include "heis/group.hpp"
#include "heis/parallel.hpp"
#include "heis/path.hpp"
#include "heis/rng.hpp"
#include "heis/stats.hpp"

namespace heis {

/// Level of a dyadic uniform grid (2^level intervals); throws otherwise.
int dyadic_level(const TimeGrid& grid);
/// Level for a step 2^-k; throws if `step` is not such a power.
int dyadic_level(double step);

/// Fills out[0..2^level] with Brownian node values. `reject(i, value)` is
/// called for each node as soon as it is final; returning true abandons the
/// path and makes the function return false.
template <class Reject>
bool sample_dyadic_bm(int level, RngSpec rng, std::span<Vec2> out, Reject&& reject);

/// Unconditional version of the above.
void sample_dyadic_bm(int level, RngSpec rng, std::span<Vec2> out);

/// Brownian node values on a uniform dyadic grid; B(0) = 0.
std::vector<Vec2> sample_bm(const TimeGrid& grid, RngSpec rng);

/// Left-point Ito sums A_{k+1} = A_k + omega(B_k, B_{k+1} - B_k) / 2, A_0 = 0.
std::vector<double> levy_area(std::span<const Vec2> planar);
void levy_area(std::span<const Vec2> planar, std::span<double> out);

/// One realisation of (B_t, A_t) on a fine grid.
struct DiffusionSample {
  TimeGrid grid;
  std::vector<Vec2> planar;
  std::vector<double> area;
  RngSpec rng;

  GroupElement at(std::size_t i) const { return GroupElement::from(planar[i], area[i]); }
  std::vector<GroupElement> values() const;
  SampledPath path() const;
};

DiffusionSample hypoelliptic_bm(const TimeGrid& grid, RngSpec rng);

struct LevyLawConfig {
  std::vector<double> lambdas{0.5, 1.0, 2.0};
  int fine_level = 12;
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  Exec exec = Exec::openmp;
};

/// `statistic` is "var_A" (lambda unused, oracle 1/4) or "char_fn"
/// (E cos(lambda A_1), oracle 1 / cosh(lambda / 2)).
struct LevyLawRow {
  std::string statistic;
  double lambda = 0.0;
  MeanEstimate estimate;
  double oracle = 0.0;
  double fine_step = 0.0;
  std::uint64_t seed = 0;
};

std::vector<LevyLawRow> levy_law_experiment(const LevyLawConfig& cfg);

// ---- implementation -------------------------------------------------------

template <class Reject>
bool sample_dyadic_bm(int level, RngSpec rng, std::span<Vec2> out, Reject&& reject) {
  const std::size_t n = std::size_t{1} << level;
  const StreamRng gen(rng);
  out[0] = {};
  out[n] = gen.normal2(0);
  if (reject(n, out[n])) return false;
  for (int l = 1; l <= level; ++l) {
    // midpoint of an interval of length 2^-(l-1) has variance 2^-(l+1)
    const double sd = std::sqrt(std::ldexp(1.0, -(l + 1)));
    const std::size_t half = n >> l;
    const std::size_t count = std::size_t{1} << (l - 1);
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t mid = (2 * j + 1) * half;
      const Vec2 z = gen.normal2(count + j);
      const Vec2 a = out[mid - half];
      const Vec2 b = out[mid + half];
      out[mid] = {0.5 * (a.x + b.x) + sd * z.x, 0.5 * (a.y + b.y) + sd * z.y};
      if (reject(mid, out[mid])) return false;
    }
  }
  return true;
}

}  // namespace heis
