// Wong-Zakai horizontal approximations g_delta of the hypoelliptic
// Brownian motion, and the two Monte-Carlo experiments built on them.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "heis/brownian.hpp"
#include "heis/curve.hpp"
#include "heis/parallel.hpp"

namespace heis {

/// C^1 map f on [0, 1] with f(0) = 0 and f(1) = 1.
struct Interpolant {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;

  static Interpolant linear();
  /// 3u^2 - 2u^3.
  static Interpolant smoothstep();
  /// Throws std::invalid_argument unless the endpoint conditions hold.
  void validate() const;
  bool is_linear() const { return name == "linear"; }
};

struct InterpolantPair {
  Interpolant first = Interpolant::linear();
  Interpolant second = Interpolant::linear();

  static InterpolantPair both(Interpolant f) { return {f, f}; }
  bool identical() const { return first.name == second.name; }
  bool linear() const { return first.is_linear() && second.is_linear(); }
};

/// One coarse interval of g_delta in its own frame:
/// c(u) = (f1(u) dx, f2(u) dy), lift = dx dy / 2 int_0^u (f1 f2' - f2 f1').
class InterpolantArc final : public Arc {
 public:
  InterpolantArc(Vec2 delta, InterpolantPair pair);
  Vec2 planar(double u) const override;
  Vec2 planar_rate(double u) const override;
  Vec2 planar_accel(double u) const override;
  double lift(double u) const override;
  double lift_rate(double u) const override;
  double energy() const override;

 private:
  Vec2 d_;
  InterpolantPair f_;
};

/// g_delta realised at the fine nodes and as a HorizontalCurve.
struct WongZakaiPath {
  double coarse_step = 0.0;
  InterpolantPair interpolants;
  std::vector<Vec2> coarse_planar;  // B(k delta)
  std::vector<GroupElement> fine;   // g_delta at the fine nodes
  HorizontalCurve curve;
};

/// Builds g_delta from a fine-step sample. delta must be the fine step
/// times a power of two. Coarse-node values of z accumulate
/// omega(B_k, dB_k) / 2 plus the interpolant's own area, in the same order
/// as levy_area, so with delta equal to the fine step g_delta reproduces g.
WongZakaiPath wong_zakai(const DiffusionSample& sample, double delta,
                         const InterpolantPair& f = InterpolantPair{});

/// Fine-node values of g_delta from node values of B. `ratio` fine steps
/// per coarse step.
struct WongZakaiTable {
  std::size_t ratio = 1;
  std::vector<double> f1, f2;  // f_i(j / ratio)
  std::vector<double> area;    // int_0^{j/ratio} (f1 f2' - f2 f1')
  double area_full = 0.0;
};
WongZakaiTable make_wong_zakai_table(const InterpolantPair& f, std::size_t ratio);
void wong_zakai_nodes(std::span<const Vec2> planar, const WongZakaiTable& table,
                      std::span<GroupElement> out);

// ---- experiments ------------------------------------------------------------

/// One row of `delta,estimate,stderr,n_trials,fine_step,seed`.
struct ExperimentRow {
  double delta = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n_trials = 0;
  double fine_step = 0.0;
  std::uint64_t seed = 0;
};

struct WsConvergenceConfig {
  std::vector<double> deltas{0.25, 0.125, 0.0625, 0.03125};
  int fine_level = 12;
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  InterpolantPair interpolants{};
  Exec exec = Exec::openmp;
};

/// Monte-Carlo E[d(g_delta, g)^2] per delta, the distance taken over the
/// fine nodes. All levels share the same Brownian samples. Rows are sorted
/// by decreasing delta.
std::vector<ExperimentRow> ws_convergence_experiment(const WsConvergenceConfig& cfg);

struct EnergyDivergenceConfig {
  std::vector<int> fine_levels{6, 7, 8, 9, 10};
  double coarse_delta = 0.125;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  Exec exec = Exec::openmp;
};

/// For each fine step h two rows: delta = h (energy of the piecewise-linear
/// interpolant of g, mean 2/h) and delta = coarse_delta (energy of
/// g_coarse_delta built from the same step-h sample).
std::vector<ExperimentRow> energy_divergence_experiment(const EnergyDivergenceConfig& cfg);

}  // namespace heis
