#include "heis/brownian.hpp"

#include <cmath>
#include <stdexcept>

namespace heis {

int dyadic_level(double step) {
  if (!(step > 0.0) || step > 1.0) throw std::invalid_argument("dyadic_level: step must lie in (0, 1]");
  int exp = 0;
  const double mant = std::frexp(step, &exp);
  if (mant != 0.5) throw std::invalid_argument("dyadic_level: step is not a power of two");
  return 1 - exp;
}

int dyadic_level(const TimeGrid& grid) {
  if (!grid.is_uniform(0.0)) throw std::invalid_argument("sample_bm: grid is not uniform");
  const std::size_t n = grid.intervals();
  if ((n & (n - 1)) != 0) throw std::invalid_argument("sample_bm: step count must be a power of two");
  int level = 0;
  while ((std::size_t{1} << level) < n) ++level;
  return level;
}

void sample_dyadic_bm(int level, RngSpec rng, std::span<Vec2> out) {
  sample_dyadic_bm(level, rng, out, [](std::size_t, Vec2) { return false; });
}

std::vector<Vec2> sample_bm(const TimeGrid& grid, RngSpec rng) {
  const int level = dyadic_level(grid);
  std::vector<Vec2> out(grid.size());
  sample_dyadic_bm(level, rng, out);
  return out;
}

void levy_area(std::span<const Vec2> planar, std::span<double> out) {
  if (out.size() != planar.size()) throw GridMismatch("levy_area: output size mismatch");
  if (planar.empty()) return;
  double a = 0.0;
  out[0] = 0.0;
  for (std::size_t k = 0; k + 1 < planar.size(); ++k) {
    a += 0.5 * omega(planar[k], planar[k + 1] - planar[k]);
    out[k + 1] = a;
  }
}

std::vector<double> levy_area(std::span<const Vec2> planar) {
  std::vector<double> out(planar.size());
  levy_area(planar, out);
  return out;
}

std::vector<GroupElement> DiffusionSample::values() const {
  std::vector<GroupElement> v(planar.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = at(i);
  return v;
}

SampledPath DiffusionSample::path() const {
  return SampledPath(grid, values(), Interpolation::node_only);
}

DiffusionSample hypoelliptic_bm(const TimeGrid& grid, RngSpec rng) {
  DiffusionSample s{grid, sample_bm(grid, rng), {}, rng};
  s.area = levy_area(s.planar);
  return s;
}

std::vector<LevyLawRow> levy_law_experiment(const LevyLawConfig& cfg) {
  if (cfg.trials < 2) throw std::invalid_argument("levy_law_experiment: need at least 2 trials");
  const std::size_t n = std::size_t{1} << cfg.fine_level;
  std::vector<double> a1(cfg.trials);
  for_each_trial(cfg.trials, cfg.exec, [&](std::size_t trial) {
    std::vector<Vec2> b(n + 1);
    sample_dyadic_bm(cfg.fine_level, {cfg.seed, trial}, b);
    double a = 0.0;
    for (std::size_t k = 0; k < n; ++k) a += 0.5 * omega(b[k], b[k + 1] - b[k]);
    a1[trial] = a;
  });
  const double h = std::ldexp(1.0, -cfg.fine_level);
  std::vector<LevyLawRow> rows;
  rows.push_back({"var_A", 0.0, variance_estimate(a1), 0.25, h, cfg.seed});
  std::vector<double> c(cfg.trials);
  for (double lambda : cfg.lambdas) {
    for (std::size_t i = 0; i < cfg.trials; ++i) c[i] = std::cos(lambda * a1[i]);
    rows.push_back({"char_fn", lambda, mean_estimate(c), 1.0 / std::cosh(0.5 * lambda), h, cfg.seed});
  }
  return rows;
}

}  // namespace heis
