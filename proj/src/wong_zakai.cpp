#include "heis/wong_zakai.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heis/quadrature.hpp"
#include "heis/stats.hpp"

namespace heis {

Interpolant Interpolant::linear() {
  return {"linear", [](double u) { return u; }, [](double) { return 1.0; }};
}

Interpolant Interpolant::smoothstep() {
  return {"smoothstep", [](double u) { return u * u * (3.0 - 2.0 * u); },
          [](double u) { return 6.0 * u * (1.0 - u); }};
}

void Interpolant::validate() const {
  if (!f || !df) throw std::invalid_argument("interpolant '" + name + "': missing function");
  if (std::abs(f(0.0)) > 1e-14) throw std::invalid_argument("interpolant '" + name + "': f(0) != 0");
  if (std::abs(f(1.0) - 1.0) > 1e-14) throw std::invalid_argument("interpolant '" + name + "': f(1) != 1");
}

InterpolantArc::InterpolantArc(Vec2 delta, InterpolantPair pair) : d_(delta), f_(std::move(pair)) {}

Vec2 InterpolantArc::planar(double u) const { return {f_.first.f(u) * d_.x, f_.second.f(u) * d_.y}; }

Vec2 InterpolantArc::planar_rate(double u) const {
  return {f_.first.df(u) * d_.x, f_.second.df(u) * d_.y};
}

Vec2 InterpolantArc::planar_accel(double u) const {
  constexpr double h = 1e-6;
  const double lo = std::max(0.0, u - h);
  const double hi = std::min(1.0, u + h);
  return (planar_rate(hi) - planar_rate(lo)) * (1.0 / (hi - lo));
}

double InterpolantArc::lift_rate(double u) const {
  if (f_.identical()) return 0.0;
  const double w = f_.first.f(u) * f_.second.df(u) - f_.second.f(u) * f_.first.df(u);
  return 0.5 * d_.x * d_.y * w;
}

double InterpolantArc::lift(double u) const {
  if (f_.identical() || u <= 0.0) return 0.0;
  const auto& a = f_.first;
  const auto& b = f_.second;
  const double w =
      integrate([&](double s) { return a.f(s) * b.df(s) - b.f(s) * a.df(s); }, 0.0, u, 1e-10).value;
  return 0.5 * d_.x * d_.y * w;
}

double InterpolantArc::energy() const {
  if (f_.linear()) return norm_sq(d_);
  const auto& a = f_.first;
  const auto& b = f_.second;
  const double ea = integrate([&](double s) { return a.df(s) * a.df(s); }, 0.0, 1.0, 1e-10).value;
  const double eb = integrate([&](double s) { return b.df(s) * b.df(s); }, 0.0, 1.0, 1e-10).value;
  return d_.x * d_.x * ea + d_.y * d_.y * eb;
}

WongZakaiTable make_wong_zakai_table(const InterpolantPair& f, std::size_t ratio) {
  f.first.validate();
  f.second.validate();
  if (ratio == 0) throw std::invalid_argument("wong_zakai: ratio must be positive");
  WongZakaiTable t;
  t.ratio = ratio;
  t.f1.resize(ratio + 1);
  t.f2.resize(ratio + 1);
  t.area.assign(ratio + 1, 0.0);
  const double r = static_cast<double>(ratio);
  for (std::size_t j = 0; j <= ratio; ++j) {
    const double u = static_cast<double>(j) / r;
    t.f1[j] = f.first.is_linear() ? u : f.first.f(u);
    t.f2[j] = f.second.is_linear() ? u : f.second.f(u);
  }
  t.f1[0] = t.f2[0] = 0.0;
  t.f1[ratio] = t.f2[ratio] = 1.0;
  if (!f.identical()) {
    const auto& a = f.first;
    const auto& b = f.second;
    const auto w = [&](double s) { return a.f(s) * b.df(s) - b.f(s) * a.df(s); };
    double acc = 0.0;
    for (std::size_t j = 0; j < ratio; ++j) {
      acc += integrate(w, static_cast<double>(j) / r, static_cast<double>(j + 1) / r, 1e-10 / r).value;
      t.area[j + 1] = acc;
    }
    t.area_full = acc;
  }
  return t;
}

void wong_zakai_nodes(std::span<const Vec2> planar, const WongZakaiTable& table,
                      std::span<GroupElement> out) {
  const std::size_t n = planar.size() - 1;
  const std::size_t m = table.ratio;
  if (n % m != 0) throw std::invalid_argument("wong_zakai: coarse step does not divide the fine grid");
  if (out.size() != planar.size()) throw GridMismatch("wong_zakai: output size mismatch");
  double z = 0.0;
  for (std::size_t k = 0; k < n; k += m) {
    const Vec2 b = planar[k];
    const Vec2 d = planar[k + m] - b;
    const double cross = 0.5 * d.x * d.y;
    out[k] = GroupElement::from(b, z);
    for (std::size_t j = 1; j < m; ++j) {
      const Vec2 local{table.f1[j] * d.x, table.f2[j] * d.y};
      out[k + j] = {b.x + local.x, b.y + local.y, z + cross * table.area[j] + 0.5 * omega(b, local)};
    }
    z += 0.5 * omega(b, d);
    if (table.area_full != 0.0) z += cross * table.area_full;
  }
  out[n] = GroupElement::from(planar[n], z);
}

namespace {

std::size_t coarse_ratio(double delta, std::size_t fine_steps) {
  const double r = delta * static_cast<double>(fine_steps);
  const auto ratio = static_cast<std::size_t>(std::llround(r));
  if (ratio == 0 || std::abs(r - static_cast<double>(ratio)) > 1e-9 || fine_steps % ratio != 0 ||
      (ratio & (ratio - 1)) != 0)
    throw std::invalid_argument("wong_zakai: delta must be the fine step times a power of two");
  return ratio;
}

}  // namespace

WongZakaiPath wong_zakai(const DiffusionSample& sample, double delta, const InterpolantPair& f) {
  const std::size_t n = sample.grid.intervals();
  const std::size_t m = coarse_ratio(delta, n);
  const WongZakaiTable table = make_wong_zakai_table(f, m);

  WongZakaiPath out{delta, f, {}, std::vector<GroupElement>(n + 1),
                    HorizontalCurve({{0.0, 1.0, {}, std::make_shared<QuadraticArc>(Vec2{})}})};
  wong_zakai_nodes(sample.planar, table, out.fine);

  const std::size_t coarse = n / m;
  out.coarse_planar.resize(coarse + 1);
  std::vector<HorizontalCurve::Piece> pieces;
  pieces.reserve(coarse);
  for (std::size_t k = 0; k <= coarse; ++k) out.coarse_planar[k] = sample.planar[k * m];
  for (std::size_t k = 0; k < coarse; ++k) {
    const Vec2 d = out.coarse_planar[k + 1] - out.coarse_planar[k];
    pieces.push_back({sample.grid[k * m], sample.grid[(k + 1) * m], out.fine[k * m],
                      std::make_shared<InterpolantArc>(d, f)});
  }
  out.curve = HorizontalCurve(std::move(pieces));
  return out;
}

std::vector<ExperimentRow> ws_convergence_experiment(const WsConvergenceConfig& cfg) {
  if (cfg.trials == 0) throw std::invalid_argument("ws_convergence: trials must be positive");
  if (cfg.deltas.empty()) throw std::invalid_argument("ws_convergence: no delta levels");
  const std::size_t n = std::size_t{1} << cfg.fine_level;
  std::vector<double> deltas = cfg.deltas;
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  std::vector<WongZakaiTable> tables;
  for (double d : deltas) tables.push_back(make_wong_zakai_table(cfg.interpolants, coarse_ratio(d, n)));

  const std::size_t levels = deltas.size();
  std::vector<double> dist_sq(levels * cfg.trials);
  for_each_trial(cfg.trials, cfg.exec, [&](std::size_t trial) {
    std::vector<Vec2> b(n + 1);
    std::vector<double> a(n + 1);
    std::vector<GroupElement> approx(n + 1);
    sample_dyadic_bm(cfg.fine_level, {cfg.seed, trial}, b);
    levy_area(b, a);
    for (std::size_t l = 0; l < levels; ++l) {
      wong_zakai_nodes(b, tables[l], approx);
      double worst = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        worst = std::max(worst, homogeneous_norm4(quotient(approx[i], GroupElement::from(b[i], a[i]))));
      dist_sq[l * cfg.trials + trial] = std::sqrt(worst);
    }
  });

  std::vector<ExperimentRow> rows;
  const double h = 1.0 / static_cast<double>(n);
  for (std::size_t l = 0; l < levels; ++l) {
    const auto est = mean_estimate(std::span<const double>(dist_sq).subspan(l * cfg.trials, cfg.trials));
    rows.push_back({deltas[l], est.mean, est.std_error, cfg.trials, h, cfg.seed});
  }
  return rows;
}

std::vector<ExperimentRow> energy_divergence_experiment(const EnergyDivergenceConfig& cfg) {
  if (cfg.trials == 0) throw std::invalid_argument("energy_divergence: trials must be positive");
  std::vector<int> levels = cfg.fine_levels;
  std::sort(levels.begin(), levels.end());
  const std::size_t nl = levels.size();
  std::vector<double> fine_energy(nl * cfg.trials);
  std::vector<double> coarse_energy(nl * cfg.trials);
  for (int level : levels) {
    if (std::ldexp(1.0, -level) > cfg.coarse_delta)
      throw std::invalid_argument("energy_divergence: fine step must not exceed the coarse delta");
  }

  for_each_trial(cfg.trials, cfg.exec, [&](std::size_t trial) {
    for (std::size_t l = 0; l < nl; ++l) {
      const TimeGrid grid = TimeGrid::dyadic(levels[l]);
      const DiffusionSample s = hypoelliptic_bm(grid, {cfg.seed, trial});
      const double h = grid.step();
      CompensatedSum e;
      for (std::size_t k = 0; k + 1 < s.planar.size(); ++k) e.add(norm_sq(s.planar[k + 1] - s.planar[k]) / h);
      fine_energy[l * cfg.trials + trial] = e.value();
      coarse_energy[l * cfg.trials + trial] = energy(wong_zakai(s, cfg.coarse_delta).curve);
    }
  });

  std::vector<ExperimentRow> rows;
  for (std::size_t l = 0; l < nl; ++l) {
    const double h = std::ldexp(1.0, -levels[l]);
    const auto fe = mean_estimate(std::span<const double>(fine_energy).subspan(l * cfg.trials, cfg.trials));
    const auto ce = mean_estimate(std::span<const double>(coarse_energy).subspan(l * cfg.trials, cfg.trials));
    rows.push_back({h, fe.mean, fe.std_error, cfg.trials, h, cfg.seed});
    rows.push_back({cfg.coarse_delta, ce.mean, ce.std_error, cfg.trials, h, cfg.seed});
  }
  return rows;
}

}  // namespace heis
