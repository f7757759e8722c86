#include "heis/girsanov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include "heis/brownian.hpp"
#include "heis/quadrature.hpp"

namespace heis {

ReferenceCurve::ReferenceCurve(HorizontalCurve curve, std::string spec)
    : curve_(std::move(curve)), spec_(std::move(spec)) {
  const GroupElement s = curve_.at(0.0);
  if (homogeneous_norm(s) > 1e-14) throw std::invalid_argument("reference curve must start at the identity");
  energy_ = heis::energy(curve_);
  const auto& pieces = curve_.pieces();
  CompensatedSum c;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto& p = pieces[k];
    const Arc& arc = *p.arc;
    const int panels = 16 * std::max(1, arc.resolution());
    // |dx/dt| dt = |dc/du| du, so the duration cancels
    c.add(integrate([&](double u) {
            const Vec2 r = arc.planar_rate(u);
            return std::abs(r.x) + std::abs(r.y);
          }, 0.0, 1.0, 1e-10, panels).value);
    const double dur = p.t1 - p.t0;
    const int samples = 256 * std::max(1, arc.resolution());
    for (int j = 0; j <= samples; ++j) {
      const double u = static_cast<double>(j) / samples;
      accel_sup_ = std::max(accel_sup_, norm(arc.planar_accel(u)) / (dur * dur));
    }
    if (k > 0) {
      const auto& q = pieces[k - 1];
      const Vec2 dv = arc.planar_rate(0.0) * (1.0 / dur) - q.arc->planar_rate(1.0) * (1.0 / (q.t1 - q.t0));
      if (norm(dv) > 1e-14) jumps_.push_back({p.t0, dv});
    }
  }
  c_phi_ = c.value();
}

ReferenceCurve ReferenceCurve::zero() {
  return ReferenceCurve(HorizontalCurve::chain({std::make_shared<QuadraticArc>(Vec2{})}, {1.0}), "zero");
}

ReferenceCurve ReferenceCurve::line(Vec2 a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "line %.17g %.17g", a.x, a.y);
  return ReferenceCurve(HorizontalCurve::chain({std::make_shared<QuadraticArc>(a)}, {1.0}), buf);
}

CurveOnGrid::CurveOnGrid(const ReferenceCurve& phi, int lvl)
    : level(lvl),
      steps(std::size_t{1} << lvl),
      h(std::ldexp(1.0, -lvl)),
      energy(phi.energy()),
      accel_sup(phi.accel_sup()),
      zero(phi.is_zero()) {
  const HorizontalCurve& c = phi.curve();
  const TimeGrid grid = TimeGrid::dyadic(lvl);
  value = c.values(grid);
  planar.resize(steps + 1);
  rate.resize(steps + 1);
  accel.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    planar[i] = value[i].planar();
    const TangentVector v = c.velocity(grid[i]);
    rate[i] = {v.v1, v.v2};
    accel[i] = c.planar_accel(grid[i]);
  }
  for (const auto& j : phi.jumps()) {
    const auto node = static_cast<std::size_t>(std::ceil(j.t * static_cast<double>(steps) - 1e-9));
    jumps.emplace_back(std::min(node, steps), j.dv);
  }
}

StochasticIntegral stochastic_integral(const CurveOnGrid& phi, std::span<const Vec2> b) {
  if (b.size() != phi.steps + 1) throw GridMismatch("stochastic_integral: path does not match the curve grid");
  CompensatedSum lp, ibp;
  for (std::size_t k = 0; k < phi.steps; ++k) {
    lp.add(dot(phi.rate[k], b[k + 1] - b[k]));
    ibp.add(-dot(phi.accel[k], b[k]) * phi.h);
  }
  ibp.add(dot(phi.rate[phi.steps], b[phi.steps]));
  for (const auto& [node, dv] : phi.jumps) ibp.add(-dot(dv, b[node]));
  return {lp.value(), ibp.value()};
}

double exp_martingale(const CurveOnGrid& phi, std::span<const Vec2> b) {
  if (b.size() != phi.steps + 1) throw GridMismatch("exp_martingale: path does not match the curve grid");
  if (phi.zero) return 1.0;
  const StochasticIntegral s = stochastic_integral(phi, b);
  const double tol = 10.0 * phi.h * (1.0 + phi.accel_sup);
  if (!(std::abs(s.left_point - s.by_parts) <= tol))
    throw GirsanovConsistencyError("exp_martingale: left-point and by-parts integrals disagree");
  return std::exp(-s.left_point - 0.5 * phi.energy);
}

double exp_martingale(const ReferenceCurve& phi, const TimeGrid& grid, std::span<const Vec2> b) {
  return exp_martingale(CurveOnGrid(phi, dyadic_level(grid)), b);
}

bool tube_indicator(const CurveOnGrid& phi, std::span<const Vec2> b, double delta) {
  if (b.size() != phi.steps + 1) throw GridMismatch("tube_indicator: path does not match the curve grid");
  const double d2 = delta * delta;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!(norm_sq(b[i] - phi.planar[i]) < d2)) return false;
  return true;
}

bool tube_indicator(const ReferenceCurve& phi, const TimeGrid& grid, std::span<const Vec2> b, double delta) {
  return tube_indicator(CurveOnGrid(phi, dyadic_level(grid)), b, delta);
}

InsufficientAcceptance::InsufficientAcceptance(std::size_t a, std::size_t t)
    : std::runtime_error("insufficient acceptance: " + std::to_string(a) + " tube hits in " + std::to_string(t) +
                         " trials"),
      accepted(a),
      total(t) {}

DegenerateWeights::DegenerateWeights(double e, std::size_t a)
    : std::runtime_error("degenerate weights: effective sample size " + std::to_string(e) + " from " +
                         std::to_string(a) + " accepted paths"),
      ess(e),
      accepted(a) {}

bool out_of_regime(const ReferenceCurve& phi, double epsilon, double delta) {
  return epsilon * epsilon <= delta * phi.c_phi() + delta * delta;
}

namespace {

RngSpec stream(const SamplerConfig& cfg, std::size_t trial) { return {cfg.seed, cfg.stream_offset + trial}; }

// max_i |phi(t_i)^{-1} g(t_i)|^4 for the hypoelliptic path over b.
double distance4(const CurveOnGrid& phi, std::span<const Vec2> b) {
  double a = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i > 0) a += 0.5 * omega(b[i - 1], b[i] - b[i - 1]);
    worst = std::max(worst, homogeneous_norm4(quotient(phi.value[i], GroupElement::from(b[i], a))));
  }
  return worst;
}

constexpr std::uint8_t kAccepted = 1;
constexpr std::uint8_t kExceeds = 2;

void tube_flags(const CurveOnGrid& phi, double epsilon, double delta, std::size_t begin, std::size_t end,
                const SamplerConfig& cfg, std::vector<std::uint8_t>& flags) {
  const double d2 = delta * delta;
  const double e4 = epsilon * epsilon * epsilon * epsilon;
  flags.resize(end);
  for_each_trial(begin, end, cfg.exec, [&](std::size_t trial) {
    std::vector<Vec2> b(phi.steps + 1);
    const bool in = sample_dyadic_bm(phi.level, stream(cfg, trial), b,
                                     [&](std::size_t i, Vec2 v) { return !(norm_sq(v - phi.planar[i]) < d2); });
    std::uint8_t f = 0;
    if (in) {
      f = kAccepted;
      if (distance4(phi, b) > e4) f |= kExceeds;
    }
    flags[trial] = f;
  });
}

TubeEstimate summarise(const ReferenceCurve& phi, double epsilon, double delta,
                       const std::vector<std::uint8_t>& flags, const SamplerConfig& cfg) {
  TubeEstimate est;
  est.delta = delta;
  est.epsilon = epsilon;
  est.total = flags.size();
  est.seed = cfg.seed;
  est.out_of_regime = out_of_regime(phi, epsilon, delta);
  std::size_t exceed = 0;
  for (std::uint8_t f : flags) {
    if (f & kAccepted) ++est.accepted;
    if (f & kExceeds) ++exceed;
  }
  if (est.accepted > 0) {
    const MeanEstimate p = proportion_estimate(exceed, est.accepted);
    est.p_hat = p.mean;
    est.std_error = p.std_error;
  }
  return est;
}

void check_trials(std::size_t trials, double delta) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (!(delta >= 0.0)) throw std::invalid_argument("tube radius must be nonnegative");
}

}  // namespace

TubeEstimate conditional_distance_estimate(const ReferenceCurve& phi, double epsilon, double delta,
                                           std::size_t trials, const SamplerConfig& cfg) {
  check_trials(trials, delta);
  if (!(epsilon > 0.0)) throw std::invalid_argument("conditional_distance_estimate: epsilon must be positive");
  const CurveOnGrid grid(phi, cfg.fine_level);
  std::vector<std::uint8_t> flags;
  tube_flags(grid, epsilon, delta, 0, trials, cfg, flags);
  TubeEstimate est = summarise(phi, epsilon, delta, flags, cfg);
  if (est.accepted == 0) throw InsufficientAcceptance(0, trials);
  return est;
}

TubeEstimate conditional_distance_adaptive(const ReferenceCurve& phi, double epsilon, double delta,
                                           std::size_t initial, std::size_t max_trials,
                                           std::size_t min_accepted, const SamplerConfig& cfg) {
  check_trials(initial, delta);
  if (!(epsilon > 0.0)) throw std::invalid_argument("conditional_distance_adaptive: epsilon must be positive");
  max_trials = std::max(max_trials, initial);
  const CurveOnGrid grid(phi, cfg.fine_level);
  std::vector<std::uint8_t> flags;
  std::size_t done = 0;
  std::size_t target = initial;
  for (;;) {
    tube_flags(grid, epsilon, delta, done, target, cfg, flags);
    done = target;
    const std::size_t accepted =
        static_cast<std::size_t>(std::count_if(flags.begin(), flags.end(), [](auto f) { return f & kAccepted; }));
    if (accepted >= min_accepted || done >= max_trials) break;
    target = std::min(max_trials, 2 * done);
  }
  return summarise(phi, epsilon, delta, flags, cfg);
}

MeanEstimate tube_probability(const ReferenceCurve& phi, double delta, std::size_t trials,
                              const SamplerConfig& cfg) {
  check_trials(trials, delta);
  const CurveOnGrid grid(phi, cfg.fine_level);
  std::vector<std::uint8_t> flags;
  tube_flags(grid, std::numeric_limits<double>::infinity(), delta, 0, trials, cfg, flags);
  const auto hits = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), kAccepted));
  return proportion_estimate(hits, trials);
}

MeanEstimate martingale_mean(const ReferenceCurve& phi, std::size_t trials, const SamplerConfig& cfg) {
  if (trials == 0) throw std::invalid_argument("martingale_mean: trials must be positive");
  const CurveOnGrid grid(phi, cfg.fine_level);
  std::vector<double> w(trials);
  for_each_trial(trials, cfg.exec, [&](std::size_t trial) {
    std::vector<Vec2> b(grid.steps + 1);
    sample_dyadic_bm(grid.level, stream(cfg, trial), b);
    w[trial] = exp_martingale(grid, b);
  });
  return mean_estimate(w);
}

ShiftEstimate girsanov_shift_sampler(const ReferenceCurve& phi, double delta, double epsilon,
                                     std::size_t trials, const SamplerConfig& cfg) {
  check_trials(trials, delta);
  const CurveOnGrid grid(phi, cfg.fine_level);
  const double d2 = delta * delta;
  const double e4 = epsilon * epsilon * epsilon * epsilon;
  std::vector<double> w(trials, 0.0);
  std::vector<std::uint8_t> exceeds(trials, 0);
  for_each_trial(trials, cfg.exec, [&](std::size_t trial) {
    std::vector<Vec2> b(grid.steps + 1);
    if (!sample_dyadic_bm(grid.level, stream(cfg, trial), b, [&](std::size_t, Vec2 v) { return !(norm_sq(v) < d2); }))
      return;
    w[trial] = exp_martingale(grid, b);
    for (std::size_t i = 0; i <= grid.steps; ++i) b[i] = b[i] + grid.planar[i];
    exceeds[trial] = distance4(grid, b) > e4;
  });

  ShiftEstimate out;
  out.delta = delta;
  out.epsilon = epsilon;
  out.total = trials;
  out.tube_probability = mean_estimate(w);
  CompensatedSum sw, sw2, swy;
  for (std::size_t i = 0; i < trials; ++i) {
    if (w[i] == 0.0) continue;
    ++out.accepted;
    sw.add(w[i]);
    sw2.add(w[i] * w[i]);
    if (exceeds[i]) swy.add(w[i]);
  }
  out.ess = sw2.value() > 0.0 ? sw.value() * sw.value() / sw2.value() : 0.0;
  if (out.ess < 10.0) throw DegenerateWeights(out.ess, out.accepted);
  out.conditional = swy.value() / sw.value();
  CompensatedSum var;
  for (std::size_t i = 0; i < trials; ++i) {
    if (w[i] == 0.0) continue;
    const double r = (exceeds[i] ? 1.0 : 0.0) - out.conditional;
    var.add(w[i] * w[i] * r * r);
  }
  out.conditional_std_error = std::sqrt(var.value()) / sw.value();
  return out;
}

std::vector<RatioRow> girsanov_ratio_experiment(const ReferenceCurve& phi, const std::vector<double>& deltas,
                                                std::size_t trials, const SamplerConfig& cfg) {
  if (deltas.empty()) throw std::invalid_argument("girsanov_ratio_experiment: no delta levels");
  check_trials(trials, *std::min_element(deltas.begin(), deltas.end()));
  const CurveOnGrid grid(phi, cfg.fine_level);
  const double dmax = *std::max_element(deltas.begin(), deltas.end());
  const double dmax2 = dmax * dmax;
  std::vector<double> sup2(trials, std::numeric_limits<double>::infinity());
  std::vector<double> w(trials, 0.0);
  for_each_trial(trials, cfg.exec, [&](std::size_t trial) {
    std::vector<Vec2> b(grid.steps + 1);
    double s = 0.0;
    const bool in = sample_dyadic_bm(grid.level, stream(cfg, trial), b, [&](std::size_t, Vec2 v) {
      const double r = norm_sq(v);
      s = std::max(s, r);
      return !(r < dmax2);
    });
    if (!in) return;
    sup2[trial] = s;
    w[trial] = exp_martingale(grid, b);
  });

  const double target = std::exp(-0.5 * phi.energy());
  std::vector<RatioRow> rows;
  std::vector<double> kept;
  for (double d : deltas) {
    kept.clear();
    for (std::size_t i = 0; i < trials; ++i)
      if (sup2[i] < d * d) kept.push_back(w[i]);
    RatioRow r;
    r.delta = d;
    r.accepted = kept.size();
    r.total = trials;
    r.target = target;
    r.seed = cfg.seed;
    if (!kept.empty()) {
      const MeanEstimate m = mean_estimate(kept);
      r.estimate = m.mean;
      r.std_error = m.std_error;
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<TimeChangeRow> time_change_diagnostics(const std::vector<double>& times, std::size_t trials,
                                                   const SamplerConfig& cfg) {
  if (trials < 3) throw std::invalid_argument("time_change_diagnostics: need at least 3 trials");
  const std::size_t n = std::size_t{1} << cfg.fine_level;
  const double h = std::ldexp(1.0, -cfg.fine_level);
  std::vector<std::size_t> idx;
  for (double t : times) {
    const double r = t * static_cast<double>(n);
    const double k = std::round(r);
    if (!(t > 0.0 && t <= 1.0) || std::abs(r - k) > 1e-9)
      throw std::invalid_argument("time_change_diagnostics: t must be a positive grid node");
    idx.push_back(static_cast<std::size_t>(k));
  }
  const std::size_t nt = idx.size();
  std::vector<double> a(nt * trials), tau(nt * trials), b1(nt * trials), b2(nt * trials);
  for_each_trial(trials, cfg.exec, [&](std::size_t trial) {
    std::vector<Vec2> b(n + 1);
    sample_dyadic_bm(cfg.fine_level, stream(cfg, trial), b);
    std::vector<double> area(n + 1), tc(n + 1);
    levy_area(b, area);
    tc[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) tc[k + 1] = tc[k] + 0.25 * norm_sq(b[k]) * h;
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t s = j * trials + trial;
      a[s] = area[idx[j]];
      tau[s] = tc[idx[j]];
      b1[s] = b[idx[j]].x;
      b2[s] = b[idx[j]].y;
    }
  });
  std::vector<TimeChangeRow> rows;
  for (std::size_t j = 0; j < nt; ++j) {
    const auto sl = [&](const std::vector<double>& v) { return std::span<const double>(v).subspan(j * trials, trials); };
    rows.push_back({times[j], variance_estimate(sl(a)), mean_estimate(sl(tau)), correlation_estimate(sl(a), sl(b1)),
                    correlation_estimate(sl(a), sl(b2))});
  }
  return rows;
}

SupportEstimate support_positivity(const ReferenceCurve& phi, double epsilon, std::size_t trials,
                                   const SamplerConfig& cfg) {
  check_trials(trials, epsilon);
  const CurveOnGrid grid(phi, cfg.fine_level);
  const double e2 = epsilon * epsilon;
  const double e4 = e2 * e2;
  std::vector<std::uint8_t> hit(trials, 0);
  for_each_trial(trials, cfg.exec, [&](std::size_t trial) {
    std::vector<Vec2> b(grid.steps + 1);
    // |phi^{-1} g|^4 >= |B - phi|^4, so a planar excursion already decides a miss
    if (!sample_dyadic_bm(grid.level, stream(cfg, trial), b,
                          [&](std::size_t i, Vec2 v) { return !(norm_sq(v - grid.planar[i]) < e2); }))
      return;
    hit[trial] = distance4(grid, b) < e4;
  });
  SupportEstimate out;
  out.epsilon = epsilon;
  out.total = trials;
  out.seed = cfg.seed;
  out.hits = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), std::uint8_t{1}));
  out.p_hat = proportion_estimate(out.hits, trials);
  out.lower_bound = wilson_lower_bound(out.hits, trials, 2.3263478740408408);
  out.inconclusive = out.hits == 0;
  return out;
}

}  // namespace heis
