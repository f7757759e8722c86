#include "heis/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "heis/brownian.hpp"
#include "heis/density.hpp"
#include "heis/wong_zakai.hpp"

namespace heis {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(std::uint64_t v) { return std::to_string(v); }

// short form for assertion names and details
std::string lbl(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string lbl(std::uint64_t v) { return std::to_string(v); }

template <class... T>
std::string row(const T&... xs) {
  std::string out;
  ((out += (out.empty() ? "" : ","), out += num(xs)), ...);
  return out + "\n";
}

std::vector<double> doubles(const json& a) { return a.get<std::vector<double>>(); }

int level_of(const json& f) {
  int e = 0;
  std::frexp(f["fine_step"].get<double>(), &e);
  return 1 - e;
}

SamplerConfig sampler(const json& f, std::uint64_t offset = 0) {
  SamplerConfig c;
  c.fine_level = level_of(f);
  c.seed = f["seed"].get<std::uint64_t>();
  c.stream_offset = offset;
  return c;
}

Assertion check(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok, false, std::move(detail)};
}

Assertion undecided(std::string name, std::string detail) { return {std::move(name), false, true, std::move(detail)}; }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---- per experiment ---------------------------------------------------------------

void run_simulate(const json& f, ExperimentResult& r) {
  const TimeGrid grid = TimeGrid::dyadic(level_of(f));
  const DiffusionSample s = hypoelliptic_bm(grid, {f["seed"].get<std::uint64_t>(), f["stream"].get<std::uint64_t>()});
  std::ostringstream os;
  write_csv(os, s.path());
  r.csv = os.str();
  bool ito = true;
  double a = 0.0;
  for (std::size_t k = 0; k + 1 < s.planar.size(); ++k) {
    a += 0.5 * omega(s.planar[k], s.planar[k + 1] - s.planar[k]);
    ito = ito && a == s.area[k + 1];
  }
  r.assertions.push_back(check("starts at identity", s.at(0) == GroupElement::identity()));
  r.assertions.push_back(check("area follows the left-point rule", ito));
}

void run_ws_converge(const json& f, ExperimentResult& r) {
  WsConvergenceConfig c;
  c.deltas = doubles(f["deltas"]);
  c.fine_level = level_of(f);
  c.trials = f["trials"].get<std::size_t>();
  c.seed = f["seed"].get<std::uint64_t>();
  if (f["interpolant"] == "smoothstep") c.interpolants = InterpolantPair::both(Interpolant::smoothstep());
  const auto rows = ws_convergence_experiment(c);
  r.csv = "delta,estimate,stderr,n_trials,fine_step,seed\n";
  for (const auto& x : rows) r.csv += row(x.delta, x.estimate, x.std_error, std::uint64_t{x.n_trials}, x.fine_step, x.seed);

  const double h = std::ldexp(1.0, -c.fine_level);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].delta == h) {
      r.assertions.push_back(check("delta = fine step gives zero", rows[i].estimate <= 1e-12, lbl(rows[i].estimate)));
      continue;
    }
    if (i + 1 < rows.size() && rows[i + 1].delta != h) {
      const double drop = rows[i].estimate - rows[i + 1].estimate;
      const double se = combined_stderr(rows[i].std_error, rows[i + 1].std_error);
      r.assertions.push_back(check("drop " + lbl(rows[i].delta) + " -> " + lbl(rows[i + 1].delta) + " exceeds 3 stderr",
                                   drop > 3.0 * se, fmt("drop %.6g, 3 stderr %.6g", drop, 3.0 * se)));
    }
  }
  std::vector<const ExperimentRow*> nz;
  for (const auto& x : rows)
    if (x.delta != h) nz.push_back(&x);
  if (nz.size() >= 2) {
    r.assertions.push_back(check("finest below half the coarsest", nz.back()->estimate < 0.5 * nz.front()->estimate,
                                 fmt("finest %.6g, coarsest %.6g", nz.back()->estimate, nz.front()->estimate)));
    // least-squares slope of log E[d^2] against log delta
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (const auto* x : nz) {
      if (!(x->estimate > 0.0)) continue;
      const double lx = std::log(x->delta), ly = std::log(x->estimate);
      sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly, ++m;
    }
    if (m >= 2) r.extra["empirical_rate"] = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
}

void run_energy_diverge(const json& f, ExperimentResult& r) {
  EnergyDivergenceConfig c;
  c.fine_levels.clear();
  for (double s : doubles(f["steps"])) c.fine_levels.push_back(dyadic_level(s));
  c.coarse_delta = f["coarse_delta"].get<double>();
  c.trials = f["trials"].get<std::size_t>();
  c.seed = f["seed"].get<std::uint64_t>();
  const auto rows = energy_divergence_experiment(c);
  r.csv = "delta,estimate,stderr,n_trials,fine_step,seed\n";
  for (const auto& x : rows) r.csv += row(x.delta, x.estimate, x.std_error, std::uint64_t{x.n_trials}, x.fine_step, x.seed);

  std::vector<const ExperimentRow*> fine, coarse;
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    fine.push_back(&rows[i]);
    coarse.push_back(&rows[i + 1]);
  }
  for (const auto* x : fine) {
    const double oracle = 2.0 / x->fine_step;
    r.assertions.push_back(check("discrete energy at h = " + lbl(x->fine_step) + " matches 2/h",
                                 std::abs(x->estimate - oracle) <= 3.0 * x->std_error,
                                 fmt("estimate %.8g, oracle %.8g, stderr %.3g", x->estimate, oracle, x->std_error)));
  }
  for (std::size_t i = 0; i + 1 < fine.size(); ++i) {
    const double q = fine[i + 1]->estimate / fine[i]->estimate;
    const double want = fine[i]->fine_step / fine[i + 1]->fine_step;
    const double se = q * std::hypot(fine[i]->std_error / fine[i]->estimate, fine[i + 1]->std_error / fine[i + 1]->estimate);
    r.assertions.push_back(check("energy ratio h = " + lbl(fine[i]->fine_step) + " vs " + lbl(fine[i + 1]->fine_step),
                                 std::abs(q - want) <= 3.0 * se, fmt("ratio %.6g, expected %.6g, stderr %.3g", q, want, se)));
  }
  double worst = 0.0;
  for (const auto* x : coarse) worst = std::max(worst, std::abs(x->estimate / coarse.front()->estimate - 1.0));
  r.assertions.push_back(check("energy of g_delta independent of h to 1%", worst <= 0.01, fmt("max relative change %.3g", worst)));
}

void run_tube(const json& f, ExperimentResult& r) {
  const ReferenceCurve phi = parse_reference_curve(f["phi"].get<std::string>());
  const SamplerConfig cfg = sampler(f);
  const double eps = f["epsilon"].get<double>();
  const auto init = f["trials"].get<std::size_t>();
  const auto max_n = f["max_trials"].get<std::size_t>();
  const auto min_acc = f["min_accepted"].get<std::size_t>();
  std::vector<TubeEstimate> est;
  for (double d : doubles(f["deltas"])) est.push_back(conditional_distance_adaptive(phi, eps, d, init, max_n, min_acc, cfg));

  r.csv = "delta,epsilon,p_hat,stderr,accepted,total,seed\n";
  json regime = json::array();
  for (const auto& e : est) {
    r.csv += row(e.delta, e.epsilon, e.p_hat, e.std_error, std::uint64_t{e.accepted}, std::uint64_t{e.total}, e.seed);
    regime.push_back({{"delta", e.delta}, {"out_of_regime", e.out_of_regime}});
  }
  r.extra["out_of_regime"] = regime;
  r.extra["c_phi"] = phi.c_phi();

  bool enough = true;
  for (const auto& e : est) {
    const std::string n = "delta " + lbl(e.delta) + " has at least " + lbl(std::uint64_t{min_acc}) + " accepted";
    if (e.accepted >= min_acc)
      r.assertions.push_back(check(n, true, lbl(std::uint64_t{e.accepted})));
    else {
      enough = false;
      r.assertions.push_back(undecided(n, lbl(std::uint64_t{e.accepted}) + " accepted in " + lbl(std::uint64_t{e.total}) + " trials"));
    }
  }
  for (std::size_t i = 0; i + 1 < est.size(); ++i) {
    const std::string n = "p_hat non-increasing " + lbl(est[i].delta) + " -> " + lbl(est[i + 1].delta);
    if (std::isnan(est[i].p_hat) || std::isnan(est[i + 1].p_hat) || !enough) {
      r.assertions.push_back(undecided(n, "insufficient acceptance"));
      continue;
    }
    const double se = combined_stderr(est[i].std_error, est[i + 1].std_error);
    r.assertions.push_back(check(n, est[i + 1].p_hat <= est[i].p_hat + 2.0 * se,
                                 fmt("%.6g -> %.6g, 2 stderr %.3g", est[i].p_hat, est[i + 1].p_hat, 2.0 * se)));
  }
  const auto& a = est.front();
  const auto& b = est.back();
  const std::string n = "last level 3 stderr below the first";
  if (std::isnan(a.p_hat) || std::isnan(b.p_hat) || !enough) {
    r.assertions.push_back(undecided(n, "insufficient acceptance"));
  } else {
    const double se = combined_stderr(a.std_error, b.std_error);
    r.assertions.push_back(check(n, b.p_hat <= a.p_hat - 3.0 * se, fmt("%.6g vs %.6g, 3 stderr %.3g", a.p_hat, b.p_hat, 3.0 * se)));
  }
}

void run_girsanov_ratio(const json& f, ExperimentResult& r) {
  const ReferenceCurve phi = parse_reference_curve(f["phi"].get<std::string>());
  const auto trials = f["trials"].get<std::size_t>();
  const auto deltas = doubles(f["deltas"]);
  const auto rows = girsanov_ratio_experiment(phi, deltas, trials, sampler(f));
  r.csv = "delta,estimate,stderr,accepted,total,target,seed\n";
  for (const auto& x : rows)
    r.csv += row(x.delta, x.estimate, x.std_error, std::uint64_t{x.accepted}, std::uint64_t{x.total}, x.target, x.seed);

  // independent streams for the cross-checks
  const MeanEstimate m = martingale_mean(phi, f["martingale_trials"].get<std::size_t>(), sampler(f, 1ull << 41));
  r.assertions.push_back(check("E[weight] = 1", std::abs(m.mean - 1.0) <= 3.0 * m.std_error,
                               fmt("mean %.6g, stderr %.3g", m.mean, m.std_error)));
  json agree = json::array();
  for (double d : deltas) {
    const MeanEstimate rej = tube_probability(phi, d, trials, sampler(f, 1ull << 40));
    const std::string n = "shift and rejection agree at delta " + lbl(d);
    json rec = {{"delta", d}, {"rejection", rej.mean}, {"rejection_stderr", rej.std_error}};
    try {
      const ShiftEstimate s =
          girsanov_shift_sampler(phi, d, std::numeric_limits<double>::infinity(), trials, sampler(f, 3ull << 40));
      const double se = combined_stderr(rej.std_error, s.tube_probability.std_error);
      rec["shift"] = s.tube_probability.mean;
      rec["shift_stderr"] = s.tube_probability.std_error;
      rec["ess"] = s.ess;
      if (rej.mean == 0.0)
        r.assertions.push_back(undecided(n, "no rejection hits"));
      else
        r.assertions.push_back(check(n, std::abs(rej.mean - s.tube_probability.mean) <= 3.0 * se,
                                     fmt("rejection %.6g, shift %.6g, 3 stderr %.3g", rej.mean, s.tube_probability.mean, 3.0 * se)));
    } catch (const DegenerateWeights& e) {
      rec["ess"] = e.ess;
      r.assertions.push_back(undecided(n, e.what()));
    }
    agree.push_back(rec);
  }
  r.extra["tube_probability"] = agree;
  r.extra["martingale_mean"] = {{"mean", m.mean}, {"stderr", m.std_error}};

  const double target = rows.front().target;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const auto& a = rows[i];
    const auto& b = rows[i + 1];
    const std::string n = "moves toward target " + lbl(a.delta) + " -> " + lbl(b.delta);
    if (std::isnan(a.estimate) || std::isnan(b.estimate) || a.accepted < 2 || b.accepted < 2) {
      r.assertions.push_back(undecided(n, lbl(std::uint64_t{b.accepted}) + " accepted at delta " + lbl(b.delta)));
      continue;
    }
    const double se = combined_stderr(a.std_error, b.std_error);
    const double toward = (a.estimate - b.estimate) * (a.estimate >= target ? 1.0 : -1.0);
    r.assertions.push_back(check(n, toward >= -2.0 * se, fmt("%.6g -> %.6g, 2 stderr %.3g", a.estimate, b.estimate, 2.0 * se)));
  }
  const auto& last = rows.back();
  const std::string n = "final level within 3 stderr + 0.02 of target";
  if (std::isnan(last.estimate) || last.accepted < 2)
    r.assertions.push_back(undecided(n, lbl(std::uint64_t{last.accepted}) + " accepted at delta " + lbl(last.delta)));
  else
    r.assertions.push_back(check(n, std::abs(last.estimate - target) <= 3.0 * last.std_error + 0.02,
                                 fmt("estimate %.6g, target %.6g, stderr %.3g", last.estimate, target, last.std_error)));
}

void run_dds(const json& f, ExperimentResult& r) {
  const auto rows = time_change_diagnostics(doubles(f["times"]), f["trials"].get<std::size_t>(), sampler(f));
  r.csv = "t,var_A,mean_tau,corr_A_B1,corr_A_B2,stderr_var_A,stderr_mean_tau,stderr_corr_A_B1,stderr_corr_A_B2\n";
  for (const auto& x : rows)
    r.csv += row(x.t, x.var_a.mean, x.mean_tau.mean, x.corr_b1.mean, x.corr_b2.mean, x.var_a.std_error,
                 x.mean_tau.std_error, x.corr_b1.std_error, x.corr_b2.std_error);
  for (const auto& x : rows) {
    const std::string t = lbl(x.t);
    const double oracle = 0.25 * x.t * x.t;
    r.assertions.push_back(check("E[tau(" + t + ")] = t^2/4", std::abs(x.mean_tau.mean - oracle) <= 3.0 * x.mean_tau.std_error,
                                 fmt("%.6g vs %.6g, stderr %.3g", x.mean_tau.mean, oracle, x.mean_tau.std_error)));
    const double se = combined_stderr(x.var_a.std_error, x.mean_tau.std_error);
    r.assertions.push_back(check("Var(A_" + t + ") = E[tau(" + t + ")]", std::abs(x.var_a.mean - x.mean_tau.mean) <= 3.0 * se,
                                 fmt("%.6g vs %.6g, combined stderr %.3g", x.var_a.mean, x.mean_tau.mean, se)));
    if (x.t == 1.0) {
      r.assertions.push_back(check("corr(A_1, B_1(1)) = 0", std::abs(x.corr_b1.mean) < 3.0 * x.corr_b1.std_error,
                                   fmt("%.4g, stderr %.3g", x.corr_b1.mean, x.corr_b1.std_error)));
      r.assertions.push_back(check("corr(A_1, B_2(1)) = 0", std::abs(x.corr_b2.mean) < 3.0 * x.corr_b2.std_error,
                                   fmt("%.4g, stderr %.3g", x.corr_b2.mean, x.corr_b2.std_error)));
    }
  }
}

void run_helix(const json& f, ExperimentResult& r) {
  const auto t = doubles(f["target"]);
  HelixSpec base{t[0], t[1], t[2], 1, parse_helix_variant(f["variant"].get<std::string>())};
  std::vector<int> ns;
  for (const auto& n : f["n"]) ns.push_back(static_cast<int>(n.get<std::uint64_t>()));
  const auto rows = helix_table(base, ns);
  r.csv = "n,distance,distance_refined,bound_constant\n";
  for (const auto& x : rows) r.csv += row(std::uint64_t(x.n), x.distance, x.distance_refined, x.bound_constant);

  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    r.assertions.push_back(check("distance decreases n = " + lbl(std::uint64_t(rows[i].n)) + " -> " + lbl(std::uint64_t(rows[i + 1].n)),
                                 rows[i + 1].distance_refined < rows[i].distance_refined,
                                 fmt("%.6g -> %.6g", rows[i].distance_refined, rows[i + 1].distance_refined)));
  double c = 0.0, c_coarse = 0.0;
  for (const auto& x : rows) {
    c = std::max(c, x.bound_constant);
    c_coarse = std::max(c_coarse, x.n * x.distance);
  }
  r.extra["fitted_C"] = c;
  r.extra["fitted_C_coarse_grid"] = c_coarse;
  r.extra["variant"] = to_string(base.variant);
  r.assertions.push_back(check("fitted C stable to 10% under grid refinement", std::abs(c_coarse - c) <= 0.1 * c,
                               fmt("C %.6g, coarse-grid C %.6g", c, c_coarse)));
  if (base.variant == HelixVariant::identity_anchored && t[0] == 0.0 && t[1] == 0.0 && t[2] == 1.0)
    r.assertions.push_back(check("vertical helix distance below 5/n", c <= 5.0, fmt("C = %.6g", c)));

  if (t[2] != 0.0) {
    // offset-start helix: the quotient against the line has a closed form
    double worst = 0.0;
    for (int n : ns) {
      const HorizontalCurve phi = helix_linear({t[0], t[1], t[2], n, HelixVariant::offset_start});
      const double k = static_cast<double>(n) * n * t[2];
      for (int j = 0; j <= 1000; ++j) {
        const double s = j / 1000.0;
        const GroupElement q = quotient(phi.at(s), GroupElement{t[0] * s, t[1] * s, t[2] * s});
        const GroupElement want{-(2.0 / n) * std::cos(k * s), -std::sin(k * s) / n,
                                (t[0] * (1.0 - std::cos(k * s)) / k - 2.0 * t[1] * std::sin(k * s) / k) / n};
        worst = std::max({worst, std::abs(q.x - want.x), std::abs(q.y - want.y), std::abs(q.z - want.z)});
      }
    }
    r.extra["offset_quotient_max_error"] = worst;
    r.assertions.push_back(check("offset-start quotient reproduced to 1e-10", worst <= 1e-10, fmt("max error %.3g", worst)));
  }
}

void run_support(const json& f, ExperimentResult& r) {
  const ReferenceCurve phi = parse_reference_curve(f["phi"].get<std::string>());
  r.csv = "epsilon,p_hat,stderr,lower_bound_99,hits,total,seed\n";
  for (double eps : doubles(f["epsilon"])) {
    const SupportEstimate s = support_positivity(phi, eps, f["trials"].get<std::size_t>(), sampler(f));
    r.csv += row(s.epsilon, s.p_hat.mean, s.p_hat.std_error, s.lower_bound, std::uint64_t{s.hits}, std::uint64_t{s.total}, s.seed);
    const std::string n = "99% lower bound positive at epsilon " + lbl(eps);
    if (s.inconclusive)
      r.assertions.push_back(undecided(n, "no hits in " + lbl(std::uint64_t{s.total}) + " trials"));
    else
      r.assertions.push_back(check(n, s.lower_bound > 0.0, fmt("p_hat %.6g, lower bound %.6g", s.p_hat.mean, s.lower_bound)));
  }
}

void run_levy_law(const json& f, ExperimentResult& r) {
  LevyLawConfig c;
  c.lambdas = doubles(f["lambdas"]);
  c.fine_level = level_of(f);
  c.trials = f["trials"].get<std::size_t>();
  c.seed = f["seed"].get<std::uint64_t>();
  const auto rows = levy_law_experiment(c);
  r.csv = "statistic,lambda,estimate,stderr,oracle,n_trials,fine_step,seed\n";
  for (const auto& x : rows) {
    r.csv += x.statistic + "," + row(x.lambda, x.estimate.mean, x.estimate.std_error, x.oracle,
                                     std::uint64_t{x.estimate.n}, x.fine_step, x.seed);
    const bool var = x.statistic == "var_A";
    const double tol = 3.0 * x.estimate.std_error + (var ? 0.0 : 0.002);
    r.assertions.push_back(check(var ? "Var(A_1) = 1/4" : "E[cos(" + lbl(x.lambda) + " A_1)] = 1/cosh(lambda/2)",
                                 std::abs(x.estimate.mean - x.oracle) <= tol,
                                 fmt("estimate %.6g, oracle %.6g, tolerance %.3g", x.estimate.mean, x.oracle, tol)));
  }
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    default:
      return "inconclusive";
  }
}

int exit_code(Status s) { return s == Status::pass ? 0 : s == Status::fail ? 1 : 2; }

json ExperimentResult::summary() const {
  json a = json::array();
  for (const auto& x : assertions)
    a.push_back({{"name", x.name},
                 {"pass", x.passed},
                 {"status", x.passed ? "pass" : x.inconclusive ? "inconclusive" : "fail"},
                 {"detail", x.detail}});
  return {{"config", config.to_json()}, {"hash", config.hash()}, {"assertions", a},
          {"pass", status == Status::pass}, {"status", to_string(status)}, {"wall_clock", wall_clock},
          {"extra", extra}};
}

ExperimentResult run(const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  if (config.threads > 0) set_threads(config.threads);
  ExperimentResult r;
  r.config = config;
  const json& f = config.fields;
  switch (config.experiment) {
    case Experiment::simulate:
      run_simulate(f, r);
      break;
    case Experiment::ws_converge:
      run_ws_converge(f, r);
      break;
    case Experiment::energy_diverge:
      run_energy_diverge(f, r);
      break;
    case Experiment::tube:
      run_tube(f, r);
      break;
    case Experiment::girsanov_ratio:
      run_girsanov_ratio(f, r);
      break;
    case Experiment::dds_diagnostics:
      run_dds(f, r);
      break;
    case Experiment::helix:
      run_helix(f, r);
      break;
    case Experiment::support:
      run_support(f, r);
      break;
    case Experiment::levy_law:
      run_levy_law(f, r);
      break;
  }
  bool failed = false, open = false;
  for (const auto& a : r.assertions) {
    if (a.passed) continue;
    (a.inconclusive ? open : failed) = true;
  }
  r.status = failed ? Status::fail : open ? Status::inconclusive : Status::pass;
  r.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

void write_outputs(const ExperimentResult& result) {
  const auto& dir = result.config.out_dir;
  std::filesystem::create_directories(dir);
  const std::string stem = to_string(result.config.experiment);
  {
    std::ofstream csv(dir / (stem + ".csv"), std::ios::binary);
    csv << result.csv;
    if (!csv) throw std::runtime_error("cannot write " + (dir / (stem + ".csv")).string());
  }
  std::ofstream js(dir / (stem + ".summary.json"), std::ios::binary);
  js << result.summary().dump(2) << "\n";
  if (!js) throw std::runtime_error("cannot write " + (dir / (stem + ".summary.json")).string());
}

}  // namespace heis
