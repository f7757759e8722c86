// Reference curves, Girsanov weights, tube events and the conditional
// Monte-Carlo estimators built on them.
#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "heis/curve.hpp"
#include "heis/parallel.hpp"
#include "heis/stats.hpp"

namespace heis {

/// A horizontal curve phi from e with piecewise-C^2 planar part. The
/// constants used by the tube estimates are computed once.
class ReferenceCurve {
 public:
  explicit ReferenceCurve(HorizontalCurve curve, std::string spec = {});
  static ReferenceCurve zero();
  /// Lift of (a.x t, a.y t).
  static ReferenceCurve line(Vec2 a);

  const HorizontalCurve& curve() const { return curve_; }
  const std::string& spec() const { return spec_; }
  /// int_0^1 |phi_1'| + |phi_2'|.
  double c_phi() const { return c_phi_; }
  /// int_0^1 |phi'|^2.
  double energy() const { return energy_; }
  /// sup |phi''| sampled over every piece.
  double accel_sup() const { return accel_sup_; }
  bool is_zero() const { return energy_ == 0.0; }

  /// Jump phi'(t+) - phi'(t-) at an interior breakpoint.
  struct Jump {
    double t;
    Vec2 dv;
  };
  const std::vector<Jump>& jumps() const { return jumps_; }

 private:
  HorizontalCurve curve_;
  std::string spec_;
  double c_phi_ = 0.0;
  double energy_ = 0.0;
  double accel_sup_ = 0.0;
  std::vector<Jump> jumps_;
};

/// phi, phi', phi'' tabulated on the dyadic grid of 2^level steps.
struct CurveOnGrid {
  CurveOnGrid(const ReferenceCurve& phi, int level);

  int level;
  std::size_t steps;
  double h;
  std::vector<GroupElement> value;
  std::vector<Vec2> planar;
  std::vector<Vec2> rate;   // right-sided; rate[steps] is the left limit at 1
  std::vector<Vec2> accel;  // right-sided
  std::vector<std::pair<std::size_t, Vec2>> jumps;  // first node at or after the jump
  double energy;
  double accel_sup;
  bool zero;
};

/// The two discretisations of int <phi', dB>.
struct StochasticIntegral {
  double left_point = 0.0;  // sum phi'(t_k) . dB_k
  double by_parts = 0.0;    // phi'(1) B(1) - sum phi''(t_k) B_k h - sum jump . B
};
StochasticIntegral stochastic_integral(const CurveOnGrid& phi, std::span<const Vec2> b);

class GirsanovConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// exp(-sum phi'(t_k) . dB_k - energy / 2). Throws GirsanovConsistencyError
/// when the left-point and by-parts integrals differ by more than
/// 10 h (1 + sup |phi''|).
double exp_martingale(const CurveOnGrid& phi, std::span<const Vec2> b);
double exp_martingale(const ReferenceCurve& phi, const TimeGrid& grid, std::span<const Vec2> b);

/// max over nodes of |B(t_i) - phi(t_i)| < delta.
bool tube_indicator(const CurveOnGrid& phi, std::span<const Vec2> b, double delta);
bool tube_indicator(const ReferenceCurve& phi, const TimeGrid& grid, std::span<const Vec2> b, double delta);

// ---- estimators -------------------------------------------------------------

struct SamplerConfig {
  int fine_level = 10;
  std::uint64_t seed = 1;
  std::uint64_t stream_offset = 0;  // trial i uses stream stream_offset + i
  Exec exec = Exec::openmp;
};

struct TubeEstimate {
  double delta = 0.0;
  double epsilon = 0.0;
  double p_hat = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();
  std::size_t accepted = 0;
  std::size_t total = 0;
  std::uint64_t seed = 0;
  /// eps^2 <= delta C_phi + delta^2.
  bool out_of_regime = false;
};

class InsufficientAcceptance : public std::runtime_error {
 public:
  InsufficientAcceptance(std::size_t accepted, std::size_t total);
  std::size_t accepted;
  std::size_t total;
};

bool out_of_regime(const ReferenceCurve& phi, double epsilon, double delta);

/// Rejection estimate of P(d(g, phi) > eps | sup |B - phi| < delta).
/// Throws InsufficientAcceptance when nothing lands in the tube.
TubeEstimate conditional_distance_estimate(const ReferenceCurve& phi, double epsilon, double delta,
                                           std::size_t trials, const SamplerConfig& cfg);

/// As above, doubling the raw trial count from `initial` until
/// `min_accepted` tube hits or `max_trials`. Never throws on low
/// acceptance; p_hat is NaN when nothing was accepted.
TubeEstimate conditional_distance_adaptive(const ReferenceCurve& phi, double epsilon, double delta,
                                           std::size_t initial, std::size_t max_trials,
                                           std::size_t min_accepted, const SamplerConfig& cfg);

/// Rejection estimate of P(sup |B - phi| < delta).
MeanEstimate tube_probability(const ReferenceCurve& phi, double delta, std::size_t trials,
                              const SamplerConfig& cfg);

/// Unconditional E[exp_martingale] over `trials` paths.
MeanEstimate martingale_mean(const ReferenceCurve& phi, std::size_t trials, const SamplerConfig& cfg);

class DegenerateWeights : public std::runtime_error {
 public:
  DegenerateWeights(double ess, std::size_t accepted);
  double ess;
  std::size_t accepted;
};

struct ShiftEstimate {
  double delta = 0.0;
  double epsilon = 0.0;
  MeanEstimate tube_probability;  // mean of weight * 1{sup |W| < delta}
  double conditional = 0.0;       // weighted P(d(g, phi) > eps | tube)
  double conditional_std_error = 0.0;
  double ess = 0.0;
  std::size_t accepted = 0;
  std::size_t total = 0;
};

/// Importance sampler: draws centred W, uses B = W + phi and the weight
/// exp_martingale(phi, W). Throws DegenerateWeights when the effective
/// sample size of the accepted weights is below 10.
ShiftEstimate girsanov_shift_sampler(const ReferenceCurve& phi, double delta, double epsilon,
                                     std::size_t trials, const SamplerConfig& cfg);

/// One row of `delta,estimate,stderr,accepted,total,target,seed`.
struct RatioRow {
  double delta = 0.0;
  double estimate = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();
  std::size_t accepted = 0;
  std::size_t total = 0;
  double target = 0.0;
  std::uint64_t seed = 0;
};

/// E[exp_martingale(phi, B) | sup |B| < delta] per delta against the
/// target exp(-energy / 2). All levels share the same raw paths. Levels
/// with no accepted path keep a NaN estimate.
std::vector<RatioRow> girsanov_ratio_experiment(const ReferenceCurve& phi, const std::vector<double>& deltas,
                                                std::size_t trials, const SamplerConfig& cfg);

/// One row of the time-change table. corr_* are corr(A_t, B_i(t)).
struct TimeChangeRow {
  double t = 0.0;
  MeanEstimate var_a;
  MeanEstimate mean_tau;
  MeanEstimate corr_b1;
  MeanEstimate corr_b2;
};

/// tau(t) = 1/4 int_0^t |B|^2 by the left-point rule; every t must be a
/// grid node.
std::vector<TimeChangeRow> time_change_diagnostics(const std::vector<double>& times, std::size_t trials,
                                                   const SamplerConfig& cfg);

struct SupportEstimate {
  double epsilon = 0.0;
  MeanEstimate p_hat;
  double lower_bound = 0.0;  // one-sided 99% Wilson bound
  std::size_t hits = 0;
  std::size_t total = 0;
  std::uint64_t seed = 0;
  bool inconclusive = false;  // no hits at all
};

/// P(d(g, phi) < eps) with its 99% lower confidence bound.
SupportEstimate support_positivity(const ReferenceCurve& phi, double epsilon, std::size_t trials,
                                   const SamplerConfig& cfg);

}  // namespace heis
