// Order-fixed reductions and Monte-Carlo error bars.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace heis {

/// Neumaier-compensated running sum. Results depend only on the order of
/// additions, which callers keep fixed (trial index order).
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Sample mean with standard error s / sqrt(n).
MeanEstimate mean_estimate(std::span<const double> xs);

/// Sample variance with the delta-method standard error sqrt((m4 - s^4) / n).
MeanEstimate variance_estimate(std::span<const double> xs);

/// Pearson correlation; the error bar is the large-sample value
/// (1 - r^2) / sqrt(n - 1).
MeanEstimate correlation_estimate(std::span<const double> xs, std::span<const double> ys);

/// Binomial proportion with its standard error. Below `wilson_threshold`
/// trials the error is the half-width of the one-sigma Wilson interval,
/// which stays positive at p = 0 and p = 1.
MeanEstimate proportion_estimate(std::size_t hits, std::size_t n, std::size_t wilson_threshold = 100);

/// Lower end of the one-sided Wilson score interval at normal quantile z.
double wilson_lower_bound(std::size_t hits, std::size_t n, double z);

/// Standard error of a difference of independent estimates.
inline double combined_stderr(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace heis
