#include "heis/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace heis {

MeanEstimate mean_estimate(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return {};
  CompensatedSum s;
  for (double v : xs) s.add(v);
  const double mean = s.value() / static_cast<double>(n);
  if (n == 1) return {mean, 0.0, 1};
  CompensatedSum ss;
  for (double v : xs) ss.add((v - mean) * (v - mean));
  const double var = ss.value() / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

MeanEstimate variance_estimate(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) return {0.0, 0.0, n};
  CompensatedSum s;
  for (double v : xs) s.add(v);
  const double mean = s.value() / static_cast<double>(n);
  CompensatedSum m2, m4;
  for (double v : xs) {
    const double d2 = (v - mean) * (v - mean);
    m2.add(d2);
    m4.add(d2 * d2);
  }
  const double nn = static_cast<double>(n);
  const double var = m2.value() / (nn - 1.0);
  const double c2 = m2.value() / nn;
  const double c4 = m4.value() / nn;
  return {var, std::sqrt(std::max(0.0, c4 - c2 * c2) / nn), n};
}

MeanEstimate correlation_estimate(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("correlation_estimate: size mismatch");
  const std::size_t n = xs.size();
  if (n < 3) return {0.0, 0.0, n};
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < n; ++i) {
    sx.add(xs[i]);
    sy.add(ys[i]);
  }
  const double mx = sx.value() / static_cast<double>(n);
  const double my = sy.value() / static_cast<double>(n);
  CompensatedSum cxy, cxx, cyy;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    cxy.add(dx * dy);
    cxx.add(dx * dx);
    cyy.add(dy * dy);
  }
  const double denom = std::sqrt(cxx.value() * cyy.value());
  const double r = denom > 0.0 ? cxy.value() / denom : 0.0;
  return {r, (1.0 - r * r) / std::sqrt(static_cast<double>(n - 1)), n};
}

MeanEstimate proportion_estimate(std::size_t hits, std::size_t n, std::size_t wilson_threshold) {
  if (hits > n) throw std::invalid_argument("proportion_estimate: hits exceed trials");
  if (n == 0) return {};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  if (n >= wilson_threshold) return {p, std::sqrt(p * (1.0 - p) / nn), n};
  // one-sigma Wilson interval half-width
  const double half = std::sqrt(p * (1.0 - p) / nn + 1.0 / (4.0 * nn * nn)) / (1.0 + 1.0 / nn);
  return {p, half, n};
}

double wilson_lower_bound(std::size_t hits, std::size_t n, double z) {
  if (n == 0) return 0.0;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double centre = p + z2 / (2.0 * nn);
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return std::max(0.0, (centre - half) / (1.0 + z2 / nn));
}

}  // namespace heis
