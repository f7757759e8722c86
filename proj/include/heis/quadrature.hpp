// Adaptive Gauss-Kronrod integration with an absolute error target.
#pragma once

#include <functional>

namespace heis {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

/// Integrates f over [a, b] until the Kronrod error estimate is below
/// abs_tol. The interval is first cut into `initial_panels` equal pieces,
/// which is how callers resolve oscillatory integrands. Throws
/// std::runtime_error if the tolerance cannot be met.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-10, int initial_panels = 1);

}  // namespace heis
