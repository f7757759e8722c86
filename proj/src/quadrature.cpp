#include "heis/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace heis {
namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;

constexpr int kMaxDepth = 40;

void refine(const std::function<double(double)>& f, double a, double b, double tol,
            int depth, QuadratureResult& acc) {
  double err = 0.0;
  const double v = Rule::integrate(f, a, b, 0, 0.0, &err);
  if (err <= tol || depth >= kMaxDepth) {
    if (err > tol) throw std::runtime_error("integrate: tolerance not reached");
    acc.value += v;
    acc.error += err;
    ++acc.panels;
    return;
  }
  const double mid = 0.5 * (a + b);
  refine(f, a, mid, 0.5 * tol, depth + 1, acc);
  refine(f, mid, b, 0.5 * tol, depth + 1, acc);
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, int initial_panels) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: abs_tol must be positive");
  if (initial_panels < 1) initial_panels = 1;
  QuadratureResult acc;
  if (a == b) return acc;
  const double width = (b - a) / initial_panels;
  const double share = abs_tol / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == initial_panels) ? b : a + (i + 1) * width;
    refine(f, lo, hi, share, 0, acc);
  }
  return acc;
}

}  // namespace heis
