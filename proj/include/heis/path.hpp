// Discrete paths in the Heisenberg group: time grids, node-sampled paths,
// and the uniform path-space distance.
#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "heis/group.hpp"

namespace heis {

/// Strictly increasing times on [0, 1] with first node 0 and last node 1.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times);

  /// `steps` equal intervals; node i is exactly i / steps.
  static TimeGrid uniform(std::size_t steps);
  /// 2^level equal intervals.
  static TimeGrid dyadic(int level);

  std::size_t size() const { return times_.size(); }
  std::size_t intervals() const { return times_.size() - 1; }
  double operator[](std::size_t i) const { return times_[i]; }
  std::span<const double> times() const { return times_; }
  double front() const { return times_.front(); }
  double back() const { return times_.back(); }

  bool is_uniform(double tol = 1e-12) const;
  /// Step of a uniform grid; throws if the grid is not uniform.
  double step() const;

  /// Index of the interval [t_i, t_{i+1}) containing t. Right-sided at
  /// breakpoints; t = 1 maps to the last interval.
  std::size_t interval_of(double t) const;

  bool operator==(const TimeGrid& o) const { return times_ == o.times_; }

 private:
  std::vector<double> times_;
};

/// How values between nodes are to be read.
enum class Interpolation {
  piecewise_linear,  // linear in coordinates between nodes
  node_only,         // only the node values carry meaning (diffusion samples)
};

/// Path values at grid nodes. Paths start at the identity.
class SampledPath {
 public:
  SampledPath(TimeGrid grid, std::vector<GroupElement> values,
              Interpolation interp = Interpolation::piecewise_linear);

  const TimeGrid& grid() const { return grid_; }
  std::span<const GroupElement> values() const { return values_; }
  const GroupElement& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  Interpolation interpolation() const { return interp_; }

 private:
  TimeGrid grid_;
  std::vector<GroupElement> values_;
  Interpolation interp_;
};

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// max_i |p(t_i)^{-1} q(t_i)| over node values on a shared grid.
double path_distance(std::span<const GroupElement> p, std::span<const GroupElement> q);
double path_distance(const SampledPath& p, const SampledPath& q);

/// Maurer-Cartan form of a piecewise-linear path at t (right-sided):
/// (x'(t), z'(t) - omega(x(t), x'(t)) / 2).
AlgebraElement maurer_cartan(const SampledPath& p, double t);

/// sup over intervals of |z' - omega(x, x') / 2| for a piecewise-linear path.
/// On a coordinate-linear interval the defect is constant, so this is exact.
double horizontality_defect(const SampledPath& p);

/// CSV with header `t,x,y,z`, 17 significant digits.
void write_csv(std::ostream& out, const SampledPath& p);
SampledPath read_csv(std::istream& in, Interpolation interp = Interpolation::piecewise_linear);

}  // namespace heis
