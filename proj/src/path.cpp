#include "heis/path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace heis {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) throw std::invalid_argument("TimeGrid: need at least two nodes");
  if (times_.front() != 0.0) throw std::invalid_argument("TimeGrid: first node must be 0");
  if (times_.back() != 1.0) throw std::invalid_argument("TimeGrid: last node must be 1");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1]))
      throw std::invalid_argument("TimeGrid: nodes must be strictly increasing");
  }
}

TimeGrid TimeGrid::uniform(std::size_t steps) {
  if (steps == 0) throw std::invalid_argument("TimeGrid::uniform: steps must be positive");
  std::vector<double> t(steps + 1);
  const double n = static_cast<double>(steps);
  for (std::size_t i = 0; i <= steps; ++i) t[i] = static_cast<double>(i) / n;
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::dyadic(int level) {
  if (level < 0 || level > 30) throw std::invalid_argument("TimeGrid::dyadic: level out of range");
  return uniform(std::size_t{1} << level);
}

bool TimeGrid::is_uniform(double tol) const {
  const double h = 1.0 / static_cast<double>(intervals());
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (std::abs(times_[i] - static_cast<double>(i) * h) > tol) return false;
  }
  return true;
}

double TimeGrid::step() const {
  if (!is_uniform()) throw std::invalid_argument("TimeGrid::step: grid is not uniform");
  return 1.0 / static_cast<double>(intervals());
}

std::size_t TimeGrid::interval_of(double t) const {
  if (t <= times_.front()) return 0;
  if (t >= times_.back()) return intervals() - 1;
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

SampledPath::SampledPath(TimeGrid grid, std::vector<GroupElement> values, Interpolation interp)
    : grid_(std::move(grid)), values_(std::move(values)), interp_(interp) {
  if (values_.size() != grid_.size())
    throw GridMismatch("SampledPath: value count does not match grid");
  if (!(values_.front() == GroupElement::identity()))
    throw std::invalid_argument("SampledPath: paths must start at the identity");
}

double path_distance(std::span<const GroupElement> p, std::span<const GroupElement> q) {
  if (p.size() != q.size()) throw GridMismatch("path_distance: node counts differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    worst = std::max(worst, homogeneous_norm4(quotient(p[i], q[i])));
  return std::sqrt(std::sqrt(worst));
}

double path_distance(const SampledPath& p, const SampledPath& q) {
  if (!(p.grid() == q.grid())) throw GridMismatch("path_distance: grids differ");
  return path_distance(p.values(), q.values());
}

namespace {

void require_linear(const SampledPath& p, const char* what) {
  if (p.interpolation() != Interpolation::piecewise_linear)
    throw std::invalid_argument(std::string(what) + ": path has no piecewise-linear representation");
}

}  // namespace

AlgebraElement maurer_cartan(const SampledPath& p, double t) {
  require_linear(p, "maurer_cartan");
  const auto& g = p.grid();
  const std::size_t i = g.interval_of(t);
  const double dt = g[i + 1] - g[i];
  const GroupElement& a = p[i];
  const GroupElement& b = p[i + 1];
  const Vec2 rate{(b.x - a.x) / dt, (b.y - a.y) / dt};
  const double zrate = (b.z - a.z) / dt;
  // omega(x(t), x') is constant on the interval because omega(x', x') = 0.
  return {rate.x, rate.y, zrate - 0.5 * omega(a.planar(), rate)};
}

double horizontality_defect(const SampledPath& p) {
  require_linear(p, "horizontality_defect");
  const auto& g = p.grid();
  double worst = 0.0;
  for (std::size_t i = 0; i < g.intervals(); ++i) {
    const double dt = g[i + 1] - g[i];
    const GroupElement& a = p[i];
    const GroupElement& b = p[i + 1];
    const Vec2 dx = b.planar() - a.planar();
    worst = std::max(worst, std::abs((b.z - a.z) - 0.5 * omega(a.planar(), dx)) / dt);
  }
  return worst;
}

void write_csv(std::ostream& out, const SampledPath& p) {
  out << "t,x,y,z\n";
  char line[128];
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& v = p[i];
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", p.grid()[i], v.x, v.y, v.z);
    out << line;
  }
}

SampledPath read_csv(std::istream& in, Interpolation interp) {
  std::string line;
  if (!std::getline(in, line) || line != "t,x,y,z")
    throw std::runtime_error("read_csv: expected header 't,x,y,z'");
  std::vector<double> times;
  std::vector<GroupElement> values;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream fields(line);
    double v[4];
    char sep = 0;
    for (int k = 0; k < 4; ++k) {
      if (!(fields >> v[k]))
        throw std::runtime_error("read_csv: malformed number on row " + std::to_string(row));
      if (k < 3 && (!(fields >> sep) || sep != ','))
        throw std::runtime_error("read_csv: expected ',' on row " + std::to_string(row));
    }
    times.push_back(v[0]);
    values.push_back({v[1], v[2], v[3]});
  }
  return SampledPath(TimeGrid(std::move(times)), std::move(values), interp);
}

}  // namespace heis
