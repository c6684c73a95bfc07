#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ctlab {

// Evenly spaced sampling times t_i = i * T/n over [0, T].
struct SampleGrid {
  double T = 1.0;
  int n = 1;

  SampleGrid() = default;
  SampleGrid(double horizon, int intervals) : T(horizon), n(intervals) {
    if (!(T > 0.0) || n < 1) throw std::invalid_argument("SampleGrid: need T > 0 and n >= 1");
  }

  double dt() const { return T / n; }
  double time(int i) const { return T * i / n; }
  int points() const { return n + 1; }

  bool operator==(const SampleGrid& o) const { return T == o.T && n == o.n; }
};

// A realized path on a grid, read piecewise-linearly between grid times.
struct PathRecord {
  SampleGrid grid;
  std::vector<double> values;  // length grid.n + 1

  PathRecord() = default;
  PathRecord(SampleGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.points())
      throw std::invalid_argument("PathRecord: values length must be n + 1");
  }

  static PathRecord zeros(SampleGrid g) {
    return PathRecord(g, std::vector<double>(g.points(), 0.0));
  }

  // piecewise-linear value at time s, clamped to [0, T]
  double at(double s) const {
    if (s <= 0.0) return values.front();
    if (s >= grid.T) return values.back();
    const double x = s / grid.dt();
    const int i = std::min(static_cast<int>(x), grid.n - 1);
    const double w = x - i;
    return values[i] * (1.0 - w) + values[i + 1] * w;
  }

  // sup_{0 <= r <= s} |path(r)|; the sup of a piecewise-linear function is
  // attained at a node or at s itself
  double sup_abs(double s) const {
    const double send = std::min(s, grid.T);
    const int k = static_cast<int>(std::floor(send / grid.dt() + 1e-12));
    double m = 0.0;
    for (int i = 0; i <= std::min(k, grid.n); ++i) m = std::max(m, std::abs(values[i]));
    return std::max(m, std::abs(at(send)));
  }
};

// Non-owning view of a path prefix on an evenly spaced grid, read
// piecewise-linearly. Drift callables receive this so the integrator can
// hand out prefixes without copying.
struct PathView {
  const double* values = nullptr;
  int count = 0;   // number of grid points in the prefix
  double dt = 0.0;

  PathView() = default;
  PathView(const double* v, int n_points, double spacing)
      : values(v), count(n_points), dt(spacing) {}
  // view of the whole path
  explicit PathView(const PathRecord& p)
      : values(p.values.data()), count(p.grid.points()), dt(p.grid.dt()) {}

  double end_time() const { return dt * (count - 1); }
  double back() const { return values[count - 1]; }

  double at(double s) const {
    if (count == 1 || s <= 0.0) return values[0];
    if (s >= end_time()) return back();
    const double x = s / dt;
    const int i = std::min(static_cast<int>(x), count - 2);
    const double w = x - i;
    return values[i] * (1.0 - w) + values[i + 1] * w;
  }

  double sup_abs() const {
    double m = 0.0;
    for (int i = 0; i < count; ++i) m = std::max(m, std::abs(values[i]));
    return m;
  }
};

}  // namespace ctlab
