#include "ctlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ctlab {

namespace {

GaussLegendre build_rule(int order) {
  GaussLegendre r;
  r.nodes.resize(order);
  r.weights.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n(x)
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[order - 1 - i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weights[order - 1 - i] = r.weights[i];
  }
  return r;
}

}  // namespace

const GaussLegendre& GaussLegendre::rule(int order) {
  static std::map<int, GaussLegendre> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

double GaussLegendre::integrate(const std::function<double(double)>& f,
                                double a, double b) const {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    acc += weights[i] * f(mid + half * nodes[i]);
  return acc * half;
}

double gl_composite(const std::function<double(double)>& f, double a, double b,
                    int panels, int order) {
  const auto& r = GaussLegendre::rule(order);
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p)
    acc += r.integrate(f, a + p * h, a + (p + 1) * h);
  return acc;
}

double gl_adaptive(const std::function<double(double)>& f, double a, double b,
                   double rel_tol, int order, int max_panels) {
  double prev = gl_composite(f, a, b, 1, order);
  for (int panels = 2; panels <= max_panels; panels *= 2) {
    const double cur = gl_composite(f, a, b, panels, order);
    const double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
    if (std::abs(cur - prev) <= rel_tol * scale) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace ctlab
