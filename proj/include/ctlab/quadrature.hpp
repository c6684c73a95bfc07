#pragma once

#include <functional>
#include <vector>

namespace ctlab {

// Gauss-Legendre rule on [-1, 1]; nodes/weights computed once per order
// by Newton iteration on the Legendre polynomial and cached.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  static const GaussLegendre& rule(int order);

  // integral over [a, b]
  double integrate(const std::function<double(double)>& f, double a,
                   double b) const;
};

// composite rule: [a, b] split into `panels` equal panels, `order` nodes each
double gl_composite(const std::function<double(double)>& f, double a, double b,
                    int panels, int order = 32);

// adaptive variant: panels doubled until successive values agree to rel_tol
double gl_adaptive(const std::function<double(double)>& f, double a, double b,
                   double rel_tol = 1e-13, int order = 32,
                   int max_panels = 4096);

}  // namespace ctlab
