#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ctlab/feedmi.hpp"  // MeanSE

namespace ctlab {

enum class MaxMoment { Square, Fourth, ExpSquare };

// moments of Z_max = max of n i.i.d. N(0, 1/n)
struct MaxGaussQuery {
  int n = 1;
  MaxMoment moment = MaxMoment::Square;
  long trials = 0;  // Monte Carlo only

  void validate() const;  // ExpSquare needs n >= 3 for finiteness
};

// exact tail quadrature with analytic truncation
double zmax_exact(const MaxGaussQuery& query);

// Monte Carlo estimate (batch-means standard error)
MeanSE zmax_mc(const MaxGaussQuery& query, std::uint64_t seed, int workers = 1);

// the two closed-form tail bounds:
//   P(Z_max <= -sqrt(t)) <= (1/2)^n exp(-n^2 t / 2)
//   P(Z_max >= sqrt(t)) <= (n/2) exp(-n t / 2) / (1 - (1/2) exp(-n t / 2))
struct TailBounds {
  double lower_tail;
  double upper_tail;
};
TailBounds zmax_tail_bounds(int n, double t);

// exact tails from Phi, for bound-domination checks
double zmax_lower_tail_exact(int n, double t);  // P(Z_max <= -sqrt(t))
double zmax_upper_tail_exact(int n, double t);  // P(Z_max >= sqrt(t))

// least-squares fit of log(value) against log(n)
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
  int points_rejected = 0;  // nonpositive values
};
RateFit rate_fit(const std::vector<std::pair<double, double>>& points);

}  // namespace ctlab
