#include "ctlab/extremes.hpp"

#include <cmath>
#include <stdexcept>

#include "ctlab/quadrature.hpp"
#include "ctlab/rng.hpp"

namespace ctlab {

namespace {

// standard normal upper tail Q(x) = P(N(0,1) >= x), via erfc
double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// P(Z_max <= -u) for u >= 0, with Z_i ~ N(0, 1/n)
double lower_tail_u(int n, double u) {
  return std::pow(normal_upper_tail(std::sqrt(static_cast<double>(n)) * u), n);
}

// P(Z_max >= u) = 1 - (1 - Q(sqrt(n) u))^n, computed without cancellation
double upper_tail_u(int n, double u) {
  const double q = normal_upper_tail(std::sqrt(static_cast<double>(n)) * u);
  if (q >= 1.0) return 1.0;
  return -std::expm1(n * std::log1p(-q));
}

// weight of the u-substituted moment integral
double moment_weight(MaxMoment m, double u) {
  switch (m) {
    case MaxMoment::Square: return 2.0 * u;
    case MaxMoment::Fourth: return 4.0 * u * u * u;
    case MaxMoment::ExpSquare: return 2.0 * u * std::exp(u * u);
  }
  return 0.0;
}

// truncation point: past u_max the closed-form tail bounds push the
// integrand below 1e-20, which is far under quadrature resolution
double truncation_point(const MaxGaussQuery& q) {
  double u = 1.0;
  for (int it = 0; it < 400; ++it) {
    const TailBounds b = zmax_tail_bounds(q.n, u * u);
    const double integrand = moment_weight(q.moment, u) * (b.lower_tail + b.upper_tail);
    if (integrand < 1e-20) return u;
    u += 0.25;
  }
  throw std::runtime_error("zmax_exact: tail truncation did not converge");
}

}  // namespace

void MaxGaussQuery::validate() const {
  if (n < 1) throw std::invalid_argument("MaxGaussQuery: n must be >= 1");
  if (moment == MaxMoment::ExpSquare && n < 3)
    throw std::invalid_argument("MaxGaussQuery: ExpSquare needs n >= 3 for finiteness");
}

double zmax_exact(const MaxGaussQuery& query) {
  query.validate();
  const int n = query.n;
  const double u_max = truncation_point(query);
  auto integrand = [&](double u) {
    return moment_weight(query.moment, u) * (lower_tail_u(n, u) + upper_tail_u(n, u));
  };
  const double integral = gl_adaptive(integrand, 0.0, u_max, 1e-12, 32, 1 << 14);
  if (!std::isfinite(integral))
    throw std::runtime_error("zmax_exact: quadrature did not converge");
  return query.moment == MaxMoment::ExpSquare ? 1.0 + integral : integral;
}

MeanSE zmax_mc(const MaxGaussQuery& query, std::uint64_t seed, int workers) {
  query.validate();
  if (query.trials < 1) throw std::invalid_argument("zmax_mc: trials must be >= 1");
  constexpr int kBatches = 100;
  const double scale = 1.0 / std::sqrt(static_cast<double>(query.n));
  std::vector<double> sums(kBatches, 0.0);
  std::vector<long> counts(kBatches, 0);
  const long base = query.trials / kBatches;
  const long extra = query.trials % kBatches;
  for (int b = 0; b < kBatches; ++b) {
    RngStream rng(seed, static_cast<std::uint64_t>(b));
    const long n_trials = base + (b < extra ? 1 : 0);
    for (long t = 0; t < n_trials; ++t) {
      double zmax = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < query.n; ++i) zmax = std::max(zmax, scale * rng.normal());
      double v = 0.0;
      switch (query.moment) {
        case MaxMoment::Square: v = zmax * zmax; break;
        case MaxMoment::Fourth: v = zmax * zmax * zmax * zmax; break;
        case MaxMoment::ExpSquare: v = std::exp(std::min(zmax * zmax, 700.0)); break;
      }
      sums[b] += v;
      ++counts[b];
    }
  }
  std::vector<double> means;
  for (int b = 0; b < kBatches; ++b)
    if (counts[b] > 0) means.push_back(sums[b] / counts[b]);
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= means.size();
  double var = 0.0;
  for (double m : means) var += (m - grand) * (m - grand);
  var = means.size() > 1 ? var / (means.size() - 1) : 0.0;
  return {grand, std::sqrt(var / means.size())};
}

TailBounds zmax_tail_bounds(int n, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("zmax_tail_bounds: t must be > 0");
  const double lower = std::pow(0.5, n) * std::exp(-0.5 * static_cast<double>(n) * n * t);
  const double e = 0.5 * std::exp(-0.5 * n * t);
  const double upper = n * e / (1.0 - e);
  return {lower, upper};
}

double zmax_lower_tail_exact(int n, double t) { return lower_tail_u(n, std::sqrt(t)); }

double zmax_upper_tail_exact(int n, double t) { return upper_tail_u(n, std::sqrt(t)); }

RateFit rate_fit(const std::vector<std::pair<double, double>>& points) {
  RateFit fit;
  std::vector<double> xs, ys;
  for (const auto& [n, v] : points) {
    if (!(v > 0.0) || !(n > 0.0)) {
      ++fit.points_rejected;
      continue;
    }
    xs.push_back(std::log(n));
    ys.push_back(std::log(v));
  }
  fit.points_used = static_cast<int>(xs.size());
  if (fit.points_used < 2) throw std::invalid_argument("rate_fit: need >= 2 positive points");
  const double nx = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= nx;
  my /= nx;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = (sxx > 0.0) ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace ctlab
