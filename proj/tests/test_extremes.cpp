#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "ctlab/extremes.hpp"

using namespace ctlab;

namespace {

double phi_neg(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }  // P(N(0,1) <= -x)

}  // namespace

TEST_CASE("exact moments at pinned closed forms") {
  // n = 1: plain standard normal
  CHECK(zmax_exact({1, MaxMoment::Square, 0}) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(zmax_exact({1, MaxMoment::Fourth, 0}) == doctest::Approx(3.0).epsilon(1e-10));

  // n = 2, variance 1/2 each: E[max^2] = sigma^2 = 1/2, E[max^4] = 3 sigma^4 = 3/4
  CHECK(zmax_exact({2, MaxMoment::Square, 0}) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(zmax_exact({2, MaxMoment::Fourth, 0}) == doctest::Approx(0.75).epsilon(1e-10));

  // exp moment is > 1 and decreasing toward 1 as n grows
  const double e8 = zmax_exact({8, MaxMoment::ExpSquare, 0});
  const double e64 = zmax_exact({64, MaxMoment::ExpSquare, 0});
  CHECK(e8 > 1.0);
  CHECK(e64 > 1.0);
  CHECK(e64 < e8);
}

TEST_CASE("query validation") {
  CHECK_NOTHROW(MaxGaussQuery{3, MaxMoment::ExpSquare, 0}.validate());
  CHECK_THROWS(MaxGaussQuery{2, MaxMoment::ExpSquare, 0}.validate());
  CHECK_THROWS(MaxGaussQuery{0, MaxMoment::Square, 0}.validate());
}

TEST_CASE("Monte Carlo agrees with the exact quadrature") {
  for (int n : {1, 2, 16}) {
    for (auto mom : {MaxMoment::Square, MaxMoment::Fourth}) {
      MaxGaussQuery q{n, mom, 200000};
      const double exact = zmax_exact({n, mom, 0});
      auto mc = zmax_mc(q, 71);
      CHECK(std::abs(mc.mean - exact) <= 4.0 * mc.std_error);
      CHECK(mc.std_error > 0.0);
    }
  }
  // exp moment: moderate n keeps the integrand light-tailed enough for MC
  MaxGaussQuery q{16, MaxMoment::ExpSquare, 200000};
  auto mc = zmax_mc(q, 72);
  CHECK(std::abs(mc.mean - zmax_exact({16, MaxMoment::ExpSquare, 0})) <= 4.0 * mc.std_error);
}

TEST_CASE("tail bounds at pinned values and exact tails") {
  // n = 2, t = 1
  auto b = zmax_tail_bounds(2, 1.0);
  CHECK(b.lower_tail == doctest::Approx(0.25 * std::exp(-2.0)).epsilon(1e-14));
  const double q = 0.5 * std::exp(-1.0);
  CHECK(b.upper_tail == doctest::Approx(2.0 * q / (1.0 - q)).epsilon(1e-14));

  // exact tails: P(Z_max <= -sqrt(t)) = Phi(-sqrt(n t))^n,
  //              P(Z_max >= sqrt(t)) = 1 - (1 - Phi(-sqrt(n t)))^n
  const double lo = zmax_lower_tail_exact(2, 1.0);
  const double hi = zmax_upper_tail_exact(2, 1.0);
  const double p = phi_neg(std::sqrt(2.0));
  CHECK(lo == doctest::Approx(p * p).epsilon(1e-12));
  CHECK(hi == doctest::Approx(1.0 - (1.0 - p) * (1.0 - p)).epsilon(1e-12));
  CHECK(lo <= b.lower_tail);
  CHECK(hi <= b.upper_tail);
}

TEST_CASE("bounds dominate the exact tails on a grid") {
  for (int n : {1, 2, 4, 8, 32, 128, 1024}) {
    for (double t = 0.05; t <= 5.0; t += 0.05) {
      auto b = zmax_tail_bounds(n, t);
      CHECK(zmax_lower_tail_exact(n, t) <= b.lower_tail + 1e-15);
      CHECK(zmax_upper_tail_exact(n, t) <= b.upper_tail + 1e-15);
    }
  }
}

TEST_CASE("rate_fit recovers synthetic power laws") {
  std::vector<std::pair<double, double>> pts;
  for (int n = 16; n <= 16384; n *= 2) pts.push_back({double(n), 3.7 / n});
  auto f = rate_fit(pts);
  CHECK(f.slope == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(f.intercept == doctest::Approx(std::log(3.7)).epsilon(1e-10));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(f.points_used == static_cast<int>(pts.size()));
  CHECK(f.points_rejected == 0);

  std::vector<std::pair<double, double>> flat;
  for (int n = 2; n <= 64; n *= 2) flat.push_back({double(n), 2.0});
  CHECK(std::abs(rate_fit(flat).slope) < 1e-12);

  // nonpositive values are rejected, not log'd
  std::vector<std::pair<double, double>> mixed = {{2.0, 1.0}, {4.0, 0.5}, {8.0, -1.0}, {16.0, 0.125}};
  auto g = rate_fit(mixed);
  CHECK(g.points_rejected == 1);
  CHECK(g.points_used == 3);

  CHECK_THROWS(rate_fit({{2.0, -1.0}, {4.0, -1.0}}));
}

TEST_CASE("second moment follows the 2 log n / n law at large n") {
  // fitted slope of E[Z_max^2] vs n over n = 2^4 .. 2^14; the exact value is
  // -0.78684 (the log factor in 2 log n / n steepens slowly toward -1)
  std::vector<std::pair<double, double>> pts;
  for (int n = 16; n <= 16384; n *= 2)
    pts.push_back({double(n), zmax_exact({n, MaxMoment::Square, 0})});
  auto f = rate_fit(pts);
  CHECK(f.slope == doctest::Approx(-0.78684).epsilon(1e-3));
  CHECK(f.slope >= -1.0);
  CHECK(f.slope <= -0.75);
  // and the values themselves decrease
  for (size_t k = 1; k < pts.size(); ++k) CHECK(pts[k].second < pts[k - 1].second);
}
