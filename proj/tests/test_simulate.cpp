#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ctlab/rng.hpp"
#include "ctlab/simulate.hpp"

using namespace ctlab;

TEST_CASE("brownian increments have the right mean and variance") {
  SampleGrid grid(4.0, 2048);
  RngStream rng(1, 0);
  const int trials = 5000;
  double sum = 0.0, sum2 = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto b = brownian(grid, rng);
    CHECK(b.values.front() == 0.0);
    sum += b.values.back();
    sum2 += b.values.back() * b.values.back();
  }
  const double mean = sum / trials;
  const double var = sum2 / trials - mean * mean;
  // B(T) ~ N(0, T): SE of mean is sqrt(T/trials)
  CHECK(std::abs(mean) < 4.0 * std::sqrt(4.0 / trials));
  CHECK(var == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("transmit_nonfeedback integrates simple signals exactly") {
  SampleGrid grid(1.0, 1000);
  auto b = PathRecord::zeros(grid);

  // x == 0: Y = B = 0
  auto y0 = transmit_nonfeedback(PathRecord::zeros(grid), b);
  for (double v : y0.values) CHECK(v == 0.0);

  // x == 1: Y(t) = t (trapezoid is exact for constants)
  std::vector<double> ones(grid.points(), 1.0);
  auto y1 = transmit_nonfeedback(PathRecord(grid, ones), b);
  for (int i = 0; i < grid.points(); ++i)
    CHECK(std::abs(y1.values[i] - grid.time(i)) < 1e-12);

  // x(s) = s: Y(t) = t^2 / 2 (trapezoid exact for linear integrands)
  std::vector<double> lin(grid.points());
  for (int i = 0; i < grid.points(); ++i) lin[i] = grid.time(i);
  auto y2 = transmit_nonfeedback(PathRecord(grid, lin), b);
  for (int i = 0; i < grid.points(); ++i) {
    const double t = grid.time(i);
    CHECK(std::abs(y2.values[i] - 0.5 * t * t) < 1e-12);
  }

  // noise passes through additively
  RngStream rng(2, 0);
  auto bw = brownian(grid, rng);
  auto y3 = transmit_nonfeedback(PathRecord(grid, ones), bw);
  for (int i = 0; i < grid.points(); ++i)
    CHECK(std::abs(y3.values[i] - (grid.time(i) + bw.values[i])) < 1e-12);
}

TEST_CASE("linear feedback with zero noise solves the ODE y' = m - y") {
  // g = m - y, B == 0: y(t) = m (1 - e^{-t})
  auto drift = DriftSpec::linear_feedback(1.0, 1.0, {-1.0, 1.0}, {0.5, 0.5});
  SampleGrid grid(2.0, 2000);
  auto b = PathRecord::zeros(grid);
  for (double m : {-1.0, 1.0}) {
    auto y = transmit_feedback_with_noise(drift, m, b);
    double worst = 0.0;
    for (int i = 0; i < grid.points(); ++i) {
      const double t = grid.time(i);
      worst = std::max(worst, std::abs(y.values[i] - m * (1.0 - std::exp(-t))));
    }
    CHECK(worst <= 5e-3);  // first-order Euler at dt = 1e-3
  }
}

TEST_CASE("message-scaled drift: E[Y(T)] = theta m T") {
  auto drift = DriftSpec::message_scaled(1.0, nullptr, {1.0}, {1.0});
  SampleGrid grid(1.0, 256);
  RngStream rng(3, 0);
  const int trials = 20000;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto fp = transmit_feedback(drift, 1.0, grid, rng);
    sum += fp.y.values.back();
  }
  // Y(T) ~ N(T, T): mean within 4 SE
  CHECK(std::abs(sum / trials - 1.0) < 4.0 / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("Euler scheme is non-anticipating") {
  // tamper with the Brownian path after time s0 and check Y on [0, s0] is unchanged
  auto drift = DriftSpec::linear_feedback(0.7, 1.3, {-1.0, 1.0}, {0.5, 0.5});
  SampleGrid grid(1.0, 512);
  RngStream rng(4, 0);
  auto b1 = brownian(grid, rng);
  auto b2 = b1;
  const int i0 = 256;
  for (int i = i0 + 1; i < grid.points(); ++i) b2.values[i] += 5.0;
  auto y1 = transmit_feedback_with_noise(drift, 1.0, b1);
  auto y2 = transmit_feedback_with_noise(drift, 1.0, b2);
  for (int i = 0; i <= i0; ++i) CHECK(y1.values[i] == y2.values[i]);
  CHECK(y1.values[i0 + 1] != y2.values[i0 + 1]);
}

TEST_CASE("Euler scheme converges at order >= 1/2 under refinement") {
  auto drift = DriftSpec::linear_feedback(1.0, 1.0, {-1.0, 1.0}, {0.5, 0.5});
  SampleGrid fine(1.0, 4096);
  RngStream rng(5, 0);
  const int trials = 200;
  std::vector<int> coarse_n = {64, 128, 256, 512};
  std::vector<double> err(coarse_n.size(), 0.0);
  for (int t = 0; t < trials; ++t) {
    auto b = brownian(fine, rng);
    auto yref = transmit_feedback_with_noise(drift, 1.0, b);
    for (size_t k = 0; k < coarse_n.size(); ++k) {
      const int n = coarse_n[k];
      SampleGrid cg(1.0, n);
      std::vector<double> bv(cg.points());
      const int stride = fine.n / n;
      for (int i = 0; i <= n; ++i) bv[i] = b.values[i * stride];
      auto yc = transmit_feedback_with_noise(drift, 1.0, PathRecord(cg, bv));
      err[k] += std::abs(yc.values.back() - yref.values.back());
    }
  }
  // least-squares slope of log err vs log dt should be at least ~1/2
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int npts = static_cast<int>(coarse_n.size());
  for (int k = 0; k < npts; ++k) {
    const double x = std::log(1.0 / coarse_n[k]);
    const double y = std::log(err[k] / trials);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  CHECK(slope >= 0.45);
}

TEST_CASE("integrate_and_dump reads the coarse times and checks divisibility") {
  SampleGrid fine(1.0, 64);
  std::vector<double> v(fine.points());
  for (int i = 0; i < fine.points(); ++i) v[i] = fine.time(i) * fine.time(i);
  PathRecord y(fine, v);

  SampleGrid coarse(1.0, 8);
  auto s = integrate_and_dump(y, coarse);
  REQUIRE(static_cast<int>(s.size()) == coarse.points());
  for (int i = 0; i <= coarse.n; ++i) {
    const double t = coarse.time(i);
    CHECK(std::abs(s[i] - t * t) < 1e-13);
  }
  CHECK_THROWS(integrate_and_dump(y, SampleGrid(1.0, 7)));  // 64 % 7 != 0
  CHECK_THROWS(integrate_and_dump(y, SampleGrid(2.0, 8)));  // horizon mismatch
}

TEST_CASE("normalize_increments divides increments by sqrt(delta)") {
  std::vector<double> samples = {0.0, 1.0, 3.0, 2.0};
  auto z = normalize_increments(samples, 0.25);
  REQUIRE(z.size() == 3);
  CHECK(z[0] == doctest::Approx(2.0));
  CHECK(z[1] == doctest::Approx(4.0));
  CHECK(z[2] == doctest::Approx(-2.0));
}

TEST_CASE("drift validation and spot check") {
  CHECK_THROWS(DriftSpec::linear_feedback(1.0, 1.0, {-1.0, 1.0}, {0.7, 0.7}).validate());
  CHECK_THROWS(DriftSpec::linear_feedback(1.0, 1.0, {-1.0, 1.0}, {1.0}).validate());
  auto good = DriftSpec::linear_feedback(1.0, 2.0, {-1.0, 1.0}, {0.5, 0.5});
  CHECK_NOTHROW(good.validate());
  // a drift with no path/time dependence has spot-check ratio 0
  auto flat = DriftSpec::message_scaled(1.0, nullptr, {-1.0, 1.0}, {0.5, 0.5});
  RngStream rng(6, 0);
  CHECK(flat.lipschitz_spot_check(SampleGrid(1.0, 64), 200, rng) == 0.0);
}

TEST_CASE("simulation is deterministic in (seed, stream)") {
  auto drift = DriftSpec::linear_feedback(1.0, 1.0, {-1.0, 1.0}, {0.5, 0.5});
  SampleGrid grid(1.0, 128);
  RngStream a(7, 1), b(7, 1);
  auto ya = transmit_feedback(drift, -1.0, grid, a);
  auto yb = transmit_feedback(drift, -1.0, grid, b);
  for (int i = 0; i < grid.points(); ++i) CHECK(ya.y.values[i] == yb.y.values[i]);
}
