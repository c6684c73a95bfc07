#include "ctlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ctlab/quadrature.hpp"

namespace ctlab {

namespace {

void validate_table(const Tabulated& t) {
  if (t.lambda.size() != t.value.size() || t.lambda.size() < 2)
    throw std::invalid_argument("tabulated PSD: need >= 2 (lambda, f) rows");
  for (std::size_t i = 0; i + 1 < t.lambda.size(); ++i)
    if (!(t.lambda[i] < t.lambda[i + 1]))
      throw std::invalid_argument("tabulated PSD: lambda not strictly ascending");
  for (double f : t.value)
    if (!(f >= 0.0) || !std::isfinite(f))
      throw std::invalid_argument("tabulated PSD: f must be finite and >= 0");
}

// a table covering only lambda >= 0 stands for the even extension
Tabulated mirror_if_half(Tabulated t) {
  if (t.lambda.front() < 0.0) return t;
  Tabulated full;
  const std::size_t m = t.lambda.size();
  const bool has_zero = t.lambda.front() == 0.0;
  for (std::size_t i = m; i-- > (has_zero ? 1 : 0);) {
    full.lambda.push_back(-t.lambda[i]);
    full.value.push_back(t.value[i]);
  }
  full.lambda.insert(full.lambda.end(), t.lambda.begin(), t.lambda.end());
  full.value.insert(full.value.end(), t.value.begin(), t.value.end());
  return full;
}

double sinc_series(double x) {
  // sin(x)/x by series near 0 to avoid cancellation
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// highest frequency present, used to keep quadrature panels sub-oscillation
double max_frequency(const PsdSpec& psd) {
  if (psd.is_band_limited_flat()) return psd.blf().W;
  const auto& t = psd.table();
  return std::max(std::abs(t.lambda.front()), std::abs(t.lambda.back()));
}

}  // namespace

PsdSpec PsdSpec::band_limited_flat(double P, double W) {
  if (!(P >= 0.0) || !(W > 0.0))
    throw std::invalid_argument("BandLimitedFlat: need P >= 0 and W > 0");
  return PsdSpec(BandLimitedFlat{P, W});
}

PsdSpec PsdSpec::tabulated(std::vector<double> lambda, std::vector<double> value) {
  Tabulated t{std::move(lambda), std::move(value)};
  validate_table(t);
  return PsdSpec(mirror_if_half(std::move(t)));
}

PsdSpec PsdSpec::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open PSD table: " + path);
  std::vector<double> lam, val;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double l, f;
    if (ss >> l >> f) {
      lam.push_back(l);
      val.push_back(f);
    }
  }
  return tabulated(std::move(lam), std::move(val));
}

double PsdSpec::density(double lambda) const {
  if (is_band_limited_flat()) {
    const auto& b = blf();
    return std::abs(lambda) < b.W ? b.P / (2.0 * b.W) : 0.0;
  }
  const auto& t = table();
  if (lambda <= t.lambda.front() || lambda >= t.lambda.back()) {
    // table endpoints included
    if (lambda == t.lambda.front()) return t.value.front();
    if (lambda == t.lambda.back()) return t.value.back();
    return 0.0;
  }
  const auto it = std::upper_bound(t.lambda.begin(), t.lambda.end(), lambda);
  const std::size_t i = static_cast<std::size_t>(it - t.lambda.begin()) - 1;
  const double w = (lambda - t.lambda[i]) / (t.lambda[i + 1] - t.lambda[i]);
  return t.value[i] * (1.0 - w) + t.value[i + 1] * w;
}

double autocovariance(const PsdSpec& psd, double v) {
  if (psd.is_band_limited_flat()) {
    const auto& b = psd.blf();
    return b.P * sinc_series(b.W * v);
  }
  const auto& t = psd.table();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < t.lambda.size(); ++i) {
    const double a = t.lambda[i], b = t.lambda[i + 1];
    // keep each panel under a quarter oscillation of cos(v lambda)
    const int panels =
        std::max(1, static_cast<int>(std::ceil(std::abs(v) * (b - a) / (0.5 * M_PI))));
    acc += gl_composite(
        [&](double lam) { return psd.density(lam) * std::cos(v * lam); }, a, b,
        panels, 32);
  }
  if (!std::isfinite(acc))
    throw std::runtime_error("autocovariance: quadrature diverged (invalid PSD)");
  return acc;
}

SpectralMoments spectral_moment(const PsdSpec& psd) {
  SpectralMoments m{};
  if (psd.is_band_limited_flat()) {
    const auto& b = psd.blf();
    m.m0 = b.P;
    m.m1 = b.P * b.W / 2.0;
  } else {
    const auto& t = psd.table();
    // closed form per linear segment, split at lambda = 0
    auto piece = [&](double a, double b, double fa, double fb) {
      const double c1 = (fb - fa) / (b - a);
      const double c0 = fa - c1 * a;
      m.m0 += 0.5 * (fa + fb) * (b - a);
      const double sgn = (b <= 0.0) ? -1.0 : 1.0;  // [a,b] does not straddle 0
      m.m1 += sgn * (c0 * (b * b - a * a) / 2.0 + c1 * (b * b * b - a * a * a) / 3.0);
    };
    for (std::size_t i = 0; i + 1 < t.lambda.size(); ++i) {
      const double a = t.lambda[i], b = t.lambda[i + 1];
      if (a < 0.0 && b > 0.0) {
        const double f0 = psd.density(0.0);
        piece(a, 0.0, t.value[i], f0);
        piece(0.0, b, f0, t.value[i + 1]);
      } else {
        piece(a, b, t.value[i], t.value[i + 1]);
      }
    }
  }
  if (!std::isfinite(m.m0) || !std::isfinite(m.m1))
    throw std::runtime_error("spectral_moment: non-finite moment (PSD rejected)");
  return m;
}

std::vector<double> block_covariance_lags(const PsdSpec& psd, const SampleGrid& grid) {
  const double d = grid.dt();
  const double freq = max_frequency(psd);
  const int panels = std::max(1, static_cast<int>(std::ceil(freq * d / (0.5 * M_PI))));
  std::vector<double> lags(grid.n);
  for (int k = 0; k < grid.n; ++k) {
    const double h = k * d;
    auto integrand = [&](double w) { return (d - std::abs(w)) * autocovariance(psd, h + w); };
    // split at w = 0 where the triangular weight has a kink
    const double left = gl_composite(integrand, -d, 0.0, panels, 32);
    const double right = gl_composite(integrand, 0.0, d, panels, 32);
    lags[k] = (left + right) / d;
  }
  return lags;
}

Eigen::MatrixXd block_covariance(const PsdSpec& psd, const SampleGrid& grid) {
  const auto lags = block_covariance_lags(psd, grid);
  Eigen::MatrixXd S(grid.n, grid.n);
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j) S(i, j) = lags[std::abs(i - j)];
  return S;
}

GpSampler::GpSampler(const PsdSpec& psd, const SampleGrid& fine_grid) : grid_(fine_grid) {
  const int m = grid_.points();
  const double r0 = autocovariance(psd, 0.0);
  if (r0 == 0.0) {
    zero_ = true;
    return;
  }
  std::vector<double> r(m);
  for (int k = 0; k < m; ++k) r[k] = autocovariance(psd, k * grid_.dt());
  Eigen::MatrixXd K(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) K(i, j) = r[std::abs(i - j)];
  for (double jitter : {0.0, 1e-14, 1e-12, 1e-10}) {
    Eigen::MatrixXd Kj = K;
    Kj.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(Kj);
    if (llt.info() == Eigen::Success) {
      chol_ = llt.matrixL();
      jitter_ = jitter;
      return;
    }
  }
  throw std::runtime_error("gp_sample: covariance kernel not PSD at this grid resolution");
}

PathRecord GpSampler::sample(RngStream& rng) const {
  PathRecord path = PathRecord::zeros(grid_);
  if (zero_) return path;
  const int m = grid_.points();
  Eigen::VectorXd z(m);
  for (int i = 0; i < m; ++i) z(i) = rng.normal();
  Eigen::VectorXd x = chol_ * z;
  for (int i = 0; i < m; ++i) path.values[i] = x(i);
  return path;
}

PathRecord gp_sample(const PsdSpec& psd, const SampleGrid& fine_grid, RngStream& rng) {
  return GpSampler(psd, fine_grid).sample(rng);
}

}  // namespace ctlab
