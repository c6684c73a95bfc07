#include "ctlab/gaussmi.hpp"

#include <cmath>
#include <stdexcept>

#include "ctlab/quadrature.hpp"

namespace ctlab {

double toeplitz_logdet(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size());
  if (n == 0) throw std::invalid_argument("toeplitz_logdet: empty first column");
  if (!(c[0] > 0.0)) throw std::runtime_error("toeplitz_logdet: matrix not PD");
  double err = c[0];
  double logdet = std::log(c[0]);
  std::vector<double> a, a_next;
  a.reserve(n);
  a_next.reserve(n);
  for (int m = 1; m < n; ++m) {
    double acc = c[m];
    for (int j = 1; j < m; ++j) acc += a[j - 1] * c[m - j];
    const double k = -acc / err;
    if (!(std::abs(k) < 1.0))
      throw std::runtime_error("toeplitz_logdet: reflection coefficient >= 1 (not PD)");
    a_next.resize(m);
    for (int j = 0; j < m - 1; ++j) a_next[j] = a[j] + k * a[m - 2 - j];
    a_next[m - 1] = k;
    std::swap(a, a_next);
    err *= 1.0 - k * k;
    logdet += std::log(err);
  }
  return logdet;
}

MIEstimate mi_logdet(const Eigen::MatrixXd& sigma, double snr) {
  const int n = static_cast<int>(sigma.rows());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) + snr * sigma;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("mi_logdet: factorization failed (matrix not PSD)");
  const double logdet = 2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
  return {0.5 * logdet, MIEstimate::Method::LogDet, 0, 0.0};
}

MIEstimate mi_logdet_toeplitz(const std::vector<double>& lags, double snr) {
  std::vector<double> c(lags.size());
  c[0] = 1.0 + snr * lags[0];
  for (std::size_t k = 1; k < lags.size(); ++k) c[k] = snr * lags[k];
  return {0.5 * toeplitz_logdet(c), MIEstimate::Method::LogDet, 0, 0.0};
}

double mmse_trace(const Eigen::MatrixXd& sigma, double snr) {
  const int n = static_cast<int>(sigma.rows());
  // trace(Sigma - snr Sigma (I + snr Sigma)^{-1} Sigma) = trace((I + snr Sigma)^{-1} Sigma)
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) + snr * sigma;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("mmse_trace: factorization failed (matrix not PSD)");
  return llt.solve(sigma).trace();
}

MIEstimate mi_via_immse(const Eigen::MatrixXd& sigma) {
  const auto& gl = GaussLegendre::rule(64);
  double acc = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double s = 0.5 * (gl.nodes[i] + 1.0);
    acc += 0.5 * gl.weights[i] * mmse_trace(sigma, s);
  }
  return {0.5 * acc, MIEstimate::Method::IMMSEQuadrature, 0, 0.0};
}

MIEstimate mi_sampled(const PsdSpec& psd, double T, int n, int levinson_threshold) {
  const SampleGrid grid(T, n);
  const auto lags = block_covariance_lags(psd, grid);
  if (lags[0] == 0.0) return {0.0, MIEstimate::Method::LogDet, 0, 0.0};
  if (n >= levinson_threshold) return mi_logdet_toeplitz(lags, 1.0);
  Eigen::MatrixXd S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) S(i, j) = lags[std::abs(i - j)];
  return mi_logdet(S, 1.0);
}

OracleResult mi_continuous_oracle(const PsdSpec& psd, double T, int N_fine, double tol) {
  if (N_fine < 1 || (N_fine & (N_fine - 1)) != 0)
    throw std::invalid_argument("mi_continuous_oracle: N_fine must be a power of two");
  OracleResult out;
  double prev = 0.0;
  for (int n = 1; n <= N_fine; n *= 2) {
    const double v = mi_sampled(psd, T, n).value;
    if (!out.dyadic_n.empty() && v < prev - 1e-9)
      throw std::runtime_error("mi_continuous_oracle: non-monotone dyadic sequence");
    out.dyadic_n.push_back(n);
    out.dyadic_value.push_back(v);
    prev = v;
  }
  const std::size_t m = out.dyadic_value.size();
  out.uncertainty = (m >= 2) ? out.dyadic_value[m - 1] - out.dyadic_value[m - 2] : 0.0;
  out.uncertainty = std::max(out.uncertainty, 0.0);
  out.converged = out.uncertainty <= tol;
  out.mi = {out.dyadic_value.back(), MIEstimate::Method::LogDet, 0, 0.0};
  return out;
}

double thm1a_bound(const PsdSpec& psd, double T, int n, double I_sampled) {
  const double delta = T / n;
  const double m1 = spectral_moment(psd).m1;
  const double a = 2.0 * T * delta * m1;
  return 0.5 * (std::sqrt(a) + std::sqrt(a + 4.0 * I_sampled));
}

double thm1b_bound(const PsdSpec& psd, double T, int n) {
  const double delta = T / n;
  const auto m = spectral_moment(psd);
  return T * std::sqrt(delta) * std::sqrt(m.m1) * std::sqrt(m.m0);
}

double cor1_bound(const PsdSpec& psd, double T, int n) {
  if (!psd.is_band_limited_flat())
    throw std::invalid_argument("cor1_bound: band-limited-flat PSD required");
  const double delta = T / n;
  const auto& b = psd.blf();
  return T * b.P * std::sqrt(b.W * delta);
}

}  // namespace ctlab
