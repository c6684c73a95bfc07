#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ctlab/spectra.hpp"

namespace ctlab {

struct MIEstimate {
  enum class Method { LogDet, IMMSEQuadrature, MonteCarlo };

  double value = 0.0;  // nats
  Method method = Method::LogDet;
  long trials = 0;     // 0 for exact methods
  double std_error = 0.0;
};

// log det of a symmetric PD Toeplitz matrix with first column c,
// by the Levinson-Durbin prediction-error recursion (O(n^2))
double toeplitz_logdet(const std::vector<double>& c);

// 1/2 log det(I + snr * Sigma) in nats, dense triangular factorization
MIEstimate mi_logdet(const Eigen::MatrixXd& sigma, double snr);
// Toeplitz fast path from the distinct lags
MIEstimate mi_logdet_toeplitz(const std::vector<double>& lags, double snr);

// trace of the conditional covariance of V given sqrt(snr) V + N
double mmse_trace(const Eigen::MatrixXd& sigma, double snr);

// 1/2 int_0^1 mmse_trace(sigma, s) ds, 64-node Gauss-Legendre
MIEstimate mi_via_immse(const Eigen::MatrixXd& sigma);

// I(X_0^T; Y(Delta_{T,n})) for a stationary input with the given PSD;
// Levinson fast path for n >= levinson_threshold, dense below
MIEstimate mi_sampled(const PsdSpec& psd, double T, int n,
                      int levinson_threshold = 1024);

// fine-grid dyadic oracle for the continuous-time MI
struct OracleResult {
  MIEstimate mi;
  double uncertainty = 0.0;            // last dyadic increment
  std::vector<int> dyadic_n;
  std::vector<double> dyadic_value;
  bool converged = false;              // last increment <= tol
};
OracleResult mi_continuous_oracle(const PsdSpec& psd, double T, int N_fine,
                                  double tol);

// upper bound on sqrt(continuous MI) from the sampled MI:
//   (sqrt(2 T delta m1) + sqrt(2 T delta m1 + 4 I_sampled)) / 2
double thm1a_bound(const PsdSpec& psd, double T, int n, double I_sampled);
// gap bound T sqrt(delta) sqrt(m1) sqrt(m0)
double thm1b_bound(const PsdSpec& psd, double T, int n);
// band-limited flat variant of the gap bound: T P sqrt(W delta)
double cor1_bound(const PsdSpec& psd, double T, int n);

}  // namespace ctlab
