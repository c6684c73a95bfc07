#pragma once

#include <cstdint>
#include <vector>

#include "ctlab/gaussmi.hpp"
#include "ctlab/simulate.hpp"

namespace ctlab {

// rho1(m, Y_0^T): left-endpoint Ito sums on the fine grid,
//   -sum g(t_k, m, y_0^{t_k}) (y(t_{k+1}) - y(t_k)) + 1/2 sum g^2 dt
double rho1(const DriftSpec& drift, double m, const PathRecord& y);
// same, truncated to the first k_max fine intervals
double rho1_partial(const DriftSpec& drift, double m, const PathRecord& y, int k_max);

// rho2(Delta_n, m, Y(Delta_n)): the piecewise-flat drift on the
// piecewise-linear path through the samples; depends on the samples only
double rho2(const DriftSpec& drift, double m, const std::vector<double>& samples,
            const SampleGrid& coarse);

// E[g(s, M, Y_0^s) | Y_0^s] under the message prior; log-sum-exp weights
double posterior_drift(const DriftSpec& drift, const PathRecord& y_prefix, double s);

struct MeanSE {
  double mean = 0.0;
  double std_error = 0.0;
};

// Monte Carlo check of E[exp(-int g dB - 1/2 int g^2 ds)] = 1
MeanSE novikov_check(const DriftSpec& drift, const SampleGrid& fine_grid,
                     long trials, std::uint64_t seed, int workers = 1);

// Monte Carlo estimate of E[exp(eps * sup_t |Y(t)|^2)]
MeanSE sup_norm_moment_check(const DriftSpec& drift, const SampleGrid& fine_grid,
                             double eps, long trials, std::uint64_t seed,
                             int workers = 1);

// Common-random-number coupled estimates: one fine Brownian path and one
// message per trial drive the continuous-time estimator (rho1) and every
// coarse grid's estimator (rho2) simultaneously.
struct FeedbackMIResult {
  MIEstimate continuous;
  std::vector<int> n_list;
  std::vector<MIEstimate> sampled;    // one per n
  std::vector<double> gap;            // continuous - sampled, per n, CRN-coupled
  std::vector<double> gap_std_error;
  long clip_count = 0;                // exponents clipped at +-700 in the mixtures
};
FeedbackMIResult feedback_mi_crn(const DriftSpec& drift, const SampleGrid& fine_grid,
                                 const std::vector<int>& n_list, long trials,
                                 std::uint64_t seed, int workers = 1);

// single-grid conveniences built on the coupled runner
MIEstimate mi_feedback_sampled(const DriftSpec& drift, const SampleGrid& coarse,
                               int fine_N, long trials, std::uint64_t seed,
                               int workers = 1);
MIEstimate mi_feedback_continuous(const DriftSpec& drift, const SampleGrid& fine_grid,
                                  long trials, std::uint64_t seed, int workers = 1);

// entropy of the message prior, nats
double prior_entropy(const DriftSpec& drift);

}  // namespace ctlab
