#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ctlab/grid.hpp"
#include "ctlab/rng.hpp"

namespace ctlab {

// f(lambda) = P/(2W) on [-W, W], zero outside; integrates to P
struct BandLimitedFlat {
  double P = 1.0;
  double W = 1.0;
};

// nonnegative symmetric density, piecewise linear between nodes,
// zero outside the table support
struct Tabulated {
  std::vector<double> lambda;  // ascending
  std::vector<double> value;   // f(lambda_k) >= 0
};

class PsdSpec {
 public:
  static PsdSpec band_limited_flat(double P, double W);
  static PsdSpec tabulated(std::vector<double> lambda, std::vector<double> value);
  // two-column whitespace-separated text file (lambda, f), lambda ascending;
  // a table covering only lambda >= 0 is mirrored about the origin
  static PsdSpec from_file(const std::string& path);

  bool is_band_limited_flat() const { return std::holds_alternative<BandLimitedFlat>(form_); }
  const BandLimitedFlat& blf() const { return std::get<BandLimitedFlat>(form_); }
  const Tabulated& table() const { return std::get<Tabulated>(form_); }

  double density(double lambda) const;

 private:
  explicit PsdSpec(std::variant<BandLimitedFlat, Tabulated> f) : form_(std::move(f)) {}
  std::variant<BandLimitedFlat, Tabulated> form_;
};

// r(v) = integral of f(lambda) cos(v lambda) d lambda
double autocovariance(const PsdSpec& psd, double v);

// (m0, m1) = (integral f, integral f |lambda|); throws if non-finite
struct SpectralMoments {
  double m0;
  double m1;
};
SpectralMoments spectral_moment(const PsdSpec& psd);

// distinct Toeplitz lags of the normalized block covariance:
// sigma_k = (1/delta) * psi(k delta),  psi(h) = int_0^d int_0^d r(h+s-u) du ds,
// reduced to the 1-d integral int_{-d}^{d} (d-|w|) r(h+w) dw
std::vector<double> block_covariance_lags(const PsdSpec& psd, const SampleGrid& grid);

// full n x n matrix assembled from the lags
Eigen::MatrixXd block_covariance(const PsdSpec& psd, const SampleGrid& grid);

// Stationary Gaussian path sampler: factors the grid covariance once
// (LLT with jitter ladder 1e-14, 1e-12, 1e-10), then each draw is a matvec.
class GpSampler {
 public:
  GpSampler(const PsdSpec& psd, const SampleGrid& fine_grid);
  PathRecord sample(RngStream& rng) const;
  double jitter_used() const { return jitter_; }

 private:
  SampleGrid grid_;
  Eigen::MatrixXd chol_;  // lower-triangular factor
  double jitter_ = 0.0;
  bool zero_ = false;
};

PathRecord gp_sample(const PsdSpec& psd, const SampleGrid& fine_grid, RngStream& rng);

}  // namespace ctlab
