#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ctlab/grid.hpp"
#include "ctlab/rng.hpp"

namespace ctlab {

// Feedback drift g(s, m, y_0^s) with declared regularity constants.
// The callable must read the path only on [0, s].
struct DriftSpec {
  using Fn = std::function<double(double s, double m, const PathView& y)>;

  Fn g;
  double lipschitz = 0.0;  // uniform Lipschitz constant
  double growth = 0.0;     // uniform linear-growth constant
  std::vector<double> messages;
  std::vector<double> prior;
  std::string name;

  // g = theta * m * pulse(s); constant pulse by default
  static DriftSpec message_scaled(double theta, std::function<double(double)> pulse,
                                  std::vector<double> messages, std::vector<double> prior);
  // g = theta * m - kappa * y(s)
  static DriftSpec linear_feedback(double theta, double kappa,
                                   std::vector<double> messages, std::vector<double> prior);
  static DriftSpec custom(Fn g, double lipschitz, double growth,
                          std::vector<double> messages, std::vector<double> prior,
                          std::string name = "custom");

  void validate() const;  // prior positive, sums to 1, sizes match

  // spot-check of the declared Lipschitz bound on random path pairs;
  // returns the worst observed ratio |dg| / (L * (|ds| + ||dy||))
  double lipschitz_spot_check(const SampleGrid& grid, int pairs, RngStream& rng) const;
};

// standard Brownian motion on the fine grid, B(0) = 0
PathRecord brownian(const SampleGrid& fine_grid, RngStream& rng);

// Y(t) = int_0^t X(s) ds + B(t), trapezoid on the fine grid
PathRecord transmit_nonfeedback(const PathRecord& x, const PathRecord& b);

// Euler-Maruyama for Y(t) = int_0^t g(s, M, Y_0^s) ds + B(t);
// drift at the left endpoint on the path-so-far
struct FeedbackPaths {
  PathRecord y;
  PathRecord b;
};
FeedbackPaths transmit_feedback(const DriftSpec& drift, double m,
                                const SampleGrid& fine_grid, RngStream& rng);
// same scheme driven by a pre-drawn Brownian path (common random numbers)
PathRecord transmit_feedback_with_noise(const DriftSpec& drift, double m,
                                        const PathRecord& b);

// integrate-and-dump: read Y at the coarse times; fine N must be divisible by n
std::vector<double> integrate_and_dump(const PathRecord& y, const SampleGrid& coarse);

// (Y(t_i) - Y(t_{i-1})) / sqrt(delta)
std::vector<double> normalize_increments(const std::vector<double>& samples, double delta);

}  // namespace ctlab
