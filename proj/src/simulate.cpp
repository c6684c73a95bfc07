#include "ctlab/simulate.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace ctlab {

DriftSpec DriftSpec::message_scaled(double theta, std::function<double(double)> pulse,
                                    std::vector<double> messages, std::vector<double> prior) {
  DriftSpec d;
  if (!pulse) pulse = [](double) { return 1.0; };
  d.g = [theta, pulse](double s, double m, const PathView&) {
    return theta * m * pulse(s);
  };
  double mmax = 0.0;
  for (double m : messages) mmax = std::max(mmax, std::abs(m));
  d.lipschitz = std::abs(theta) * mmax;  // valid for 1-Lipschitz bounded pulses
  d.growth = std::abs(theta) * mmax;
  d.messages = std::move(messages);
  d.prior = std::move(prior);
  d.name = "message_scaled";
  d.validate();
  return d;
}

DriftSpec DriftSpec::linear_feedback(double theta, double kappa,
                                     std::vector<double> messages, std::vector<double> prior) {
  DriftSpec d;
  d.g = [theta, kappa](double s, double m, const PathView& y) {
    return theta * m - kappa * y.at(s);
  };
  double mmax = 0.0;
  for (double m : messages) mmax = std::max(mmax, std::abs(m));
  d.lipschitz = std::abs(kappa);
  d.growth = std::max(std::abs(theta) * mmax, std::abs(kappa));
  d.messages = std::move(messages);
  d.prior = std::move(prior);
  d.name = "linear_feedback";
  d.validate();
  return d;
}

DriftSpec DriftSpec::custom(Fn g, double lipschitz, double growth,
                            std::vector<double> messages, std::vector<double> prior,
                            std::string name) {
  DriftSpec d;
  d.g = std::move(g);
  d.lipschitz = lipschitz;
  d.growth = growth;
  d.messages = std::move(messages);
  d.prior = std::move(prior);
  d.name = std::move(name);
  d.validate();
  return d;
}

void DriftSpec::validate() const {
  if (!g) throw std::invalid_argument("DriftSpec: missing drift callable");
  if (messages.empty() || messages.size() != prior.size())
    throw std::invalid_argument("DriftSpec: messages/prior size mismatch");
  double sum = 0.0;
  for (double p : prior) {
    if (!(p > 0.0)) throw std::invalid_argument("DriftSpec: prior probabilities must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("DriftSpec: prior must sum to 1");
}

namespace {

double checked_drift(const DriftSpec& drift, double s, double m, const PathView& prefix) {
  const double v = drift.g(s, m, prefix);
  if (!std::isfinite(v)) throw std::runtime_error("drift returned non-finite value");
  return v;
}

}  // namespace

PathRecord brownian(const SampleGrid& fine_grid, RngStream& rng) {
  PathRecord b = PathRecord::zeros(fine_grid);
  const double sd = std::sqrt(fine_grid.dt());
  for (int k = 1; k <= fine_grid.n; ++k) b.values[k] = b.values[k - 1] + sd * rng.normal();
  return b;
}

PathRecord transmit_nonfeedback(const PathRecord& x, const PathRecord& b) {
  if (!(x.grid == b.grid)) throw std::invalid_argument("transmit_nonfeedback: grid mismatch");
  PathRecord y = PathRecord::zeros(x.grid);
  const double h = x.grid.dt();
  double integral = 0.0;
  for (int k = 1; k <= x.grid.n; ++k) {
    integral += 0.5 * h * (x.values[k - 1] + x.values[k]);
    y.values[k] = integral + b.values[k];
  }
  return y;
}

PathRecord transmit_feedback_with_noise(const DriftSpec& drift, double m,
                                        const PathRecord& b) {
  const SampleGrid& fine = b.grid;
  PathRecord y = PathRecord::zeros(fine);
  const double h = fine.dt();
  for (int k = 0; k < fine.n; ++k) {
    const PathView prefix(y.values.data(), k + 1, h);
    const double g = checked_drift(drift, fine.time(k), m, prefix);
    y.values[k + 1] = y.values[k] + g * h + (b.values[k + 1] - b.values[k]);
  }
  return y;
}

FeedbackPaths transmit_feedback(const DriftSpec& drift, double m,
                                const SampleGrid& fine_grid, RngStream& rng) {
  FeedbackPaths out;
  out.b = brownian(fine_grid, rng);
  out.y = transmit_feedback_with_noise(drift, m, out.b);
  return out;
}

std::vector<double> integrate_and_dump(const PathRecord& y, const SampleGrid& coarse) {
  if (y.grid.n % coarse.n != 0 || y.grid.T != coarse.T)
    throw std::invalid_argument("integrate_and_dump: coarse grid does not nest in fine grid");
  const int stride = y.grid.n / coarse.n;
  std::vector<double> samples(coarse.n + 1);
  for (int i = 0; i <= coarse.n; ++i) samples[i] = y.values[i * stride];
  return samples;
}

std::vector<double> normalize_increments(const std::vector<double>& samples, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("normalize_increments: delta must be > 0");
  std::vector<double> out;
  out.reserve(samples.size() - 1);
  const double root = std::sqrt(delta);
  for (std::size_t i = 1; i < samples.size(); ++i)
    out.push_back((samples[i] - samples[i - 1]) / root);
  return out;
}

double DriftSpec::lipschitz_spot_check(const SampleGrid& grid, int pairs, RngStream& rng) const {
  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    PathRecord y1 = brownian(grid, rng);
    PathRecord y2 = brownian(grid, rng);
    const auto mi = static_cast<std::size_t>(rng.uniform() * messages.size()) % messages.size();
    const double m = messages[mi];
    const double s1 = rng.uniform() * grid.T;
    const double s2 = rng.uniform() * grid.T;
    double sup = 0.0;
    for (int i = 0; i <= grid.n; ++i) sup = std::max(sup, std::abs(y1.values[i] - y2.values[i]));
    const double denom = lipschitz * (std::abs(s1 - s2) + sup);
    if (denom <= 0.0) continue;
    const int k1 = std::min(static_cast<int>(s1 / grid.dt()), grid.n);
    const int k2 = std::min(static_cast<int>(s2 / grid.dt()), grid.n);
    const double g1 = g(s1, m, PathView(y1.values.data(), k1 + 1, grid.dt()));
    const double g2 = g(s2, m, PathView(y2.values.data(), k2 + 1, grid.dt()));
    worst = std::max(worst, std::abs(g1 - g2) / denom);
  }
  return worst;
}

}  // namespace ctlab
