#include "ctlab/feedmi.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ctlab {

namespace {

constexpr double kExpClip = 700.0;
constexpr int kBatches = 100;

// log sum_j exp(x_j), counting terms flushed by the +-700 clip
double log_sum_exp(const std::vector<double>& x, long& clip_count) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : x) {
    if (std::abs(v) > kExpClip) ++clip_count;
    top = std::max(top, v);
  }
  double acc = 0.0;
  for (double v : x) {
    const double d = std::max(v - top, -kExpClip);
    acc += std::exp(d);
  }
  return top + std::log(acc);
}

MeanSE batch_mean_se(const std::vector<double>& batch_sums,
                     const std::vector<long>& batch_counts) {
  std::vector<double> means;
  means.reserve(batch_sums.size());
  for (std::size_t b = 0; b < batch_sums.size(); ++b)
    if (batch_counts[b] > 0) means.push_back(batch_sums[b] / batch_counts[b]);
  const long nb = static_cast<long>(means.size());
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= nb;
  double var = 0.0;
  for (double m : means) var += (m - grand) * (m - grand);
  var = (nb > 1) ? var / (nb - 1) : 0.0;
  return {grand, std::sqrt(var / nb)};
}

int draw_message_index(const DriftSpec& drift, RngStream& rng) {
  const double u = rng.uniform();
  double cdf = 0.0;
  for (std::size_t j = 0; j < drift.prior.size(); ++j) {
    cdf += drift.prior[j];
    if (u < cdf) return static_cast<int>(j);
  }
  return static_cast<int>(drift.prior.size()) - 1;
}

// run `fn(batch_index, rng)` over kBatches batches, optionally threaded;
// batch b always owns stream id b, so the partition is deterministic
template <typename Fn>
void run_batches(std::uint64_t seed, long trials, int workers, Fn&& fn) {
  const long base = trials / kBatches;
  const long extra = trials % kBatches;
  auto batch_trials = [&](int b) { return base + (b < extra ? 1 : 0); };
  if (workers <= 1) {
    for (int b = 0; b < kBatches; ++b) {
      RngStream rng(seed, static_cast<std::uint64_t>(b));
      fn(b, batch_trials(b), rng);
    }
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int b = next.fetch_add(1);
      if (b >= kBatches) return;
      RngStream rng(seed, static_cast<std::uint64_t>(b));
      fn(b, batch_trials(b), rng);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

double rho1_partial(const DriftSpec& drift, double m, const PathRecord& y, int k_max) {
  const double h = y.grid.dt();
  double ito = 0.0, quad = 0.0;
  for (int k = 0; k < k_max; ++k) {
    const PathView prefix(y.values.data(), k + 1, h);
    const double g = drift.g(y.grid.time(k), m, prefix);
    if (!std::isfinite(g)) throw std::runtime_error("rho1: drift returned non-finite value");
    ito += g * (y.values[k + 1] - y.values[k]);
    quad += g * g;
  }
  return -ito + 0.5 * quad * h;
}

double rho1(const DriftSpec& drift, double m, const PathRecord& y) {
  return rho1_partial(drift, m, y, y.grid.n);
}

double rho2(const DriftSpec& drift, double m, const std::vector<double>& samples,
            const SampleGrid& coarse) {
  if (static_cast<int>(samples.size()) != coarse.points())
    throw std::invalid_argument("rho2: samples length must be n + 1");
  const double d = coarse.dt();
  double ito = 0.0, quad = 0.0;
  for (int i = 1; i <= coarse.n; ++i) {
    const PathView ybar(samples.data(), i, d);  // piecewise-linear prefix to t_{i-1}
    const double g = drift.g(coarse.time(i - 1), m, ybar);
    if (!std::isfinite(g)) throw std::runtime_error("rho2: drift returned non-finite value");
    ito += g * (samples[i] - samples[i - 1]);
    quad += g * g;
  }
  return -ito + 0.5 * quad * d;
}

double posterior_drift(const DriftSpec& drift, const PathRecord& y_prefix, double s) {
  const int k = std::min(static_cast<int>(std::floor(s / y_prefix.grid.dt() + 1e-12)),
                         y_prefix.grid.n);
  const std::size_t J = drift.messages.size();
  std::vector<double> logw(J);
  for (std::size_t j = 0; j < J; ++j)
    logw[j] = std::log(drift.prior[j]) - rho1_partial(drift, drift.messages[j], y_prefix, k);
  long clips = 0;
  const double norm = log_sum_exp(logw, clips);
  const PathView prefix(y_prefix.values.data(), k + 1, y_prefix.grid.dt());
  double out = 0.0;
  for (std::size_t j = 0; j < J; ++j)
    out += std::exp(std::max(logw[j] - norm, -kExpClip)) * drift.g(s, drift.messages[j], prefix);
  return out;
}

double prior_entropy(const DriftSpec& drift) {
  double h = 0.0;
  for (double p : drift.prior) h -= p * std::log(p);
  return h;
}

FeedbackMIResult feedback_mi_crn(const DriftSpec& drift, const SampleGrid& fine_grid,
                                 const std::vector<int>& n_list, long trials,
                                 std::uint64_t seed, int workers) {
  drift.validate();
  if (trials < 1) throw std::invalid_argument("feedback_mi_crn: trials must be >= 1");
  for (int n : n_list)
    if (n < 1 || fine_grid.n % n != 0)
      throw std::invalid_argument("feedback_mi_crn: every n must divide fine N");

  const std::size_t J = drift.messages.size();
  const std::size_t G = n_list.size();
  std::vector<long> counts(kBatches, 0);
  std::vector<double> sum_cont(kBatches, 0.0);
  std::vector<std::vector<double>> sum_samp(G, std::vector<double>(kBatches, 0.0));
  std::vector<std::vector<double>> sum_gap(G, std::vector<double>(kBatches, 0.0));
  std::vector<long> clips(kBatches, 0);

  run_batches(seed, trials, workers, [&](int b, long n_trials, RngStream& rng) {
    std::vector<double> log_mix(J), r1(J);
    for (long t = 0; t < n_trials; ++t) {
      const int mi = draw_message_index(drift, rng);
      const PathRecord noise = brownian(fine_grid, rng);
      const PathRecord y = transmit_feedback_with_noise(drift, drift.messages[mi], noise);

      for (std::size_t j = 0; j < J; ++j) {
        r1[j] = rho1(drift, drift.messages[j], y);
        log_mix[j] = std::log(drift.prior[j]) - r1[j];
      }
      const double term_cont = -r1[mi] - log_sum_exp(log_mix, clips[b]);
      sum_cont[b] += term_cont;

      for (std::size_t gi = 0; gi < G; ++gi) {
        const SampleGrid coarse(fine_grid.T, n_list[gi]);
        const auto samples = integrate_and_dump(y, coarse);
        double r2_m = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
          const double r2 = rho2(drift, drift.messages[j], samples, coarse);
          if (static_cast<int>(j) == mi) r2_m = r2;
          log_mix[j] = std::log(drift.prior[j]) - r2;
        }
        const double term_samp = -r2_m - log_sum_exp(log_mix, clips[b]);
        sum_samp[gi][b] += term_samp;
        sum_gap[gi][b] += term_cont - term_samp;
      }
      ++counts[b];
    }
  });

  FeedbackMIResult out;
  out.n_list = n_list;
  const MeanSE cont = batch_mean_se(sum_cont, counts);
  out.continuous = {cont.mean, MIEstimate::Method::MonteCarlo, trials, cont.std_error};
  for (std::size_t gi = 0; gi < G; ++gi) {
    const MeanSE s = batch_mean_se(sum_samp[gi], counts);
    out.sampled.push_back({s.mean, MIEstimate::Method::MonteCarlo, trials, s.std_error});
    const MeanSE gp = batch_mean_se(sum_gap[gi], counts);
    out.gap.push_back(gp.mean);
    out.gap_std_error.push_back(gp.std_error);
  }
  for (long c : clips) out.clip_count += c;
  return out;
}

MIEstimate mi_feedback_sampled(const DriftSpec& drift, const SampleGrid& coarse,
                               int fine_N, long trials, std::uint64_t seed, int workers) {
  const SampleGrid fine(coarse.T, fine_N);
  const auto res = feedback_mi_crn(drift, fine, {coarse.n}, trials, seed, workers);
  return res.sampled[0];
}

MIEstimate mi_feedback_continuous(const DriftSpec& drift, const SampleGrid& fine_grid,
                                  long trials, std::uint64_t seed, int workers) {
  const auto res = feedback_mi_crn(drift, fine_grid, {fine_grid.n}, trials, seed, workers);
  return res.continuous;
}

MeanSE novikov_check(const DriftSpec& drift, const SampleGrid& fine_grid,
                     long trials, std::uint64_t seed, int workers) {
  std::vector<long> counts(kBatches, 0);
  std::vector<double> sums(kBatches, 0.0);
  run_batches(seed, trials, workers, [&](int b, long n_trials, RngStream& rng) {
    const double h = fine_grid.dt();
    for (long t = 0; t < n_trials; ++t) {
      const int mi = draw_message_index(drift, rng);
      const double m = drift.messages[mi];
      PathRecord noise = brownian(fine_grid, rng);
      // antithetic pair (B, -B): same mean, much lighter right tail
      double pair_sum = 0.0;
      for (int rep = 0; rep < 2; ++rep) {
        const PathRecord y = transmit_feedback_with_noise(drift, m, noise);
        double ito = 0.0, quad = 0.0;
        for (int k = 0; k < fine_grid.n; ++k) {
          const PathView prefix(y.values.data(), k + 1, h);
          const double g = drift.g(fine_grid.time(k), m, prefix);
          ito += g * (noise.values[k + 1] - noise.values[k]);
          quad += g * g;
        }
        const double expo = std::clamp(-ito - 0.5 * quad * h, -kExpClip, kExpClip);
        pair_sum += std::exp(expo);
        for (double& v : noise.values) v = -v;
      }
      sums[b] += 0.5 * pair_sum;
      ++counts[b];
    }
  });
  return batch_mean_se(sums, counts);
}

MeanSE sup_norm_moment_check(const DriftSpec& drift, const SampleGrid& fine_grid,
                             double eps, long trials, std::uint64_t seed, int workers) {
  if (!(eps > 0.0)) throw std::invalid_argument("sup_norm_moment_check: eps must be > 0");
  std::vector<long> counts(kBatches, 0);
  std::vector<double> sums(kBatches, 0.0);
  std::atomic<bool> overflow{false};
  run_batches(seed, trials, workers, [&](int b, long n_trials, RngStream& rng) {
    for (long t = 0; t < n_trials; ++t) {
      const int mi = draw_message_index(drift, rng);
      const PathRecord y = transmit_feedback(drift, drift.messages[mi], fine_grid, rng).y;
      const double sup = PathView(y).sup_abs();
      const double expo = eps * sup * sup;
      if (expo > kExpClip) overflow = true;
      sums[b] += std::exp(std::min(expo, kExpClip));
      ++counts[b];
    }
  });
  if (overflow)
    throw std::runtime_error("sup_norm_moment_check: eps too large for this horizon");
  return batch_mean_se(sums, counts);
}

}  // namespace ctlab
