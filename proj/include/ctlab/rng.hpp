#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace ctlab {

// Philox4x32-10 counter-based generator (Random123 constants).
// A stream is identified by (seed, stream_id); distinct ids give
// statistically independent streams, so Monte Carlo trials can be
// partitioned deterministically across workers.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0, 0, static_cast<std::uint32_t>(stream_id),
             static_cast<std::uint32_t>(stream_id >> 32)} {}

  // uniform on (0, 1), 53-bit resolution, never 0 or 1
  double uniform() {
    const std::uint64_t bits = next_u64();
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
  }

  // standard normal via Box-Muller; second value cached
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  std::uint64_t next_u64() {
    if (buf_pos_ >= 4) refill();
    const std::uint32_t lo = buf_[buf_pos_++];
    const std::uint32_t hi = (buf_pos_ < 4) ? buf_[buf_pos_++] : (refill(), buf_[buf_pos_++]);
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
  }

 private:
  static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
  }

  void refill() {
    std::array<std::uint32_t, 4> x = ctr_;
    std::uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      std::uint32_t hi0, lo0, hi1, lo1;
      mulhilo(0xD2511F53u, x[0], hi0, lo0);
      mulhilo(0xCD9E8D57u, x[2], hi1, lo1);
      x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buf_ = x;
    buf_pos_ = 0;
    if (++ctr_[0] == 0) ++ctr_[1];  // 64-bit counter within the stream
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 4;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace ctlab
