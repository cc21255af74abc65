#pragma once

// Counter-based random streams.
//
// Philox4x32-10 keyed by a 64-bit seed. The 128-bit counter is split into a
// 64-bit stream id (high half) and a 64-bit block counter (low half), so every
// (seed, stream) pair addresses an independent sequence that does not depend on
// which thread consumes it or in which order.

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>

#include <Eigen/Core>

namespace qtl {

class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  explicit Philox4x32(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  result_type operator()() noexcept {
    if (pos_ == 4) {
      const Counter ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
      buf_ = bijection(ctr, key_);
      ++block_;
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  void discard(unsigned long long n) noexcept {
    while (n > 0 && pos_ < 4) { ++pos_; --n; }
    block_ += n / 4;
    n %= 4;
    while (n-- > 0) (*this)();
  }

  std::uint64_t stream() const noexcept { return stream_; }

  /// The raw Philox4x32-10 bijection.
  static Counter bijection(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Counter buf_{};
  int pos_ = 4;
};

/// Purposes of derived sub-streams; the tag occupies the top byte of the stream id.
enum class StreamTag : std::uint64_t {
  Interaction = 1,
  InitialState = 2,
  AccessibleSample = 3,
  Test = 0xff,
};

inline Philox4x32 make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index = 0) noexcept {
  constexpr std::uint64_t kIndexMask = (std::uint64_t{1} << 56) - 1;
  return Philox4x32(seed, (static_cast<std::uint64_t>(tag) << 56) | (index & kIndexMask));
}

/// Complex number with independent N(0,1) real and imaginary parts.
template <class Rng>
std::complex<double> complex_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

/// Haar-uniform unit vector in C^dim.
template <class Rng>
Eigen::VectorXcd haar_vector(Eigen::Index dim, Rng& rng) {
  Eigen::VectorXcd v(dim);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(k) = {re, im};
  }
  v.normalize();
  return v;
}

}  // namespace qtl
