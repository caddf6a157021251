// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RASM_RNG_HPP
#define RASM_RNG_HPP

#include <cstdint>

namespace rasm {

namespace detail {
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Counter-based generator: every output is a pure function of
// (seed, stream, counter), so substreams can be split without sharing state
// and results are identical across platforms and schedulers.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  // Derive an independent substream; does not disturb this generator.
  CounterRng split(std::uint64_t substream) const {
    return CounterRng(seed_, detail::mix64(stream_ ^ detail::mix64(substream)));
  }

  std::uint64_t next_u64() {
    return detail::mix64(seed_ ^ detail::mix64(stream_ ^ detail::mix64(counter_++)));
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<std::int64_t>(
                    next_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Uniform real in [lo, hi].
  double next_real(double lo, double hi) {
    if (hi <= lo) return lo;
    return lo + next_double() * (hi - lo);
  }

  bool next_bool(double p_true) { return next_double() < p_true; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace rasm

#endif  // RASM_RNG_HPP
