#pragma once

#include <cstdint>
#include <random>

namespace anyonca {

/// Deterministic random stream backing a simulation instance.
///
/// All randomness used by a SystemState flows through one Rng so that
/// (seed, config) -> trajectory is reproducible bit-for-bit. Only the
/// mt19937_64 output sequence (which the standard pins down exactly) is
/// consumed; std::shuffle and std::*_distribution are avoided because their
/// draw patterns are implementation-defined.
class Rng {
 public:
  Rng() : engine_(0) {}
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Rejection-sampled, exact.
  uint64_t below(uint64_t n) {
    if (n <= 1) {
      return 0;
    }
    uint64_t mask = ~uint64_t{0} >> __builtin_clzll((n - 1) | 1);
    for (;;) {
      uint64_t v = engine_() & mask;
      if (v < n) {
        return v;
      }
    }
  }

  /// In-place Fisher-Yates shuffle with an explicit draw order.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace anyonca
