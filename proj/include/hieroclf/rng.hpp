#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace hieroclf {

/// Seeded generator with self-contained draw algorithms. std::shuffle and the
/// std distributions are implementation-defined, so splits, initialisation and
/// epoch shuffling go through this wrapper to stay reproducible everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  /// Bernoulli draw.
  bool chance(double p) { return uniform() < p; }

  /// Fisher-Yates, high index down.
  template <class T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hieroclf
