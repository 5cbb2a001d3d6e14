#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace netpublic {

/// Portable draws on top of mt19937_64. std::uniform_real_distribution is
/// implementation-defined, so doubles are built from the top 53 bits directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    double u = 0.0;
    while (u == 0.0) u = uniform();
    return u;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    // Lemire-style rejection keeps the result unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r = engine_();
    while (r >= limit) r = engine_();
    return r % bound;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace netpublic
