#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ink {

/// Seeded random source with self-contained variate transforms.
///
/// The standard distributions are implementation-defined, so identical seeds
/// can produce different streams across standard libraries. Generators here
/// derive every variate from raw mt19937_64 words, which keeps synthetic
/// fixtures byte-stable wherever the library is built.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // 1-u1 keeps the argument of log strictly positive.
    double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    double theta = 2.0 * kPi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Uniform integer in [0, n). Rejection-free modulo bias is negligible for
  /// the small n used here, but use Lemire-style rejection anyway.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  std::uint64_t raw() { return engine_(); }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ink
