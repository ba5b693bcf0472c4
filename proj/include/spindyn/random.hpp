#ifndef SPINDYN_RANDOM_HPP
#define SPINDYN_RANDOM_HPP

// Seeded sampling with a bit-exact double construction, so a seed produces
// the same test points with any standard library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "spindyn/tensor.hpp"

namespace spindyn {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal by Box-Muller (no std::normal_distribution, whose
  /// algorithm is implementation-defined).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform direction on the unit sphere.
  Vec3 direction() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * std::numbers::pi);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {s * std::cos(phi), s * std::sin(phi), z};
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// Explicit seed if given, else SPINDYN_SEED, else the default.
inline std::uint64_t resolve_seed(std::optional<std::uint64_t> explicit_seed) {
  if (explicit_seed) return *explicit_seed;
  if (const char* env = std::getenv("SPINDYN_SEED")) {
    try {
      std::size_t pos = 0;
      const std::string s(env);
      const unsigned long long v = std::stoull(s, &pos, 0);
      if (pos != s.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("SPINDYN_SEED is not an unsigned integer: " + std::string(env));
    }
  }
  return kDefaultSeed;
}

}  // namespace spindyn

#endif  // SPINDYN_RANDOM_HPP
