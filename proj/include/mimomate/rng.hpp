#ifndef MIMOMATE_RNG_HPP
#define MIMOMATE_RNG_HPP

#include <cstdint>
#include <random>

namespace mimomate {

/// Seeded random source. One instance per simulation run; every random
/// decision in a run draws from the same stream so that a seed fully
/// determines the outcome. Not safe to share across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }

  /// Uniform real in [lo, hi).
  double uniform_real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  /// Standard normal draw.
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  /// Exponential draw with the given rate (events per unit time).
  double exponential(double rate) {
    return std::exponential_distribution<double>(rate)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mimomate

#endif  // MIMOMATE_RNG_HPP
