#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace tsep {

/// Seeded generator used by every randomized routine.
///
/// Only the raw 64-bit engine output is consumed; the uniform and normal
/// transforms are spelled out here so streams are identical across standard
/// libraries.
class Rng {
 public:
  static constexpr std::string_view kName = "mt19937_64/box-muller/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  double normal();
  /// Standard complex normal: real and imaginary parts N(0, 1/2).
  std::complex<double> complex_normal();
  /// e^{iθ} with θ uniform on [0, 2π).
  std::complex<double> unit_complex();

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tsep
