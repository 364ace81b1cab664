#pragma once
// Splittable deterministic RNG streams. A stream is identified by a base
// seed plus salt words; identical (seed, salts) always produce the same
// draws bit-for-bit, and independent salts give independent streams (used
// for per-trajectory / per-ensemble-member splitting).

#include <complex>
#include <cstdint>
#include <random>

namespace wpmr {

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : RngStream(seed, 0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t salt0, std::uint64_t salt1 = 0);

  // Uniform on (0, 1].
  double uniform_open();
  // Uniform on [0, 1).
  double uniform();
  // Standard normal via Box-Muller; draws exactly two uniforms per pair.
  double normal();
  // Complex with independent N(0,1) real and imaginary parts (E|z|^2 = 2).
  std::complex<double> complex_normal();
  // Complex with Re, Im independent of variance 1/2 (E|z|^2 = 1).
  std::complex<double> complex_standard();

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace wpmr
