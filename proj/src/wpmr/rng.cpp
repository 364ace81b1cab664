#include "wpmr/rng.hpp"

#include <cmath>
#include <numbers>

namespace wpmr {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t salt0,
                     std::uint64_t salt1) {
  std::uint64_t s = seed;
  std::uint64_t mixed = splitmix64(s);
  s ^= salt0 * 0x9e3779b97f4a7c15ULL;
  mixed ^= splitmix64(s);
  s ^= salt1 * 0xc2b2ae3d27d4eb4fULL;
  mixed ^= splitmix64(s);
  engine_.seed(mixed);
}

double RngStream::uniform_open() {
  // 53-bit mantissa, shifted into (0, 1].
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  cached_ = mag * std::sin(ang);
  has_cached_ = true;
  return mag * std::cos(ang);
}

std::complex<double> RngStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

std::complex<double> RngStream::complex_standard() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

}  // namespace wpmr
