#include "wpmr/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "wpmr/common.hpp"

namespace wpmr {
namespace {

// FFTW plan creation is not thread-safe.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

ComplexFft::ComplexFft(long n) : n_(n), buf_in_(n), buf_out_(n) {
  if (n < 1) throw usage_error("ComplexFft: size >= 1");
  std::lock_guard<std::mutex> lock(plan_mutex());
  plan_fwd_ = fftw_plan_dft_1d(
      static_cast<int>(n), reinterpret_cast<fftw_complex*>(buf_in_.data()),
      reinterpret_cast<fftw_complex*>(buf_out_.data()), FFTW_FORWARD,
      FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_1d(
      static_cast<int>(n), reinterpret_cast<fftw_complex*>(buf_in_.data()),
      reinterpret_cast<fftw_complex*>(buf_out_.data()), FFTW_BACKWARD,
      FFTW_ESTIMATE);
}

ComplexFft::~ComplexFft() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void ComplexFft::forward(const std::complex<double>* in,
                         std::complex<double>* out) {
  std::memcpy(buf_in_.data(), in, sizeof(std::complex<double>) * n_);
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  std::memcpy(out, buf_out_.data(), sizeof(std::complex<double>) * n_);
}

void ComplexFft::backward(const std::complex<double>* in,
                          std::complex<double>* out) {
  std::memcpy(buf_in_.data(), in, sizeof(std::complex<double>) * n_);
  fftw_execute(static_cast<fftw_plan>(plan_bwd_));
  std::memcpy(out, buf_out_.data(), sizeof(std::complex<double>) * n_);
}

RealFft::RealFft(long n) : n_(n), rbuf_(n), cbuf_(n / 2 + 1) {
  if (n < 2) throw usage_error("RealFft: size >= 2");
  std::lock_guard<std::mutex> lock(plan_mutex());
  plan_fwd_ = fftw_plan_dft_r2c_1d(
      static_cast<int>(n), rbuf_.data(),
      reinterpret_cast<fftw_complex*>(cbuf_.data()), FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_c2r_1d(
      static_cast<int>(n), reinterpret_cast<fftw_complex*>(cbuf_.data()),
      rbuf_.data(), FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void RealFft::forward(const double* in, std::complex<double>* spectrum) {
  std::memcpy(rbuf_.data(), in, sizeof(double) * n_);
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  std::memcpy(spectrum, cbuf_.data(),
              sizeof(std::complex<double>) * spectrum_size());
}

void RealFft::backward(std::complex<double>* spectrum, double* out) {
  std::memcpy(cbuf_.data(), spectrum,
              sizeof(std::complex<double>) * spectrum_size());
  fftw_execute(static_cast<fftw_plan>(plan_bwd_));
  std::memcpy(out, rbuf_.data(), sizeof(double) * n_);
}

long next_fast_fft_size(long n) {
  if (n < 2) return 2;
  long best = -1;
  for (long p2 = 1; p2 < 4 * n; p2 *= 2) {
    long v = p2;
    while (v < n) v *= 3;
    // v = p2 * 3^b is the smallest such >= n for this p2
    if (best < 0 || v < best) best = v;
    if (p2 >= n) break;
  }
  return best;
}

}  // namespace wpmr
