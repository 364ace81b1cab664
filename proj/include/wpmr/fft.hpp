#pragma once
// Thin RAII wrappers over FFTW. Plans are created with FFTW_ESTIMATE so the
// chosen algorithm (and hence rounding) is reproducible run to run. Plan
// creation is serialized internally; execution is thread-safe per object.

#include <complex>
#include <vector>

namespace wpmr {

// In-place-capable complex transform of fixed size.
class ComplexFft {
 public:
  explicit ComplexFft(long n);
  ~ComplexFft();
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  long size() const { return n_; }
  // out[k] = sum_j in[j] e^{-2pi i jk / n}
  void forward(const std::complex<double>* in, std::complex<double>* out);
  // out[k] = sum_j in[j] e^{+2pi i jk / n}  (unnormalized)
  void backward(const std::complex<double>* in, std::complex<double>* out);

 private:
  long n_;
  void* plan_fwd_;
  void* plan_bwd_;
  std::vector<std::complex<double>> buf_in_, buf_out_;
};

// Real <-> half-complex transforms of fixed size (r2c / c2r).
class RealFft {
 public:
  explicit RealFft(long n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  long size() const { return n_; }
  long spectrum_size() const { return n_ / 2 + 1; }
  // spectrum[k] = sum_j in[j] e^{-2pi i jk / n}, k = 0..n/2
  void forward(const double* in, std::complex<double>* spectrum);
  // out[j] = sum_k ... inverse of forward, unnormalized (scale by 1/n).
  // Destroys the spectrum buffer contents.
  void backward(std::complex<double>* spectrum, double* out);

 private:
  long n_;
  void* plan_fwd_;
  void* plan_bwd_;
  std::vector<double> rbuf_;
  std::vector<std::complex<double>> cbuf_;
};

// Smallest 2^a * 3^b >= n (good FFTW sizes for the padded convolutions).
long next_fast_fft_size(long n);

}  // namespace wpmr
