#pragma once
// Correlation functions and matrix-valued power spectra with the convention
// S(theta) = sum_n C(n) e^{i n theta}, C(n) = cov(u_n, conj(u_0)).

#include <string>

#include "wpmr/common.hpp"

namespace wpmr {

struct SpectrumEstimate {
  std::vector<double> freqs;   // M angles in [0, 2 pi)
  std::vector<cplx> values;    // M * d * d, row-major per angle
  int dim = 0;
  long segment_length = 0;
  int n_segments = 0;
  double overlap = 0.0;
  std::string window;

  long grid() const { return static_cast<long>(freqs.size()); }
  std::span<const cplx> at(long j) const {
    const size_t dd = static_cast<size_t>(dim) * dim;
    return {values.data() + j * dd, dd};
  }
  std::span<cplx> at(long j) {
    const size_t dd = static_cast<size_t>(dim) * dim;
    return {values.data() + j * dd, dd};
  }
};

// C(k)(a,b) = (1/(N-k)) sum_n (u_{n+k}-mean)_a conj((u_n-mean)_b),
// k = 0..max_lag; the result holds (max_lag+1) d x d matrices.
std::vector<cplx> acf(const ComplexSeries& u, int max_lag);

// Two-sided cross covariance C_uv(k) = cov(u_{n+k}, conj(v_n)) for
// k = -max_lag..max_lag; result holds (2*max_lag+1) d_u x d_v matrices.
std::vector<cplx> ccf(const ComplexSeries& u, const ComplexSeries& v,
                      int max_lag);

struct WelchOptions {
  int n_segments = 64;     // target count; reduced when the series is short
  double overlap = 0.5;
  std::string window = "hann";
};

// Welch-averaged matrix periodogram of the mean-removed series.
SpectrumEstimate power_spectrum(const ComplexSeries& u,
                                const WelchOptions& opt = {});

// Hermitian square root per angle: f(theta_j) f(theta_j)^* = S(theta_j)
// after symmetrization and clipping of tiny negative eigenvalues.
std::vector<cplx> spectral_factor(const SpectrumEstimate& s);

// Circular linear interpolation of a spectrum (or factor array) onto an
// M-point equispaced grid.
std::vector<cplx> resample_spectrum(std::span<const cplx> values, long grid_in,
                                    int dim, long grid_out);

}  // namespace wpmr
