// Reference kernels. These define the semantics; the SIMD lanes must match
// them to rounding.

#include "kernels_impl.hpp"

namespace wpmr::kernels {
namespace {

void cascade_chain_scalar(double* io, long n_frames, int width,
                          const BiquadStage* stages, int n_stages,
                          const double* lin_alpha, double* hist1,
                          double* hist) {
  for (long n = 0; n < n_frames; ++n) {
    double* frame = io + static_cast<size_t>(n) * width;
    if (lin_alpha) {
      const double a0 = *lin_alpha;
      for (int j = 0; j < width; ++j) {
        const double z = frame[j] - a0 * hist1[j];
        hist1[j] = z;
        frame[j] = z;
      }
    }
    for (int s = 0; s < n_stages; ++s) {
      double* h1 = hist + (2 * s + 0) * static_cast<size_t>(width);
      double* h2 = hist + (2 * s + 1) * static_cast<size_t>(width);
      const double a = stages[s].alpha;
      const double b = stages[s].beta;
      for (int j = 0; j < width; ++j) {
        const double z = frame[j] - a * h1[j] - b * h2[j];
        h2[j] = h1[j];
        h1[j] = z;
        frame[j] = z;
      }
    }
  }
}

cplx dotc_scalar(const double* a, const double* b, long n) {
  double re = 0.0, im = 0.0;
  for (long i = 0; i < n; ++i) {
    const double ar = a[2 * i], ai = a[2 * i + 1];
    const double br = b[2 * i], bi = b[2 * i + 1];
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

void herk_rank1_upper_scalar(double* gram, const double* v, int p) {
  for (int i = 0; i < p; ++i) {
    const double ar = v[2 * i], ai = v[2 * i + 1];
    double* row = gram + 2 * static_cast<size_t>(i) * p;
    for (int j = i; j < p; ++j) {
      const double br = v[2 * j], bi = v[2 * j + 1];
      row[2 * j] += ar * br + ai * bi;
      row[2 * j + 1] += ar * bi - ai * br;
    }
  }
}

void axpy_conj_scalar(double* rhs, const double* v, cplx t, int p) {
  const double tr = t.real(), ti = t.imag();
  for (int i = 0; i < p; ++i) {
    const double ar = v[2 * i], ai = v[2 * i + 1];
    rhs[2 * i] += ar * tr + ai * ti;
    rhs[2 * i + 1] += ar * ti - ai * tr;
  }
}

void cmul_accum_scalar(double* out, const double* a, const double* b, long n) {
  for (long i = 0; i < n; ++i) {
    const double ar = a[2 * i], ai = a[2 * i + 1];
    const double br = b[2 * i], bi = b[2 * i + 1];
    out[2 * i] += ar * br - ai * bi;
    out[2 * i + 1] += ar * bi + ai * br;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {
      cascade_chain_scalar, dotc_scalar, herk_rank1_upper_scalar,
      axpy_conj_scalar,     cmul_accum_scalar,
  };
  return table;
}

}  // namespace wpmr::kernels
