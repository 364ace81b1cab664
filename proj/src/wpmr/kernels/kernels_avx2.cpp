// AVX2+FMA kernel lane. This TU is the only one compiled with -mavx2 -mfma;
// the dispatcher verifies cpuid support before routing here.

#include "kernels_impl.hpp"

#if WPMR_HAVE_AVX2_LANE

#include <immintrin.h>

namespace wpmr::kernels {
namespace {

void cascade_chain_avx2(double* io, long n_frames, int width,
                        const BiquadStage* stages, int n_stages,
                        const double* lin_alpha, double* hist1, double* hist) {
  const int w4 = width & ~3;
  for (long n = 0; n < n_frames; ++n) {
    double* frame = io + static_cast<size_t>(n) * width;
    if (lin_alpha) {
      const __m256d a0 = _mm256_set1_pd(*lin_alpha);
      int j = 0;
      for (; j < w4; j += 4) {
        __m256d z = _mm256_fnmadd_pd(a0, _mm256_loadu_pd(hist1 + j),
                                     _mm256_loadu_pd(frame + j));
        _mm256_storeu_pd(hist1 + j, z);
        _mm256_storeu_pd(frame + j, z);
      }
      for (; j < width; ++j) {
        const double z = frame[j] - *lin_alpha * hist1[j];
        hist1[j] = z;
        frame[j] = z;
      }
    }
    for (int s = 0; s < n_stages; ++s) {
      double* h1 = hist + (2 * s + 0) * static_cast<size_t>(width);
      double* h2 = hist + (2 * s + 1) * static_cast<size_t>(width);
      const __m256d av = _mm256_set1_pd(stages[s].alpha);
      const __m256d bv = _mm256_set1_pd(stages[s].beta);
      int j = 0;
      for (; j < w4; j += 4) {
        const __m256d z1 = _mm256_loadu_pd(h1 + j);
        const __m256d z2 = _mm256_loadu_pd(h2 + j);
        __m256d z = _mm256_fnmadd_pd(av, z1, _mm256_loadu_pd(frame + j));
        z = _mm256_fnmadd_pd(bv, z2, z);
        _mm256_storeu_pd(h2 + j, z1);
        _mm256_storeu_pd(h1 + j, z);
        _mm256_storeu_pd(frame + j, z);
      }
      for (; j < width; ++j) {
        const double z = frame[j] - stages[s].alpha * h1[j] -
                         stages[s].beta * h2[j];
        h2[j] = h1[j];
        h1[j] = z;
        frame[j] = z;
      }
    }
  }
}

cplx dotc_avx2(const double* a, const double* b, long n) {
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  long i = 0;
  const long n2 = n & ~1L;
  for (; i < n2; i += 2) {
    const __m256d va = _mm256_loadu_pd(a + 2 * i);
    const __m256d vb = _mm256_loadu_pd(b + 2 * i);
    // (ar*br, ai*bi, ...) sums to the real part over all lanes.
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);
    // (ar*bi, ai*br, ...) sums with signs (+,-,+,-) to the imaginary part.
    const __m256d vbs = _mm256_permute_pd(vb, 0b0101);
    acc_im = _mm256_fmadd_pd(va, vbs, acc_im);
  }
  alignas(32) double re4[4], im4[4];
  _mm256_store_pd(re4, acc_re);
  _mm256_store_pd(im4, acc_im);
  double re = re4[0] + re4[1] + re4[2] + re4[3];
  double im = im4[0] - im4[1] + im4[2] - im4[3];
  for (; i < n; ++i) {
    const double ar = a[2 * i], ai = a[2 * i + 1];
    const double br = b[2 * i], bi = b[2 * i + 1];
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

void herk_rank1_upper_avx2(double* gram, const double* v, int p) {
  for (int i = 0; i < p; ++i) {
    const __m256d va = _mm256_set1_pd(v[2 * i]);
    const __m256d vnb = _mm256_set1_pd(-v[2 * i + 1]);
    double* row = gram + 2 * static_cast<size_t>(i) * p;
    int j = i;
    for (; j + 2 <= p; j += 2) {
      const __m256d vj = _mm256_loadu_pd(v + 2 * j);
      const __m256d vjs = _mm256_permute_pd(vj, 0b0101);
      // even: a*c + b*d, odd: a*d - b*c  (conj(v_i) * v_j)
      const __m256d prod =
          _mm256_fmaddsub_pd(va, vj, _mm256_mul_pd(vnb, vjs));
      _mm256_storeu_pd(row + 2 * j,
                       _mm256_add_pd(_mm256_loadu_pd(row + 2 * j), prod));
    }
    for (; j < p; ++j) {
      const double ar = v[2 * i], ai = v[2 * i + 1];
      const double br = v[2 * j], bi = v[2 * j + 1];
      row[2 * j] += ar * br + ai * bi;
      row[2 * j + 1] += ar * bi - ai * br;
    }
  }
}

void axpy_conj_avx2(double* rhs, const double* v, cplx t, int p) {
  const __m256d t1 = _mm256_setr_pd(t.real(), t.imag(), t.real(), t.imag());
  const __m256d t2 = _mm256_setr_pd(t.imag(), -t.real(), t.imag(), -t.real());
  int i = 0;
  for (; i + 2 <= p; i += 2) {
    const __m256d vv = _mm256_loadu_pd(v + 2 * i);
    const __m256d vre = _mm256_movedup_pd(vv);
    const __m256d vim = _mm256_permute_pd(vv, 0b1111);
    const __m256d res = _mm256_fmadd_pd(vre, t1, _mm256_mul_pd(vim, t2));
    _mm256_storeu_pd(rhs + 2 * i,
                     _mm256_add_pd(_mm256_loadu_pd(rhs + 2 * i), res));
  }
  for (; i < p; ++i) {
    const double ar = v[2 * i], ai = v[2 * i + 1];
    rhs[2 * i] += ar * t.real() + ai * t.imag();
    rhs[2 * i + 1] += ar * t.imag() - ai * t.real();
  }
}

void cmul_accum_avx2(double* out, const double* a, const double* b, long n) {
  long i = 0;
  const long n2 = n & ~1L;
  for (; i < n2; i += 2) {
    const __m256d va = _mm256_loadu_pd(a + 2 * i);
    const __m256d vb = _mm256_loadu_pd(b + 2 * i);
    const __m256d are = _mm256_movedup_pd(va);
    const __m256d aim = _mm256_permute_pd(va, 0b1111);
    const __m256d vbs = _mm256_permute_pd(vb, 0b0101);
    const __m256d prod =
        _mm256_fmaddsub_pd(are, vb, _mm256_mul_pd(aim, vbs));
    _mm256_storeu_pd(out + 2 * i,
                     _mm256_add_pd(_mm256_loadu_pd(out + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double ar = a[2 * i], ai = a[2 * i + 1];
    const double br = b[2 * i], bi = b[2 * i + 1];
    out[2 * i] += ar * br - ai * bi;
    out[2 * i + 1] += ar * bi + ai * br;
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table = {
      cascade_chain_avx2, dotc_avx2, herk_rank1_upper_avx2,
      axpy_conj_avx2,     cmul_accum_avx2,
  };
  return table;
}

bool cpu_has_avx2_fma() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace wpmr::kernels

#endif  // WPMR_HAVE_AVX2_LANE
