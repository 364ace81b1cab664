#pragma once
// Hot inner loops shared by the cascade engine, the inner regression, and the
// statistics estimators. Every kernel has a scalar reference implementation
// and (on x86-64) an AVX2+FMA variant selected at runtime; the two are
// equivalence-tested against each other.
//
// Complex data is stored interleaved (re, im). Because the cascade
// coefficients are real scalars, a complex biquad chain is just a real one
// over twice as many lanes.

#include <complex>
#include <cstddef>

namespace wpmr::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2, neon };

Isa active();
const char* isa_name(Isa isa);
// Test hook; also honors WPMR_SIMD=scalar|avx2 at startup.
void force(Isa isa);

struct BiquadStage {
  double alpha = 0.0;
  double beta = 0.0;
};

// Serial chain of second-order sections z_i[n] = in - alpha_i z_i[n-1]
// - beta_i z_i[n-2], applied in place frame by frame over `width` lanes.
// An optional first-order front stage z[n] = in - alpha0 z[n-1] runs before
// the biquads. `hist1` holds per-lane one-step history for the front stage;
// `hist` holds [stage][2][width] with slot 0 = z^{n-1}, slot 1 = z^{n-2}.
// Histories are updated so the call can be resumed frame by frame.
void cascade_chain(double* io, long n_frames, int width,
                   const BiquadStage* stages, int n_stages,
                   const double* lin_alpha, double* hist1, double* hist);

// sum_i conj(a[i]) * b[i] over n complex values (2n doubles each).
cplx dotc(const double* a, const double* b, long n);

// Upper-triangular Hermitian rank-1 update G[i,j] += conj(v[i]) v[j] for
// j >= i; G is a full row-major complex P x P matrix (2*P*P doubles).
void herk_rank1_upper(double* gram, const double* v, int p);

// rhs[i] += conj(v[i]) * t over p complex entries.
void axpy_conj(double* rhs, const double* v, cplx t, int p);

// out[i] += a[i] * b[i] (complex pointwise), n complex values.
void cmul_accum(double* out, const double* a, const double* b, long n);

}  // namespace wpmr::kernels
