#include "wpmr/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"

namespace wpmr::kernels {
namespace {

struct Dispatch {
  Isa isa;
  const KernelTable* table;
};

Dispatch pick_default() {
  if (const char* env = std::getenv("WPMR_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return {Isa::scalar, &scalar_table()};
#if WPMR_HAVE_AVX2_LANE
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2_fma())
      return {Isa::avx2, &avx2_table()};
#endif
  }
#if WPMR_HAVE_AVX2_LANE
  if (cpu_has_avx2_fma()) return {Isa::avx2, &avx2_table()};
#endif
  return {Isa::scalar, &scalar_table()};
}

Dispatch& dispatch() {
  static Dispatch d = pick_default();
  return d;
}

}  // namespace

Isa active() { return dispatch().isa; }

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

void force(Isa isa) {
  if (isa == Isa::scalar) {
    dispatch() = {Isa::scalar, &scalar_table()};
    return;
  }
#if WPMR_HAVE_AVX2_LANE
  if (isa == Isa::avx2 && cpu_has_avx2_fma()) {
    dispatch() = {Isa::avx2, &avx2_table()};
    return;
  }
#endif
  dispatch() = {Isa::scalar, &scalar_table()};
}

void cascade_chain(double* io, long n_frames, int width,
                   const BiquadStage* stages, int n_stages,
                   const double* lin_alpha, double* hist1, double* hist) {
  dispatch().table->cascade_chain(io, n_frames, width, stages, n_stages,
                                  lin_alpha, hist1, hist);
}

cplx dotc(const double* a, const double* b, long n) {
  return dispatch().table->dotc(a, b, n);
}

void herk_rank1_upper(double* gram, const double* v, int p) {
  dispatch().table->herk_rank1_upper(gram, v, p);
}

void axpy_conj(double* rhs, const double* v, cplx t, int p) {
  dispatch().table->axpy_conj(rhs, v, t, p);
}

void cmul_accum(double* out, const double* a, const double* b, long n) {
  dispatch().table->cmul_accum(out, a, b, n);
}

}  // namespace wpmr::kernels
