#pragma once
// Per-ISA kernel entry points. Each TU provides one lane; kernels.cpp wires
// the dispatch table.

#include "wpmr/kernels.hpp"

namespace wpmr::kernels {

struct KernelTable {
  void (*cascade_chain)(double*, long, int, const BiquadStage*, int,
                        const double*, double*, double*);
  cplx (*dotc)(const double*, const double*, long);
  void (*herk_rank1_upper)(double*, const double*, int);
  void (*axpy_conj)(double*, const double*, cplx, int);
  void (*cmul_accum)(double*, const double*, const double*, long);
};

const KernelTable& scalar_table();

#if defined(__x86_64__) || defined(_M_X64)
#define WPMR_HAVE_AVX2_LANE 1
const KernelTable& avx2_table();
bool cpu_has_avx2_fma();
#else
#define WPMR_HAVE_AVX2_LANE 0
#endif

}  // namespace wpmr::kernels
