#pragma once
// Predictor matrices Psi(x_n) in the column-owned representation: every
// column holds exactly one nonzero entry whose row is fixed by the basis
// (Eq.-style per-mode coefficient structure), so a frame is a length-m value
// vector plus a static column -> row map.

#include <string>

#include "wpmr/common.hpp"

namespace wpmr {

struct PredictorLayout {
  int state_dim = 0;            // d
  int n_columns = 0;            // m
  std::vector<int> column_row;  // size m, owning output row per column
  std::string basis_id;
  int version = 1;

  void validate() const {
    if (state_dim < 1 || n_columns < 1 ||
        column_row.size() != static_cast<size_t>(n_columns))
      throw usage_error("PredictorLayout: inconsistent dimensions");
    for (int r : column_row)
      if (r < 0 || r >= state_dim)
        throw usage_error("PredictorLayout: column row out of range");
  }
};

// Evaluated predictor frames along a trajectory. Bases whose frames depend
// on the usage age only through a fixed per-column factor store one shared
// array plus per-age scale vectors; otherwise one array per age.
struct PredictorSeries {
  PredictorLayout layout;
  long n = 0;
  int max_age = 0;

  // Shared storage: n * m values; age_scales[age] has m entries (empty
  // age_scales means all ones).
  std::vector<cplx> values;
  std::vector<std::vector<double>> age_scales;

  // Per-age storage (used instead of `values` when non-empty).
  std::vector<std::vector<cplx>> values_by_age;

  bool age_uniform() const { return values_by_age.empty(); }
  std::span<const cplx> frame(long t, int age) const {
    const auto* base = age_uniform() ? values.data()
                                     : values_by_age.at(age).data();
    return {base + static_cast<size_t>(t) * layout.n_columns,
            static_cast<size_t>(layout.n_columns)};
  }
  // Per-column scale vector for the given age; empty means all ones.
  std::span<const double> scale_span(int age) const {
    if (!age_uniform() || age_scales.empty()) return {};
    return age_scales.at(age);
  }
};

// out[row(c)] += scale(c, age) * frame[c] * weights[c]
void apply_weights(const PredictorLayout& layout, std::span<const cplx> frame,
                   std::span<const double> scale_or_empty,
                   std::span<const cplx> weights, std::span<cplx> out);

}  // namespace wpmr
