#pragma once
// Comparison suite: energy spectra, marginals, forecast skill (RMSE / ANCR)
// and the transfer-function spectral-consistency diagnostic.

#include "wpmr/core.hpp"
#include "wpmr/predictor_series.hpp"
#include "wpmr/spectral.hpp"

namespace wpmr {

struct EnergySpectrum {
  std::vector<double> mean;  // <|u_k|^2> per mode
  std::vector<double> se;    // jackknife standard error over time blocks
};
EnergySpectrum energy_spectrum(const ComplexSeries& u, int n_blocks = 20);

struct Histogram {
  double lo = 0.0, hi = 0.0;
  std::vector<double> density;  // normalized: sum(density) * bin_width = 1
  std::vector<double> se;       // multinomial error bars
  long n_samples = 0;
  double bin_width() const {
    return (hi - lo) / static_cast<double>(density.size());
  }
};
// Histogram density of Re(u[component]).
Histogram marginal_density(const ComplexSeries& u, int component, int n_bins);

// RMSE(tau_n) over matched truth/forecast pieces: root mean square over
// pieces of |Re v - Re mean-forecast| (Euclidean over components).
std::vector<double> rmse_curve(const std::vector<ComplexSeries>& truth,
                               const std::vector<ComplexSeries>& forecast);

struct AncrCurve {
  std::vector<double> value;  // mean anomaly correlation per lead
  long skipped = 0;           // degenerate (zero-anomaly) piece-leads
};
AncrCurve ancr_curve(const std::vector<ComplexSeries>& truth,
                     const std::vector<ComplexSeries>& forecast,
                     std::span<const cplx> climatology);

// Per-frequency defect of the power-spectrum identity
//   S_xx = H^T S_pp conj(H) + e^{i t} H^T S_pe + e^{-i t} S_ep conj(H) + S_ee
// evaluated per output row with H = B/A on the unit circle; reported as
// |defect| normalized by the band average of S_xx.
struct ConsistencyReport {
  std::vector<double> freqs;
  std::vector<std::vector<double>> defect_rel;  // [row][freq]
  std::vector<double> band_avg;                 // [row]
  bool near_pole = false;  // A(e^{-i theta}) vanished at a grid point
};
ConsistencyReport spectral_consistency(const CascadeModel& model,
                                       const PredictorSeries& psi,
                                       const ComplexSeries& x,
                                       const ComplexSeries& residuals,
                                       const WelchOptions& opt = {},
                                       const ComplexSeries* forcing = nullptr);

}  // namespace wpmr
