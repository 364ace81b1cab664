#include "wpmr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wpmr {

EnergySpectrum energy_spectrum(const ComplexSeries& u, int n_blocks) {
  const long n = u.n();
  const int d = u.dim;
  n_blocks = static_cast<int>(std::clamp<long>(n_blocks, 2, n));
  EnergySpectrum out;
  out.mean.assign(d, 0.0);
  out.se.assign(d, 0.0);
  std::vector<std::vector<double>> block(n_blocks,
                                         std::vector<double>(d, 0.0));
  std::vector<long> cnt(n_blocks, 0);
  for (long t = 0; t < n; ++t) {
    const int b = static_cast<int>(t * n_blocks / n);
    ++cnt[b];
    for (int k = 0; k < d; ++k) block[b][k] += std::norm(u.at(t, k));
  }
  for (int b = 0; b < n_blocks; ++b)
    for (int k = 0; k < d; ++k) {
      out.mean[k] += block[b][k];
      block[b][k] /= static_cast<double>(cnt[b]);
    }
  for (int k = 0; k < d; ++k) out.mean[k] /= static_cast<double>(n);
  // Jackknife over contiguous blocks.
  for (int k = 0; k < d; ++k) {
    std::vector<double> loo(n_blocks);
    double loo_mean = 0.0;
    for (int b = 0; b < n_blocks; ++b) {
      double sum = 0.0;
      long c = 0;
      for (int b2 = 0; b2 < n_blocks; ++b2) {
        if (b2 == b) continue;
        sum += block[b2][k] * cnt[b2];
        c += cnt[b2];
      }
      loo[b] = sum / static_cast<double>(c);
      loo_mean += loo[b];
    }
    loo_mean /= n_blocks;
    double var = 0.0;
    for (int b = 0; b < n_blocks; ++b)
      var += (loo[b] - loo_mean) * (loo[b] - loo_mean);
    out.se[k] = std::sqrt(var * (n_blocks - 1) / static_cast<double>(n_blocks));
  }
  return out;
}

Histogram marginal_density(const ComplexSeries& u, int component, int n_bins) {
  if (n_bins < 10) throw usage_error("marginal_density: n_bins >= 10");
  if (component < 0 || component >= u.dim)
    throw usage_error("marginal_density: component out of range");
  const long n = u.n();
  Histogram h;
  h.n_samples = n;
  double lo = u.at(0, component).real(), hi = lo;
  for (long t = 0; t < n; ++t) {
    const double v = u.at(t, component).real();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) hi = lo + 1.0;  // constant series: one occupied bin
  h.lo = lo;
  h.hi = hi;
  std::vector<long> cnt(n_bins, 0);
  for (long t = 0; t < n; ++t) {
    const double v = u.at(t, component).real();
    long b = static_cast<long>((v - lo) / (hi - lo) * n_bins);
    b = std::clamp<long>(b, 0, n_bins - 1);
    ++cnt[b];
  }
  const double w = (hi - lo) / n_bins;
  h.density.resize(n_bins);
  h.se.resize(n_bins);
  for (int b = 0; b < n_bins; ++b) {
    const double ph = static_cast<double>(cnt[b]) / n;
    h.density[b] = ph / w;
    h.se[b] = std::sqrt(ph * (1.0 - ph) / n) / w;
  }
  return h;
}

std::vector<double> rmse_curve(const std::vector<ComplexSeries>& truth,
                               const std::vector<ComplexSeries>& forecast) {
  if (truth.empty() || truth.size() != forecast.size())
    throw usage_error("rmse_curve: piece count mismatch");
  const long len = truth[0].n();
  const int d = truth[0].dim;
  for (size_t i = 0; i < truth.size(); ++i)
    if (truth[i].n() != len || forecast[i].n() != len ||
        truth[i].dim != d || forecast[i].dim != d)
      throw usage_error("rmse_curve: piece shape mismatch");
  std::vector<double> out(len, 0.0);
  for (size_t i = 0; i < truth.size(); ++i)
    for (long t = 0; t < len; ++t) {
      double e2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const double dk = truth[i].at(t, k).real() - forecast[i].at(t, k).real();
        e2 += dk * dk;
      }
      out[t] += e2;
    }
  for (long t = 0; t < len; ++t)
    out[t] = std::sqrt(out[t] / static_cast<double>(truth.size()));
  return out;
}

AncrCurve ancr_curve(const std::vector<ComplexSeries>& truth,
                     const std::vector<ComplexSeries>& forecast,
                     std::span<const cplx> climatology) {
  if (truth.empty() || truth.size() != forecast.size())
    throw usage_error("ancr_curve: piece count mismatch");
  const long len = truth[0].n();
  const int d = truth[0].dim;
  if (climatology.size() != static_cast<size_t>(d))
    throw usage_error("ancr_curve: climatology dim mismatch");
  AncrCurve out;
  out.value.assign(len, 0.0);
  std::vector<long> valid(len, 0);
  for (size_t i = 0; i < truth.size(); ++i)
    for (long t = 0; t < len; ++t) {
      double dot = 0.0, nv = 0.0, nu = 0.0;
      for (int k = 0; k < d; ++k) {
        const double av = truth[i].at(t, k).real() - climatology[k].real();
        const double au = forecast[i].at(t, k).real() - climatology[k].real();
        dot += av * au;
        nv += av * av;
        nu += au * au;
      }
      if (nv <= 0.0 || nu <= 0.0) {
        ++out.skipped;
        continue;
      }
      out.value[t] += dot / std::sqrt(nv * nu);
      ++valid[t];
    }
  for (long t = 0; t < len; ++t)
    out.value[t] = valid[t] > 0
                       ? out.value[t] / static_cast<double>(valid[t])
                       : std::numeric_limits<double>::quiet_NaN();
  return out;
}

ConsistencyReport spectral_consistency(const CascadeModel& model,
                                       const PredictorSeries& psi,
                                       const ComplexSeries& x,
                                       const ComplexSeries& residuals,
                                       const WelchOptions& opt,
                                       const ComplexSeries* forcing) {
  if (!psi.age_uniform())
    throw usage_error("spectral_consistency: needs an age-uniform basis");
  const int p = model.orders.p, r = model.orders.r;
  const int d = model.state_dim;
  const long n = x.n();
  const long start = p + 1;
  const long len = n - start;
  if (len < 64) throw usage_error("spectral_consistency: series too short");
  const int q = model.forcing ? model.forcing->q : 0;
  const int kf = (model.forcing && forcing) ? model.forcing->dim : 0;

  std::vector<std::vector<int>> cols(d);
  for (int c = 0; c < psi.layout.n_columns; ++c)
    cols[psi.layout.column_row[c]].push_back(c);
  const auto a = expand_cascade(model.cascade);

  ConsistencyReport rep;
  rep.defect_rel.resize(d);
  rep.band_avg.assign(d, 0.0);
  for (int k = 0; k < d; ++k) {
    const int nk = static_cast<int>(cols[k].size());
    const int nf = k < kf ? 1 : 0;  // one w-bar column, combined transfer
    const int dim = nk + nf + 2;    // [psi cols | forcing | xi | x]
    ComplexSeries stacked(len, dim, x.dt);
    for (long t = 0; t < len; ++t) {
      const auto frame = psi.frame(start + t, 0);
      for (int c = 0; c < nk; ++c) stacked.at(t, c) = frame[cols[k][c]];
      if (nf) stacked.at(t, nk) = forcing->at(start + t, k);
      stacked.at(t, nk + nf) = residuals.at(start + t, k);
      stacked.at(t, nk + nf + 1) = x.at(start + t, k);
    }
    SpectrumEstimate s = power_spectrum(stacked, opt);
    const long grid = s.grid();
    if (k == 0) rep.freqs = s.freqs;
    auto& dk = rep.defect_rel[k];
    dk.resize(grid);
    double sxx_avg = 0.0, defect_avg = 0.0;
    for (long j = 0; j < grid; ++j) {
      const double theta = s.freqs[j];
      const cplx z = std::polar(1.0, -theta);
      cplx az = std::pow(z, p);
      for (int i = 0; i < p; ++i) az += a[i] * std::pow(z, i);
      if (std::abs(az) < 1e-10) rep.near_pole = true;
      // H entries: psi columns get B_c(z)/A(z) with the age scales folded
      // into B; forcing lags get z^{p+j}/A(z) times c_j.
      std::vector<cplx> h(nk + nf);
      for (int c = 0; c < nk; ++c) {
        cplx b(0.0, 0.0);
        for (int jj = 0; jj <= r; ++jj) {
          const auto sc = psi.scale_span(p - jj);
          const double scale = sc.empty() ? 1.0 : sc[cols[k][c]];
          b += model.weights[jj][cols[k][c]] * scale * std::pow(z, jj);
        }
        h[c] = b / az;
      }
      if (nf) {
        cplx bw(0.0, 0.0);
        for (int jj = 0; jj <= q; ++jj)
          bw += model.forcing->lag(jj)[k] * std::pow(z, p + jj);
        h[nk] = bw / az;
      }

      const auto row = s.at(j);
      const int sd = dim;
      auto S = [&](int aa, int bb) { return row[aa * sd + bb]; };
      cplx t1(0.0, 0.0), t2(0.0, 0.0), t3(0.0, 0.0);
      const int np = nk + nf;
      for (int aa = 0; aa < np; ++aa) {
        for (int bb = 0; bb < np; ++bb)
          t1 += h[aa] * S(aa, bb) * std::conj(h[bb]);
        t2 += h[aa] * S(aa, np);      // S_psi_xi
        t3 += S(np, aa) * std::conj(h[aa]);  // S_xi_psi
      }
      const cplx eip = std::polar(1.0, theta);
      const cplx rhs = t1 + eip * t2 + std::conj(eip) * t3 + S(np, np);
      const cplx sxx = S(np + 1, np + 1);
      dk[j] = std::abs(sxx - rhs);
      sxx_avg += std::abs(sxx);
      defect_avg += dk[j];
    }
    sxx_avg /= static_cast<double>(grid);
    for (auto& v : dk) v /= sxx_avg;
    rep.band_avg[k] = defect_avg / static_cast<double>(grid) / sxx_avg;
  }
  return rep;
}

}  // namespace wpmr
