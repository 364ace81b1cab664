#include "wpmr/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "wpmr/fft.hpp"
#include "wpmr/kernels.hpp"

namespace wpmr {
namespace {

std::vector<cplx> component_demeaned(const ComplexSeries& u) {
  const long n = u.n();
  const int d = u.dim;
  std::vector<cplx> mean(d, cplx(0.0, 0.0));
  for (long t = 0; t < n; ++t)
    for (int c = 0; c < d; ++c) mean[c] += u.at(t, c);
  for (int c = 0; c < d; ++c) mean[c] /= static_cast<double>(n);
  // Component-contiguous copy for the lag dot products.
  std::vector<cplx> out(static_cast<size_t>(n) * d);
  for (int c = 0; c < d; ++c)
    for (long t = 0; t < n; ++t)
      out[static_cast<size_t>(c) * n + t] = u.at(t, c) - mean[c];
  return out;
}

}  // namespace

std::vector<cplx> acf(const ComplexSeries& u, int max_lag) {
  const long n = u.n();
  const int d = u.dim;
  if (max_lag < 0 || max_lag >= n)
    throw usage_error("acf: need 0 <= max_lag < N");
  auto buf = component_demeaned(u);
  std::vector<cplx> out(static_cast<size_t>(max_lag + 1) * d * d);
  for (int k = 0; k <= max_lag; ++k)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        // sum_n u_{n+k,a} conj(u_{n,b}) = dotc(u_b, shifted u_a)
        const cplx s = kernels::dotc(
            as_reals(buf.data() + static_cast<size_t>(b) * n),
            as_reals(buf.data() + static_cast<size_t>(a) * n + k), n - k);
        out[(static_cast<size_t>(k) * d + a) * d + b] =
            s / static_cast<double>(n - k);
      }
  return out;
}

std::vector<cplx> ccf(const ComplexSeries& u, const ComplexSeries& v,
                      int max_lag) {
  const long n = u.n();
  if (v.n() != n) throw usage_error("ccf: length mismatch");
  if (u.dt != v.dt) throw usage_error("ccf: dt mismatch");
  if (max_lag < 0 || max_lag >= n)
    throw usage_error("ccf: need 0 <= max_lag < N");
  const int du = u.dim, dv = v.dim;
  auto bu = component_demeaned(u);
  auto bv = component_demeaned(v);
  std::vector<cplx> out(static_cast<size_t>(2 * max_lag + 1) * du * dv);
  for (int k = -max_lag; k <= max_lag; ++k) {
    const long cnt = n - std::abs(k);
    for (int a = 0; a < du; ++a)
      for (int b = 0; b < dv; ++b) {
        const cplx* ua = bu.data() + static_cast<size_t>(a) * n;
        const cplx* vb = bv.data() + static_cast<size_t>(b) * n;
        // cov(u_{n+k}, conj(v_n)): align the shifted component arrays.
        const cplx s = k >= 0
                           ? kernels::dotc(as_reals(vb), as_reals(ua + k), cnt)
                           : kernels::dotc(as_reals(vb - k), as_reals(ua), cnt);
        out[(static_cast<size_t>(k + max_lag) * du + a) * dv + b] =
            s / static_cast<double>(cnt);
      }
  }
  return out;
}

SpectrumEstimate power_spectrum(const ComplexSeries& u,
                                const WelchOptions& opt) {
  const long n = u.n();
  const int d = u.dim;
  if (opt.window != "hann") throw usage_error("power_spectrum: unknown window");
  if (opt.overlap < 0.0 || opt.overlap >= 1.0)
    throw usage_error("power_spectrum: overlap in [0,1)");
  // Segment length from the target count at the given overlap, floored at 8.
  int segs = std::max(1, opt.n_segments);
  long ls = static_cast<long>(
      std::floor(static_cast<double>(n) / (1.0 + (segs - 1) * (1.0 - opt.overlap))));
  if (ls < 8) {
    ls = 8;
    if (n < 8) throw usage_error("power_spectrum: series shorter than one segment");
  }
  const long hop = std::max<long>(1, static_cast<long>(ls * (1.0 - opt.overlap)));
  const int n_segs = static_cast<int>((n - ls) / hop) + 1;

  std::vector<double> win(ls);
  double wpow = 0.0;
  for (long j = 0; j < ls; ++j) {
    win[j] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * j / ls));
    wpow += win[j] * win[j];
  }

  std::vector<cplx> mean(d, cplx(0.0, 0.0));
  for (long t = 0; t < n; ++t)
    for (int c = 0; c < d; ++c) mean[c] += u.at(t, c);
  for (int c = 0; c < d; ++c) mean[c] /= static_cast<double>(n);

  SpectrumEstimate out;
  out.dim = d;
  out.segment_length = ls;
  out.n_segments = n_segs;
  out.overlap = opt.overlap;
  out.window = opt.window;
  out.freqs.resize(ls);
  for (long j = 0; j < ls; ++j)
    out.freqs[j] = 2.0 * std::numbers::pi * j / ls;
  out.values.assign(static_cast<size_t>(ls) * d * d, cplx(0.0, 0.0));

  ComplexFft fft(ls);
  std::vector<cplx> seg(ls), spec(static_cast<size_t>(d) * ls);
  for (int s = 0; s < n_segs; ++s) {
    const long off = s * hop;
    for (int c = 0; c < d; ++c) {
      for (long j = 0; j < ls; ++j)
        seg[j] = (u.at(off + j, c) - mean[c]) * win[j];
      // Backward transform matches S(theta) = sum C(k) e^{+ik theta}.
      fft.backward(seg.data(), spec.data() + static_cast<size_t>(c) * ls);
    }
    for (long j = 0; j < ls; ++j) {
      auto row = out.at(j);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          row[a * d + b] += spec[static_cast<size_t>(a) * ls + j] *
                            std::conj(spec[static_cast<size_t>(b) * ls + j]);
    }
  }
  const double norm = 1.0 / (wpow * n_segs);
  for (auto& v : out.values) v *= norm;
  return out;
}

std::vector<cplx> spectral_factor(const SpectrumEstimate& s) {
  const int d = s.dim;
  const long m = s.grid();
  std::vector<cplx> out(static_cast<size_t>(m) * d * d);
  Eigen::MatrixXcd h(d, d);
  for (long j = 0; j < m; ++j) {
    const auto row = s.at(j);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const cplx v = row[a * d + b];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw usage_error("spectral_factor: non-finite spectrum entry");
        h(a, b) = v;
      }
    h = 0.5 * (h + h.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    const double clip = 1e-12 * std::max(0.0, eig.eigenvalues().maxCoeff());
    Eigen::VectorXd lam = eig.eigenvalues();
    for (int i = 0; i < d; ++i) lam[i] = lam[i] > clip ? std::sqrt(lam[i]) : 0.0;
    Eigen::MatrixXcd f =
        eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().adjoint();
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        out[(static_cast<size_t>(j) * d + a) * d + b] = f(a, b);
  }
  return out;
}

std::vector<cplx> resample_spectrum(std::span<const cplx> values, long grid_in,
                                    int dim, long grid_out) {
  const size_t dd = static_cast<size_t>(dim) * dim;
  if (values.size() != dd * grid_in)
    throw usage_error("resample_spectrum: size mismatch");
  if (grid_out == grid_in)
    return std::vector<cplx>(values.begin(), values.end());
  std::vector<cplx> out(dd * grid_out);
  for (long j = 0; j < grid_out; ++j) {
    const double pos =
        static_cast<double>(j) * grid_in / static_cast<double>(grid_out);
    const long j0 = static_cast<long>(pos) % grid_in;
    const long j1 = (j0 + 1) % grid_in;
    const double w = pos - std::floor(pos);
    for (size_t e = 0; e < dd; ++e)
      out[j * dd + e] =
          (1.0 - w) * values[j0 * dd + e] + w * values[j1 * dd + e];
  }
  return out;
}

}  // namespace wpmr
