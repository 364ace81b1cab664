#include "wpmr/noise.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

#include "wpmr/fft.hpp"

namespace wpmr {
namespace {

long pow2_floor(long n) {
  long p = 1;
  while (2 * p <= n) p *= 2;
  return p;
}

long pow2_ceil(long n) {
  long p = 1;
  while (p < n) p *= 2;
  return p;
}

}  // namespace

NoiseModel build_noise_model(const ComplexSeries& residuals, long grid,
                             const NoiseBuildOptions& opt) {
  const long n = residuals.n();
  if (grid == 0) grid = std::clamp<long>(pow2_floor(n / 8), 8, 4096);
  if (n < 8 * grid)
    throw usage_error("build_noise_model: residual length < 8*M");

  SpectrumEstimate s = power_spectrum(residuals, opt.welch);
  auto f = spectral_factor(s);
  NoiseModel model;
  model.dim = residuals.dim;
  model.grid = grid;
  model.factors = resample_spectrum(f, s.grid(), model.dim, grid);
  model.real_output = opt.real_output;
  if (opt.real_output) {
    // Enforce f(2 pi - theta) = conj(f(theta)).
    const size_t dd = static_cast<size_t>(model.dim) * model.dim;
    for (long j = 1; j < grid / 2 + 1; ++j) {
      const long jm = grid - j;
      if (jm <= j) break;
      for (size_t e = 0; e < dd; ++e) {
        const cplx avg = 0.5 * (model.factors[j * dd + e] +
                                std::conj(model.factors[jm * dd + e]));
        model.factors[j * dd + e] = avg;
        model.factors[jm * dd + e] = std::conj(avg);
      }
    }
    for (size_t e = 0; e < dd; ++e) {
      model.factors[e] = model.factors[e].real();
      if (grid % 2 == 0) {
        const size_t h = static_cast<size_t>(grid / 2) * dd + e;
        model.factors[h] = model.factors[h].real();
      }
    }
  }
  return model;
}

ComplexSeries sample(const NoiseModel& model, long n_steps, RngStream& rng,
                     long force_grid) {
  const int d = model.dim;
  if (d < 1 || model.grid < 1) throw usage_error("sample: empty noise model");
  long ms = force_grid > 0 ? force_grid
                           : std::max(model.grid, pow2_ceil(4 * n_steps));
  if (n_steps > ms)
    std::cerr << "wpmr: noise sample of " << n_steps
              << " steps exceeds grid " << ms
              << "; the path covariance is grid-periodic\n";

  const auto factors =
      ms == model.grid
          ? model.factors
          : resample_spectrum(model.factors, model.grid, d, ms);

  // Draw order: frequency-major, component-minor (reproducibility contract).
  std::vector<std::vector<cplx>> comp(d, std::vector<cplx>(ms));
  std::vector<cplx> w(d);
  const size_t dd = static_cast<size_t>(d) * d;
  for (long j = 0; j < ms; ++j) {
    for (int c = 0; c < d; ++c) w[c] = rng.complex_standard();
    const cplx* f = factors.data() + j * dd;
    for (int a = 0; a < d; ++a) {
      cplx acc(0.0, 0.0);
      for (int b = 0; b < d; ++b) acc += f[a * d + b] * w[b];
      comp[a][j] = acc;
    }
  }

  ComplexFft fft(ms);
  std::vector<cplx> out(ms);
  ComplexSeries eta(n_steps, d, 1.0, "noise");
  const double scale = std::sqrt(1.0 / static_cast<double>(ms));
  for (int a = 0; a < d; ++a) {
    fft.forward(comp[a].data(), out.data());
    if (model.real_output) {
      for (long t = 0; t < n_steps; ++t)
        eta.at(t, a) = std::numbers::sqrt2 * scale * out[t % ms].real();
    } else {
      for (long t = 0; t < n_steps; ++t) eta.at(t, a) = scale * out[t % ms];
    }
  }
  return eta;
}

std::vector<cplx> noise_model_covariance(const NoiseModel& model, int max_lag,
                                         long grid) {
  const int d = model.dim;
  const long ms = grid > 0 ? grid : model.grid;
  const auto factors =
      ms == model.grid
          ? model.factors
          : resample_spectrum(model.factors, model.grid, d, ms);
  const size_t dd = static_cast<size_t>(d) * d;
  std::vector<cplx> cov(static_cast<size_t>(max_lag + 1) * dd, cplx(0, 0));
  const double dtheta = 2.0 * std::numbers::pi / ms;
  for (long j = 0; j < ms; ++j) {
    const cplx* f = factors.data() + j * dd;
    // S = f f^*
    for (int h = 0; h <= max_lag; ++h) {
      const cplx phase = std::polar(1.0, -h * dtheta * j);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          cplx s(0.0, 0.0);
          for (int c = 0; c < d; ++c)
            s += f[a * d + c] * std::conj(f[b * d + c]);
          cov[static_cast<size_t>(h) * dd + a * d + b] +=
              s * phase * (dtheta / (2.0 * std::numbers::pi));
        }
    }
  }
  if (model.real_output)
    for (auto& v : cov) v = v.real();
  return cov;
}

}  // namespace wpmr
