#include "wpmr/models.hpp"

#include <cmath>

namespace wpmr {

void SpectralPdeConfig::validate() const {
  if (dt <= 0.0 || stride < 1 || n_modes < 1 || n_observed < 1 ||
      n_observed > n_modes || burn_in < 0 || n_steps < 1 || L <= 0.0)
    throw usage_error("SpectralPdeConfig: invalid field");
  if (kind == PdeKind::burgers && nu <= 0.0)
    throw usage_error("SpectralPdeConfig: Burgers needs nu > 0");
  if (forced_modes > n_modes)
    throw usage_error("SpectralPdeConfig: forced_modes > n_modes");
}

QuadraticConvolution::QuadraticConvolution(int n_modes)
    : n_(n_modes),
      padded_(next_fast_fft_size(3L * n_modes + 1)),
      fft_(padded_),
      spec_(padded_ / 2 + 1),
      phys_(padded_) {}

void QuadraticConvolution::square(std::span<const cplx> u,
                                  std::span<cplx> out) {
  std::fill(spec_.begin(), spec_.end(), cplx(0.0, 0.0));
  for (int k = 1; k <= n_; ++k) spec_[k] = u[k - 1];
  fft_.backward(spec_.data(), phys_.data());
  for (long j = 0; j < padded_; ++j) phys_[j] *= phys_[j];
  fft_.forward(phys_.data(), spec_.data());
  const double inv = 1.0 / static_cast<double>(padded_);
  for (int k = 1; k <= n_; ++k) out[k - 1] = spec_[k] * inv;
}

void ks_rhs(std::span<const cplx> u, double L, std::span<cplx> out) {
  const int n = static_cast<int>(u.size());
  QuadraticConvolution conv(n);
  conv.square(u, out);
  for (int k = 1; k <= n; ++k) {
    const double lam = 2.0 * std::numbers::pi * k / L;
    const double l2 = lam * lam;
    out[k - 1] = cplx(0.0, -lam / 2.0) * out[k - 1] + (l2 - l2 * l2) * u[k - 1];
  }
}

void burgers_rhs(std::span<const cplx> u, double nu, std::span<cplx> out) {
  const int n = static_cast<int>(u.size());
  QuadraticConvolution conv(n);
  conv.square(u, out);
  for (int k = 1; k <= n; ++k) {
    const double lam = k;
    out[k - 1] =
        cplx(0.0, -lam / 2.0) * out[k - 1] - nu * lam * lam * u[k - 1];
  }
}

Etdrk4::Etdrk4(int n_modes, double dt, double L,
               std::span<const double> symbol)
    : n_(n_modes),
      dt_(dt),
      lambda_scale_(2.0 * std::numbers::pi / L),
      conv_(n_modes),
      e_(n_modes),
      e2_(n_modes),
      q_(n_modes),
      f1_(n_modes),
      f2_(n_modes),
      f3_(n_modes),
      nu_(n_modes),
      na_(n_modes),
      nb_(n_modes),
      nc_(n_modes),
      ua_(n_modes),
      ub_(n_modes),
      uc_(n_modes) {
  if (symbol.size() != static_cast<size_t>(n_modes))
    throw usage_error("Etdrk4: symbol size mismatch");
  constexpr int kContourPoints = 32;
  for (int k = 0; k < n_; ++k) {
    const double z = symbol[k] * dt;
    e_[k] = std::exp(z);
    e2_[k] = std::exp(z / 2.0);
    cplx q = 0.0, f1 = 0.0, f2 = 0.0, f3 = 0.0;
    for (int j = 0; j < kContourPoints; ++j) {
      const double ang =
          std::numbers::pi * (j + 0.5) / kContourPoints * 2.0;
      const cplx lr = z + std::polar(1.0, ang);
      const cplx elr = std::exp(lr);
      const cplx lr2 = lr * lr, lr3 = lr2 * lr;
      q += (std::exp(lr / 2.0) - 1.0) / lr;
      f1 += (-4.0 - lr + elr * (4.0 - 3.0 * lr + lr2)) / lr3;
      f2 += (2.0 + lr + elr * (-2.0 + lr)) / lr3;
      f3 += (-4.0 - 3.0 * lr - lr2 + elr * (4.0 - lr)) / lr3;
    }
    // Symbol is real and the contour is symmetric, so means are real.
    const double inv = dt / kContourPoints;
    q_[k] = q.real() * inv;
    f1_[k] = f1.real() * inv;
    f2_[k] = f2.real() * inv;
    f3_[k] = f3.real() * inv;
  }
}

Etdrk4 Etdrk4::for_config(const SpectralPdeConfig& cfg) {
  std::vector<double> symbol(cfg.n_modes);
  for (int k = 1; k <= cfg.n_modes; ++k) symbol[k - 1] = cfg.linear_symbol(k);
  return Etdrk4(cfg.n_modes, cfg.dt, cfg.L, symbol);
}

Etdrk4 Etdrk4::truncation(const SpectralPdeConfig& cfg, int k_modes,
                          double step) {
  std::vector<double> symbol(k_modes);
  for (int k = 1; k <= k_modes; ++k) symbol[k - 1] = cfg.linear_symbol(k);
  return Etdrk4(k_modes, step, cfg.L, symbol);
}

void Etdrk4::rhs_nonlinear(std::span<const cplx> u, std::span<cplx> out) {
  conv_.square(u, out);
  for (int k = 1; k <= n_; ++k)
    out[k - 1] *= cplx(0.0, -lambda_scale_ * k / 2.0);
}

void Etdrk4::step(std::span<cplx> u, long step_index) {
  rhs_nonlinear(u, nu_);
  for (int k = 0; k < n_; ++k) ua_[k] = e2_[k] * u[k] + q_[k] * nu_[k];
  rhs_nonlinear(ua_, na_);
  for (int k = 0; k < n_; ++k) ub_[k] = e2_[k] * u[k] + q_[k] * na_[k];
  rhs_nonlinear(ub_, nb_);
  for (int k = 0; k < n_; ++k)
    uc_[k] = e2_[k] * ua_[k] + q_[k] * (2.0 * nb_[k] - nu_[k]);
  rhs_nonlinear(uc_, nc_);
  for (int k = 0; k < n_; ++k) {
    u[k] = e_[k] * u[k] + f1_[k] * nu_[k] + 2.0 * f2_[k] * (na_[k] + nb_[k]) +
           f3_[k] * nc_[k];
    if (!std::isfinite(u[k].real()) || !std::isfinite(u[k].imag()))
      throw blowup_error("etdrk4: non-finite state", step_index);
  }
}

std::vector<cplx> stochastic_step(Etdrk4& integrator, std::span<cplx> u,
                                  int forced_modes, double sigma_amp,
                                  RngStream& rng) {
  integrator.step(u);
  std::vector<cplx> w(forced_modes);
  const double amp = sigma_amp * std::sqrt(integrator.dt());
  for (int k = 0; k < forced_modes; ++k) {
    w[k] = rng.complex_normal();
    u[k] += amp * w[k];
  }
  return w;
}

TrajectoryRecord generate_trajectory(const SpectralPdeConfig& cfg) {
  cfg.validate();
  Etdrk4 integrator = Etdrk4::for_config(cfg);
  RngStream ic_rng(cfg.seed, 0xA11CE);
  RngStream force_rng(cfg.seed, 0xF0ECE);

  std::vector<cplx> u(cfg.n_modes);
  for (int k = 1; k <= cfg.n_modes; ++k)
    u[k - 1] = cfg.ic_amplitude / (static_cast<double>(k) * k) *
               ic_rng.complex_standard();

  const bool stochastic = cfg.forced_modes > 0 && cfg.sigma_amp != 0.0;
  auto advance = [&](long step_index) -> std::vector<cplx> {
    if (stochastic)
      return stochastic_step(integrator, u, cfg.forced_modes, cfg.sigma_amp,
                             force_rng);
    integrator.step(u, step_index);
    return {};
  };

  for (long s = 0; s < cfg.burn_in; ++s) advance(s - cfg.burn_in);

  const long n_obs = cfg.n_steps / cfg.stride + 1;
  TrajectoryRecord rec;
  rec.config = cfg;
  rec.observed = ComplexSeries(n_obs, cfg.n_observed, cfg.observation_dt(),
                               cfg.kind == PdeKind::ks ? "ks" : "burgers");
  const bool record_w = stochastic && cfg.record_forcing;
  if (record_w)
    rec.forcing_agg = ComplexSeries(n_obs - 1, cfg.forced_modes,
                                    cfg.observation_dt(), "forcing");

  const double agg_norm = 1.0 / std::sqrt(static_cast<double>(cfg.stride));
  for (long t = 0; t < n_obs; ++t) {
    for (int k = 0; k < cfg.n_observed; ++k) rec.observed.at(t, k) = u[k];
    if (t == n_obs - 1) break;
    std::vector<cplx> agg(record_w ? cfg.forced_modes : 0, cplx(0.0, 0.0));
    for (int s = 0; s < cfg.stride; ++s) {
      auto w = advance(t * cfg.stride + s);
      if (record_w)
        for (int k = 0; k < cfg.forced_modes; ++k) agg[k] += w[k];
    }
    if (record_w)
      for (int k = 0; k < cfg.forced_modes; ++k)
        rec.forcing_agg->at(t, k) = agg[k] * agg_norm;
  }
  return rec;
}

}  // namespace wpmr
