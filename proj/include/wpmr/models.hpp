#pragma once
// Full-model data generators: KS and stochastically forced Burgers in
// Fourier space (positive wavenumbers of a real field, zero mean mode),
// integrated with ETDRK4.

#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>

#include "wpmr/common.hpp"
#include "wpmr/fft.hpp"
#include "wpmr/rng.hpp"

namespace wpmr {

enum class PdeKind { ks, burgers };

struct SpectralPdeConfig {
  PdeKind kind = PdeKind::ks;
  double L = 2.0 * std::numbers::pi;  // domain length; Burgers uses 2*pi
  int n_modes = 108;
  double nu = 0.05;      // Burgers viscosity
  double dt = 1e-3;      // integrator step
  int stride = 100;      // observation subsampling factor
  long burn_in = 0;      // integrator steps discarded before recording
  long n_steps = 0;      // integrator steps after burn-in
  int n_observed = 5;    // K, recorded modes
  int forced_modes = 0;  // sigma_k = sigma_amp for 1 <= k <= forced_modes
  double sigma_amp = 0.0;
  std::uint64_t seed = 1;
  bool record_forcing = false;
  double ic_amplitude = 0.1;

  double lambda(int k) const { return 2.0 * std::numbers::pi * k / L; }
  double linear_symbol(int k) const {
    const double l2 = lambda(k) * lambda(k);
    return kind == PdeKind::ks ? l2 - l2 * l2 : -nu * l2;
  }
  double observation_dt() const { return dt * stride; }
  void validate() const;
};

struct TrajectoryRecord {
  ComplexSeries observed;                 // first K modes every stride steps
  std::optional<ComplexSeries> forcing_agg;  // aggregated w-bar per gap
  SpectralPdeConfig config;
};

// Dealiased truncated quadratic convolution (u^2)_k for k = 1..n of a real
// field with modes u_1..u_n (u_0 = 0, negative modes by conjugation).
class QuadraticConvolution {
 public:
  explicit QuadraticConvolution(int n_modes);
  int n_modes() const { return n_; }
  void square(std::span<const cplx> u, std::span<cplx> out);

 private:
  int n_;
  long padded_;
  RealFft fft_;
  std::vector<cplx> spec_;
  std::vector<double> phys_;
};

// Tendency of the n-mode KS truncation: -(i lambda_k / 2)(u^2)_k +
// (lambda_k^2 - lambda_k^4) u_k, lambda_k = 2 pi k / L.
void ks_rhs(std::span<const cplx> u, double L, std::span<cplx> out);

// Burgers tendency: -(i k / 2)(u^2)_k - nu k^2 u_k on the 2*pi domain.
void burgers_rhs(std::span<const cplx> u, double nu, std::span<cplx> out);

// ETDRK4 for the diagonal semilinear system u' = c u + N(u) with the
// quadratic pseudo-spectral nonlinearity. Phi coefficients are evaluated by
// a 32-point unit-radius contour mean around each c_k dt.
class Etdrk4 {
 public:
  Etdrk4(int n_modes, double dt, double L, std::span<const double> symbol);
  static Etdrk4 for_config(const SpectralPdeConfig& cfg);
  // K-mode truncation of the same PDE at a different step (the Galerkin
  // one-step map used by the predictor bases).
  static Etdrk4 truncation(const SpectralPdeConfig& cfg, int k_modes,
                           double step);

  int n_modes() const { return n_; }
  double dt() const { return dt_; }
  // One deterministic step in place; `step_index` only labels diagnostics.
  void step(std::span<cplx> u, long step_index = -1);

 private:
  int n_;
  double dt_;
  double lambda_scale_;
  QuadraticConvolution conv_;
  std::vector<double> e_, e2_, q_, f1_, f2_, f3_;
  std::vector<cplx> nu_, na_, nb_, nc_, ua_, ub_, uc_;

  void rhs_nonlinear(std::span<const cplx> u, std::span<cplx> out);
};

// Deterministic ETDRK4 substep plus sqrt(dt) sigma_k w additive increment on
// modes 1..forced_modes; returns the drawn w (one complex N(0,1)+iN(0,1)
// per forced mode, fixed draw order).
std::vector<cplx> stochastic_step(Etdrk4& integrator, std::span<cplx> u,
                                  int forced_modes, double sigma_amp,
                                  RngStream& rng);

// Integrates from a random smooth field, discards burn_in, then records
// n_steps/stride + 1 observations of the first K modes (and, for Burgers
// with record_forcing, the 1/sqrt(stride) aggregated forcing per gap).
TrajectoryRecord generate_trajectory(const SpectralPdeConfig& cfg);

}  // namespace wpmr
