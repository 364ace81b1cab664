#pragma once
// Residual noise modeling: spectral factor of the estimated residual power
// spectrum and stationary Gaussian sampling by random Fourier series.

#include "wpmr/core.hpp"
#include "wpmr/rng.hpp"
#include "wpmr/spectral.hpp"

namespace wpmr {

struct NoiseBuildOptions {
  WelchOptions welch;
  bool real_output = false;
};

// Estimates S_xi_xi by Welch averaging, factors it, and interpolates the
// factor to an M-point grid. grid = 0 picks the largest power of two
// <= len/8 (at least 8, capped at 4096); an explicit grid larger than
// len/8 is an error.
NoiseModel build_noise_model(const ComplexSeries& residuals, long grid = 0,
                             const NoiseBuildOptions& opt = {});

// eta_n = (2 pi)^{-1/2} sum_j f(theta_j) e^{-i n j dtheta} w_j sqrt(dtheta)
// with complex standard w_j (Re, Im variance 1/2). The sampling grid is the
// smallest power of two >= 4 n_steps (never below the model grid) unless
// force_grid overrides it; n_steps beyond the grid warns that the path is
// grid-periodic. Real-output models return sqrt(2) Re(eta).
ComplexSeries sample(const NoiseModel& model, long n_steps, RngStream& rng,
                     long force_grid = 0);

// Exact lag covariance of the discrete construction on the given grid:
// C(h) = (dtheta / 2 pi) sum_j f f^* e^{-i h theta_j}; the quadrature
// reference for sampler tests.
std::vector<cplx> noise_model_covariance(const NoiseModel& model, int max_lag,
                                         long grid = 0);

}  // namespace wpmr
