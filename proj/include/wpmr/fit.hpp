#pragma once
// Parameter estimation: the outer derivative-free search over the stage
// coefficients with an inner ridge least-squares solve for the weights,
// exogenous-forcing coefficients and homogeneous initial values; and the
// one-shot multistep linear regression alternative.

#include "wpmr/cascade.hpp"
#include "wpmr/optim.hpp"
#include "wpmr/predictors.hpp"

namespace wpmr {

struct FitConfig {
  ModelOrders orders{0, 0};
  double margin = 1e-6;
  NelderMeadOptions optim;  // per-start budget and tolerances
  int n_starts = 5;         // built-in interior start points (max 5)
  std::vector<std::vector<double>> extra_starts;
  double ridge_rel = 1e-8;  // relative Tikhonov strength, 0 = plain LS
  bool fit_internal_ics = true;
  int forcing_q = 0;  // forcing moving-average order when forcing is given
};

struct InnerResult {
  std::vector<std::vector<cplx>> weights;    // (r+1) x m
  std::vector<std::vector<cplx>> forcing_c;  // (q+1) x forced dim
  std::vector<cplx> ics;                     // slots x d
  double mse = 0.0;
  double condition = 0.0;
  bool ill_conditioned = false;
};

struct FitReport {
  CascadeModel model;
  double mse = 0.0;
  // Aligned with the data series: rows p+1..N-1 hold xi_t = x_t - xhat_t,
  // earlier rows are zero. For an unstable linear fit these are the
  // multistep residuals instead (see `stable`).
  ComplexSeries residuals;
  std::vector<double> best_trace;  // global best-so-far per outer evaluation
  long n_evals = 0;
  bool converged = true;
  bool stable = true;
  double condition = 0.0;
  bool ill_conditioned = false;
  std::string method;
};

// Weights / forcing / IC estimate at fixed stage coefficients (the unique
// minimizer of the one-step MSE given (alpha, beta)).
InnerResult inner_solve(const CascadeCoefficients& coeffs,
                        const PredictorSeries& psi, const ComplexSeries& x,
                        const FitConfig& cfg,
                        const ComplexSeries* forcing = nullptr);

// Nonlinear regression: projected Nelder-Mead over the stage coefficients,
// inner linear solve per candidate, multistart from interior points.
FitReport fit_nonlinear(const PredictorSeries& psi, const ComplexSeries& x,
                        const FitConfig& cfg,
                        const ComplexSeries* forcing = nullptr);

// Multistep linear regression: joint least squares for (a, b) (and forcing
// weights) with real shared a; a is converted to cascade form by root
// pairing and flagged unstable when A(z) has roots outside the unit disc.
FitReport fit_linear(const PredictorSeries& psi, const ComplexSeries& x,
                     const FitConfig& cfg,
                     const ComplexSeries* forcing = nullptr);

// One-step predictions over the data in the fitting convention (predictor
// inputs zero-padded before the data start, fitted ICs applied when
// present). Row t holds xhat_t for t >= p+1; rows 0..p copy the data.
ComplexSeries one_step_predictions(const CascadeModel& model,
                                   const PredictorSeries& psi,
                                   const ComplexSeries& x,
                                   const ComplexSeries* forcing = nullptr);

// Reruns the reduced model with the stored residuals injected in place of
// sampled noise. With exact arithmetic this reconstructs the training data;
// the divergence rate measures round-off amplification of the (p, r) pair.
ComplexSeries replay_residuals(const CascadeModel& model,
                               const PredictorBasis& basis,
                               const ComplexSeries& x_data,
                               const ComplexSeries& residuals,
                               const ComplexSeries* forcing = nullptr);

// Residual rows usable for noise modeling: drops the zero prefix and the
// default transient trim of max(p, 100) further samples.
ComplexSeries residuals_for_noise(const FitReport& report, long extra_trim = -1);

}  // namespace wpmr
