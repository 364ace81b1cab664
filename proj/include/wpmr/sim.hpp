#pragma once
// Reduced-model runs: free simulation with sampled noise, ensemble
// forecasts from data initial segments, and shared-forcing response runs.

#include <cstdint>

#include "wpmr/noise.hpp"
#include "wpmr/predictors.hpp"

namespace wpmr {

// Exactly one source is active: a noise model to sample from, an injected
// residual series, or neither (noise-free run).
struct NoiseSource {
  const NoiseModel* model = nullptr;
  RngStream* rng = nullptr;  // required with `model`
  const ComplexSeries* injected = nullptr;
};

struct ReducedRunOptions {
  long n_steps = 0;             // total output rows (>= init rows)
  bool fit_convention = false;  // fitting-time run: zero-padded inputs from
                                // the data start plus fitted internal ICs
  double blowup_factor = 1e6;   // guard = factor * initial data scale
};

// Core trajectory runner. The init segment seeds the trajectory (and is
// teacher-forced while it lasts); fresh runs back-solve the stage state
// from the first p+1 init rows.
ComplexSeries run_reduced(const CascadeModel& model,
                          const PredictorBasis& basis,
                          const ComplexSeries& init, const NoiseSource& noise,
                          const ReducedRunOptions& opt,
                          const ComplexSeries* forcing = nullptr);

// Free run with sampled noise (pre-sampled for the whole horizon).
ComplexSeries simulate(const CascadeModel& model, const PredictorBasis& basis,
                       const NoiseModel& noise, const ComplexSeries& init,
                       long n_steps, RngStream& rng,
                       const ComplexSeries* forcing = nullptr);

// As simulate, with the recorded forcing aggregates driving the model's
// moving-average forcing term.
ComplexSeries simulate_shared_forcing(const CascadeModel& model,
                                      const PredictorBasis& basis,
                                      const NoiseModel& noise,
                                      const ComplexSeries& init,
                                      const ComplexSeries& forcing_agg,
                                      long n_steps, RngStream& rng);

struct EnsembleForecast {
  ComplexSeries mean;              // member average, init rows + horizon
  std::vector<double> q05, q95;    // Re quantiles, (rows * d)
  std::vector<ComplexSeries> members;  // filled when keep_members
};

// All members share the init segment exactly; uncertainty enters only
// through independent noise streams (seed, salt, member index).
EnsembleForecast ensemble_forecast(const CascadeModel& model,
                                   const PredictorBasis& basis,
                                   const NoiseModel& noise,
                                   const ComplexSeries& init, int n_ens,
                                   long horizon, std::uint64_t seed,
                                   std::uint64_t salt = 0,
                                   bool keep_members = false,
                                   const ComplexSeries* forcing = nullptr);

}  // namespace wpmr
