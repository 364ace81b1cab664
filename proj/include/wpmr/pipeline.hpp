#pragma once
// Experiment orchestration shared by the CLI and the acceptance suite:
// config schema, default bases, dataset generation, and forecast piece
// extraction + skill scoring.

#include "wpmr/eval.hpp"
#include "wpmr/fit.hpp"
#include "wpmr/io.hpp"
#include "wpmr/sim.hpp"

namespace wpmr::pipeline {

SpectralPdeConfig config_from_json(const io::json& j);
io::json config_to_json(const SpectralPdeConfig& cfg);

// The paper bases at the config's observation parameters.
std::unique_ptr<PredictorBasis> default_basis(const SpectralPdeConfig& cfg);

// Generates a trajectory and wraps it as a dataset with provenance.
io::Dataset make_dataset(const SpectralPdeConfig& cfg);

struct ForecastOptions {
  int n_ens = 100;
  long horizon = 250;     // steps past the init segment
  int n_pieces = 0;       // 0 = as many as fit (capped at 200)
  long t_lag_steps = 0;   // 0 = 5 x ACF e-folding of the data
  int init_points = 0;    // 0 = 2p + 2 rows handed to each member
  std::uint64_t seed = 7;
  bool keep_first_piece = true;
};

struct ForecastResult {
  std::vector<double> lead;  // time units from the piece start
  std::vector<double> rmse;
  std::vector<double> rmse_members_mean;  // sqrt mean over (piece, member)
  std::vector<double> rmse_climatology;   // climatological-mean forecast
  std::vector<double> ancr;
  long skipped = 0;
  long n_pieces = 0;
  long t_lag_steps = 0;
  int init_points = 0;
  EnsembleForecast first_piece;  // bands of piece 0 (when kept)
};

ForecastResult run_forecast(const CascadeModel& model,
                            const PredictorBasis& basis,
                            const NoiseModel& noise,
                            const ComplexSeries& data,
                            const ForecastOptions& opt,
                            const ComplexSeries* forcing = nullptr);

// First lag (in steps) at which the trace-normalized ACF drops below 1/e.
long acf_efold_steps(const ComplexSeries& data, int max_lag = 1000);

// Fits + noise model + provenance in one step (shared by fit/sweep/tests).
struct FitOutcome {
  FitReport report;
  NoiseModel noise;
};
FitOutcome fit_dataset(const io::Dataset& ds, const PredictorBasis& basis,
                       const FitConfig& cfg, const std::string& method);

}  // namespace wpmr::pipeline
