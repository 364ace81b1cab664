#include "wpmr/pipeline.hpp"

#include <cmath>

namespace wpmr::pipeline {

SpectralPdeConfig config_from_json(const io::json& j) {
  SpectralPdeConfig cfg;
  const std::string kind = j.at("kind");
  if (kind == "ks")
    cfg.kind = PdeKind::ks;
  else if (kind == "burgers")
    cfg.kind = PdeKind::burgers;
  else
    throw usage_error("config: kind must be ks or burgers");
  cfg.L = j.value("L", cfg.kind == PdeKind::burgers
                           ? 2.0 * std::numbers::pi
                           : cfg.L);
  cfg.n_modes = j.at("n_modes");
  cfg.nu = j.value("nu", cfg.nu);
  cfg.dt = j.at("dt");
  cfg.stride = j.at("stride");
  cfg.burn_in = j.value("burn_in", 0L);
  cfg.n_steps = j.at("n_steps");
  cfg.n_observed = j.at("n_observed");
  cfg.forced_modes = j.value("forced_modes", 0);
  cfg.sigma_amp = j.value("sigma_amp", 0.0);
  cfg.seed = j.value("seed", 1UL);
  cfg.record_forcing = j.value("record_forcing", false);
  cfg.ic_amplitude = j.value("ic_amplitude", 0.1);
  cfg.validate();
  return cfg;
}

io::json config_to_json(const SpectralPdeConfig& cfg) {
  io::json j;
  j["kind"] = cfg.kind == PdeKind::ks ? "ks" : "burgers";
  j["L"] = cfg.L;
  j["n_modes"] = cfg.n_modes;
  j["nu"] = cfg.nu;
  j["dt"] = cfg.dt;
  j["stride"] = cfg.stride;
  j["burn_in"] = cfg.burn_in;
  j["n_steps"] = cfg.n_steps;
  j["n_observed"] = cfg.n_observed;
  j["forced_modes"] = cfg.forced_modes;
  j["sigma_amp"] = cfg.sigma_amp;
  j["seed"] = cfg.seed;
  j["record_forcing"] = cfg.record_forcing;
  j["ic_amplitude"] = cfg.ic_amplitude;
  return j;
}

std::unique_ptr<PredictorBasis> default_basis(const SpectralPdeConfig& cfg) {
  if (cfg.kind == PdeKind::ks) {
    KsBasisOptions opt;
    opt.K = cfg.n_observed;
    opt.L = cfg.L;
    opt.delta = cfg.observation_dt();
    return std::make_unique<KsBasis>(opt);
  }
  BurgersBasisOptions opt;
  opt.K = cfg.n_observed;
  opt.nu = cfg.nu;
  opt.delta = cfg.observation_dt();
  return std::make_unique<BurgersBasis>(opt);
}

io::Dataset make_dataset(const SpectralPdeConfig& cfg) {
  TrajectoryRecord rec = generate_trajectory(cfg);
  io::Dataset ds;
  ds.observed = std::move(rec.observed);
  if (rec.forcing_agg) ds.forcing = std::move(rec.forcing_agg);
  const io::json cj = config_to_json(cfg);
  const std::string hash = io::fnv1a_hex(cj.dump());
  ds.meta["config"] = cj;
  ds.meta["config_hash"] = hash;
  ds.meta["seed"] = cfg.seed;
  ds.meta["lineage"] = io::json::array({hash});
  return ds;
}

long acf_efold_steps(const ComplexSeries& data, int max_lag) {
  const int lag = static_cast<int>(
      std::min<long>(max_lag, std::max<long>(2, data.n() / 10)));
  const auto c = acf(data, lag);
  const int d = data.dim;
  const size_t dd = static_cast<size_t>(d) * d;
  double c0 = 0.0;
  for (int k = 0; k < d; ++k) c0 += c[static_cast<size_t>(k) * d + k].real();
  for (int h = 1; h <= lag; ++h) {
    double tr = 0.0;
    for (int k = 0; k < d; ++k)
      tr += c[static_cast<size_t>(h) * dd + k * d + k].real();
    if (tr < c0 / std::numbers::e) return h;
  }
  return lag;
}

ForecastResult run_forecast(const CascadeModel& model,
                            const PredictorBasis& basis,
                            const NoiseModel& noise,
                            const ComplexSeries& data,
                            const ForecastOptions& opt,
                            const ComplexSeries* forcing) {
  const int p = model.orders.p;
  const int d = model.state_dim;
  const long n = data.n();
  ForecastResult res;
  res.init_points = opt.init_points > 0 ? opt.init_points : 2 * p + 2;
  const long rows = res.init_points + opt.horizon;
  res.t_lag_steps = opt.t_lag_steps > 0 ? opt.t_lag_steps
                                        : 5 * acf_efold_steps(data);
  long max_pieces = (n - rows) / res.t_lag_steps + 1;
  if (max_pieces < 1)
    throw usage_error("run_forecast: dataset too short for the horizon");
  long pieces = opt.n_pieces > 0 ? std::min<long>(opt.n_pieces, max_pieces)
                                 : std::min<long>(max_pieces, 200);
  res.n_pieces = pieces;

  std::vector<cplx> clim(d, cplx(0.0, 0.0));
  for (long t = 0; t < n; ++t)
    for (int k = 0; k < d; ++k) clim[k] += data.at(t, k);
  for (int k = 0; k < d; ++k) clim[k] /= static_cast<double>(n);

  std::vector<ComplexSeries> truths(pieces), means(pieces), clim_fc(pieces);
  std::vector<double> member_sq(rows, 0.0);
  long member_count = 0;
  for (long i = 0; i < pieces; ++i) {
    const long off = i * res.t_lag_steps;
    ComplexSeries init(res.init_points, d, data.dt);
    for (long t = 0; t < res.init_points; ++t)
      std::copy_n(data.row(off + t).data(), d, init.row(t).data());
    auto ens = ensemble_forecast(model, basis, noise, init, opt.n_ens,
                                 opt.horizon, opt.seed,
                                 static_cast<std::uint64_t>(i),
                                 /*keep_members=*/true, forcing);
    ComplexSeries truth(rows, d, data.dt);
    for (long t = 0; t < rows; ++t)
      std::copy_n(data.row(off + t).data(), d, truth.row(t).data());
    // Per-member squared errors feed the Jensen cross-check.
    for (const auto& member : ens.members) {
      for (long t = 0; t < rows; ++t) {
        double e2 = 0.0;
        for (int k = 0; k < d; ++k) {
          const double dk = truth.at(t, k).real() - member.at(t, k).real();
          e2 += dk * dk;
        }
        member_sq[t] += e2;
      }
      ++member_count;
    }
    means[i] = std::move(ens.mean);
    truths[i] = std::move(truth);
    ComplexSeries cf(rows, d, data.dt);
    for (long t = 0; t < rows; ++t)
      std::copy_n(clim.data(), d, cf.row(t).data());
    clim_fc[i] = std::move(cf);
    if (i == 0 && opt.keep_first_piece) res.first_piece = std::move(ens);
  }

  res.rmse = rmse_curve(truths, means);
  res.rmse_climatology = rmse_curve(truths, clim_fc);
  auto anc = ancr_curve(truths, means, clim);
  res.ancr = std::move(anc.value);
  res.skipped = anc.skipped;
  res.rmse_members_mean.resize(rows);
  for (long t = 0; t < rows; ++t)
    res.rmse_members_mean[t] =
        std::sqrt(member_sq[t] / static_cast<double>(member_count));
  res.lead.resize(rows);
  for (long t = 0; t < rows; ++t) res.lead[t] = t * data.dt;
  return res;
}

FitOutcome fit_dataset(const io::Dataset& ds, const PredictorBasis& basis,
                       const FitConfig& cfg, const std::string& method) {
  PredictorSeries psi = build_series(basis, ds.observed, cfg.orders.p);
  const ComplexSeries* forcing = ds.forcing ? &*ds.forcing : nullptr;
  FitOutcome out;
  if (method == "nonlinear")
    out.report = fit_nonlinear(psi, ds.observed, cfg, forcing);
  else if (method == "linear")
    out.report = fit_linear(psi, ds.observed, cfg, forcing);
  else
    throw usage_error("fit_dataset: method must be nonlinear or linear");
  out.noise = build_noise_model(residuals_for_noise(out.report));
  return out;
}

}  // namespace wpmr::pipeline
