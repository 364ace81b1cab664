#include "wpmr/sim.hpp"

#include <algorithm>
#include <cmath>

#include "wpmr/cascade.hpp"
#include "wpmr/parallel.hpp"

namespace wpmr {

ComplexSeries run_reduced(const CascadeModel& model,
                          const PredictorBasis& basis,
                          const ComplexSeries& init, const NoiseSource& noise,
                          const ReducedRunOptions& opt,
                          const ComplexSeries* forcing) {
  model.validate();
  const int d = model.state_dim;
  const int p = model.orders.p, r = model.orders.r;
  const long l0 = init.n();
  if (init.dim != d) throw usage_error("run_reduced: init dim mismatch");
  if (l0 < p + 1)
    throw usage_error("run_reduced: init segment shorter than p+1");
  if (opt.n_steps < l0) throw usage_error("run_reduced: n_steps < init rows");
  const int q = model.forcing ? model.forcing->q : 0;
  const int kf = model.forcing ? model.forcing->dim : 0;
  if (forcing && model.forcing && forcing->n() < opt.n_steps - 1 + q)
    throw usage_error("run_reduced: forcing series too short");

  ComplexSeries x(opt.n_steps, d, init.dt, "reduced-run");
  for (long t = 0; t < l0; ++t)
    std::copy_n(init.row(t).data(), d, x.row(t).data());

  ComplexSeries sampled;
  const ComplexSeries* xi = nullptr;
  if (noise.injected) {
    if (noise.injected->n() < opt.n_steps)
      throw usage_error("run_reduced: injected noise shorter than the run");
    xi = noise.injected;
  } else if (noise.model) {
    if (!noise.rng) throw usage_error("run_reduced: noise model without rng");
    sampled = sample(*noise.model, opt.n_steps, *noise.rng);
    xi = &sampled;
  }

  CascadeEngine engine(model.cascade, d);
  std::vector<std::vector<double>> g;
  long n0;
  if (opt.fit_convention) {
    engine.reset();
    if (model.fitted_ics && p > 0)
      g = zero_input_basis(model.cascade, std::max<long>(opt.n_steps - 1 - p, 1));
    n0 = 0;
  } else {
    if (p > 0) engine.load_state(init_from_history(model.cascade, init, d));
    n0 = p;
  }

  double scale2 = 0.0;
  for (long t = 0; t < l0; ++t)
    for (int c = 0; c < d; ++c) scale2 = std::max(scale2, std::norm(x.at(t, c)));
  const double guard2 =
      opt.blowup_factor * opt.blowup_factor * std::max(scale2, 1e-12);

  std::vector<cplx> frame(d), psi_buf(basis.layout().n_columns);
  for (long n = n0; n + 1 < opt.n_steps; ++n) {
    std::fill(frame.begin(), frame.end(), cplx(0.0, 0.0));
    for (int j = 0; j <= r; ++j) {
      const long t = n - p + j;
      if (t < 0) continue;  // fitting convention zero padding
      basis.eval(x, t, p - j, psi_buf);
      apply_weights(basis.layout(), psi_buf, {}, model.weights[j], frame);
    }
    if (model.forcing && forcing)
      for (int j = 0; j <= q; ++j) {
        const auto c = model.forcing->lag(j);
        for (int k = 0; k < kf; ++k) frame[k] += c[k] * forcing->at(n + j, k);
      }
    engine.step(frame);
    if (!g.empty() && n >= p) {
      const auto& ics = *model.fitted_ics;
      for (int s = 0; s < model.cascade.ic_slots(); ++s) {
        const double gs = g[s][n - p];
        for (int k = 0; k < d; ++k)
          frame[k] += gs * ics[static_cast<size_t>(s) * d + k];
      }
    }
    if (n + 1 < l0) continue;  // teacher-forced warmup over the init segment
    double norm2 = 0.0;
    for (int k = 0; k < d; ++k) {
      cplx v = frame[k];
      if (xi) v += xi->at(n + 1, k);
      x.at(n + 1, k) = v;
      norm2 += std::norm(v);
    }
    if (!(norm2 <= guard2))
      throw blowup_error("run_reduced: instability guard tripped", n + 1);
  }
  return x;
}

ComplexSeries simulate(const CascadeModel& model, const PredictorBasis& basis,
                       const NoiseModel& noise, const ComplexSeries& init,
                       long n_steps, RngStream& rng,
                       const ComplexSeries* forcing) {
  NoiseSource ns;
  ns.model = &noise;
  ns.rng = &rng;
  ReducedRunOptions opt;
  opt.n_steps = n_steps;
  return run_reduced(model, basis, init, ns, opt, forcing);
}

ComplexSeries simulate_shared_forcing(const CascadeModel& model,
                                      const PredictorBasis& basis,
                                      const NoiseModel& noise,
                                      const ComplexSeries& init,
                                      const ComplexSeries& forcing_agg,
                                      long n_steps, RngStream& rng) {
  return simulate(model, basis, noise, init, n_steps, rng, &forcing_agg);
}

EnsembleForecast ensemble_forecast(const CascadeModel& model,
                                   const PredictorBasis& basis,
                                   const NoiseModel& noise,
                                   const ComplexSeries& init, int n_ens,
                                   long horizon, std::uint64_t seed,
                                   std::uint64_t salt, bool keep_members,
                                   const ComplexSeries* forcing) {
  if (n_ens < 1) throw usage_error("ensemble_forecast: n_ens >= 1");
  const long rows = init.n() + horizon;
  const int d = model.state_dim;
  std::vector<ComplexSeries> members(n_ens);
  parallel_for(n_ens, [&](long j) {
    RngStream rng(seed, salt, static_cast<std::uint64_t>(j));
    auto local_basis = basis.clone();
    ReducedRunOptions opt;
    opt.n_steps = rows;
    NoiseSource ns;
    ns.model = &noise;
    ns.rng = &rng;
    members[j] = run_reduced(model, *local_basis, init, ns, opt, forcing);
  });

  EnsembleForecast out;
  out.mean = ComplexSeries(rows, d, init.dt, "ensemble-mean");
  out.q05.assign(static_cast<size_t>(rows) * d, 0.0);
  out.q95.assign(static_cast<size_t>(rows) * d, 0.0);
  std::vector<double> re(n_ens);
  for (long t = 0; t < rows; ++t)
    for (int k = 0; k < d; ++k) {
      cplx mean(0.0, 0.0);
      for (int j = 0; j < n_ens; ++j) {
        mean += members[j].at(t, k);
        re[j] = members[j].at(t, k).real();
      }
      out.mean.at(t, k) = mean / static_cast<double>(n_ens);
      std::sort(re.begin(), re.end());
      auto quantile = [&](double qv) {
        const double pos = qv * (n_ens - 1);
        const long lo = static_cast<long>(pos);
        const double w = pos - lo;
        return lo + 1 < n_ens ? (1.0 - w) * re[lo] + w * re[lo + 1] : re[lo];
      };
      out.q05[static_cast<size_t>(t) * d + k] = quantile(0.05);
      out.q95[static_cast<size_t>(t) * d + k] = quantile(0.95);
    }
  if (keep_members) out.members = std::move(members);
  return out;
}

}  // namespace wpmr
