// wpmr: Wiener-projection model reduction driver.
// Pipeline: simulate-full -> fit -> simulate-reduced / forecast -> stats.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "wpmr/kernels.hpp"
#include "wpmr/parallel.hpp"
#include "wpmr/pipeline.hpp"

#include "presets.inc"

namespace {

using namespace wpmr;
using io::json;

json load_config(const std::string& preset, const std::string& config_path) {
  if (!preset.empty()) {
    for (const auto& p : kPresets)
      if (preset == p.name) return json::parse(p.text);
    throw usage_error("unknown preset '" + preset +
                      "' (ks-desk, ks-paper, burgers-desk, burgers-paper)");
  }
  if (config_path.empty()) throw usage_error("need --preset or --config");
  return io::read_json_file(config_path);
}

std::uint64_t env_seed_override(std::uint64_t seed) {
  if (const char* env = std::getenv("WPMR_SEED")) return std::strtoull(env, nullptr, 10);
  return seed;
}

struct FitCliOptions {
  std::string dataset, method = "nonlinear", output = "model.json",
              report_path;
  int p = 3, r = 3, q = 0;
  double ridge = 1e-8, margin = 1e-6, tol = 1e-8;
  long max_evals = 2000;
  bool no_ics = false, no_forcing = false;
};

void write_fit_report(const std::string& path, const FitReport& rep,
                      const json& provenance) {
  json j;
  j["method"] = rep.method;
  j["mse"] = rep.mse;
  j["n_evals"] = rep.n_evals;
  j["converged"] = rep.converged;
  j["stable"] = rep.stable;
  j["condition"] = rep.condition;
  j["ill_conditioned"] = rep.ill_conditioned;
  j["orders"] = {{"p", rep.model.orders.p}, {"r", rep.model.orders.r}};
  json pairs = json::array();
  for (auto& [a, b] : rep.model.cascade.pairs) pairs.push_back({a, b});
  j["cascade_pairs"] = pairs;
  if (rep.model.cascade.linear_alpha)
    j["linear_alpha"] = *rep.model.cascade.linear_alpha;
  j["best_trace"] = rep.best_trace;
  j["provenance"] = provenance;
  io::write_json_file(path, j);
}

int cmd_simulate_full(const std::string& preset, const std::string& config,
                      const std::string& output, const std::string& csv,
                      long steps_override, std::uint64_t seed_override) {
  json cj = load_config(preset, config);
  if (steps_override == 0)
    throw usage_error("--steps 0: refusing to write an empty dataset");
  if (steps_override > 0) cj["n_steps"] = steps_override;
  if (seed_override) cj["seed"] = seed_override;
  cj["seed"] = env_seed_override(cj.value("seed", 1UL));
  SpectralPdeConfig cfg = pipeline::config_from_json(cj);
  std::cerr << "wpmr: integrating " << (cfg.kind == PdeKind::ks ? "ks" : "burgers")
            << " (" << cfg.n_modes << " modes, " << cfg.burn_in << " burn-in + "
            << cfg.n_steps << " steps)\n";
  io::Dataset ds = pipeline::make_dataset(cfg);
  io::write_dataset(output, ds);
  std::cerr << "wpmr: wrote " << ds.observed.n() << " observations to "
            << output << "\n";
  if (!csv.empty()) io::write_series_csv(csv, ds.observed);
  return 0;
}

int cmd_fit(const FitCliOptions& o) {
  io::Dataset ds = io::read_dataset(o.dataset);
  SpectralPdeConfig cfg = pipeline::config_from_json(ds.meta.at("config"));
  auto basis = pipeline::default_basis(cfg);

  FitConfig fc;
  fc.orders = ModelOrders(o.p, o.r);
  fc.margin = o.margin;
  fc.optim.max_evals = o.max_evals;
  fc.optim.tol_rel = o.tol;
  fc.ridge_rel = o.ridge;
  fc.fit_internal_ics = !o.no_ics;
  fc.forcing_q = o.q;
  if (o.no_forcing) ds.forcing.reset();

  std::cerr << "wpmr: fitting p=" << o.p << " r=" << o.r << " method="
            << o.method << (ds.forcing ? " with shared forcing" : "") << "\n";
  auto outcome = pipeline::fit_dataset(ds, *basis, fc, o.method);
  const auto& rep = outcome.report;
  std::cerr << "wpmr: mse=" << rep.mse << " evals=" << rep.n_evals
            << (rep.converged ? "" : " [non-converged]")
            << (rep.stable ? "" : " [unstable A(z)]") << "\n";

  json prov;
  prov["dataset"] = ds.meta.value("config_hash", "");
  prov["fit"] = {{"method", o.method}, {"p", o.p}, {"r", o.r},
                 {"q", o.q}, {"ridge", o.ridge},
                 {"fit_internal_ics", !o.no_ics}};
  prov["lineage"] = ds.meta.value("lineage", json::array());
  prov["lineage"].push_back(io::fnv1a_hex(prov.dump()));
  io::ModelFile mf{rep.model, outcome.noise, prov};
  io::write_model(o.output, mf);
  if (!o.report_path.empty()) write_fit_report(o.report_path, rep, prov);
  return rep.converged ? 0 : 3;
}

int cmd_simulate_reduced(const std::string& model_path,
                         const std::string& dataset_path, long steps,
                         std::uint64_t seed, const std::string& output,
                         const std::string& csv) {
  io::ModelFile mf = io::read_model(model_path);
  io::Dataset ds = io::read_dataset(dataset_path);
  auto basis = io::basis_from_id(mf.model.basis_id);
  const int p = mf.model.orders.p;
  ComplexSeries init(2 * p + 2, ds.observed.dim, ds.observed.dt);
  for (long t = 0; t < init.n(); ++t)
    std::copy_n(ds.observed.row(t).data(), ds.observed.dim,
                init.row(t).data());
  RngStream rng(env_seed_override(seed));
  ComplexSeries run =
      mf.model.forcing && ds.forcing
          ? simulate_shared_forcing(mf.model, *basis, mf.noise, init,
                                    *ds.forcing, steps, rng)
          : simulate(mf.model, *basis, mf.noise, init, steps, rng);
  io::Dataset out;
  out.observed = std::move(run);
  out.meta["kind_detail"] = "reduced-run";
  out.meta["seed"] = seed;
  out.meta["model_provenance"] = mf.provenance;
  out.meta["lineage"] = mf.provenance.value("lineage", json::array());
  for (const auto& h : ds.meta.value("lineage", json::array()))
    out.meta["lineage"].push_back(h);
  io::write_dataset(output, out);
  if (!csv.empty()) io::write_series_csv(csv, out.observed);
  return 0;
}

int cmd_forecast(const std::string& model_path, const std::string& dataset_path,
                 int n_ens, long horizon, long pieces, long t_lag,
                 std::uint64_t seed, const std::string& prefix, bool members,
                 bool force) {
  io::ModelFile mf = io::read_model(model_path);
  io::Dataset ds = io::read_dataset(dataset_path);
  if (!force && !io::lineage_compatible(mf.provenance, ds.meta))
    throw usage_error("forecast: model/dataset lineages disjoint (use --force)");
  auto basis = io::basis_from_id(mf.model.basis_id);
  pipeline::ForecastOptions fo;
  fo.n_ens = n_ens;
  fo.horizon = horizon;
  fo.n_pieces = static_cast<int>(pieces);
  fo.t_lag_steps = t_lag;
  fo.seed = env_seed_override(seed);
  auto res = pipeline::run_forecast(mf.model, *basis, mf.noise, ds.observed,
                                    fo, ds.forcing ? &*ds.forcing : nullptr);

  {
    std::ofstream f(prefix + "_skill.csv");
    f.precision(12);
    f << "lead,rmse,rmse_members_mean,rmse_climatology,ancr\n";
    for (size_t t = 0; t < res.lead.size(); ++t)
      f << res.lead[t] << "," << res.rmse[t] << ","
        << res.rmse_members_mean[t] << "," << res.rmse_climatology[t] << ","
        << res.ancr[t] << "\n";
  }
  {
    const auto& fp = res.first_piece;
    const int d = fp.mean.dim;
    std::ofstream f(prefix + "_bands.csv");
    f.precision(12);
    f << "lead";
    for (int k = 1; k <= d; ++k)
      f << ",mean_re_u" << k << ",q05_re_u" << k << ",q95_re_u" << k;
    f << "\n";
    for (long t = 0; t < fp.mean.n(); ++t) {
      f << t * fp.mean.dt;
      for (int k = 0; k < d; ++k)
        f << "," << fp.mean.at(t, k).real() << ","
          << fp.q05[static_cast<size_t>(t) * d + k] << ","
          << fp.q95[static_cast<size_t>(t) * d + k];
      f << "\n";
    }
  }
  if (members)
    for (size_t j = 0; j < res.first_piece.members.size(); ++j)
      io::write_series_csv(prefix + "_member" + std::to_string(j) + ".csv",
                           res.first_piece.members[j]);
  json summary;
  summary["n_pieces"] = res.n_pieces;
  summary["t_lag_steps"] = res.t_lag_steps;
  summary["init_points"] = res.init_points;
  summary["n_ens"] = n_ens;
  summary["horizon"] = horizon;
  summary["skipped_ancr"] = res.skipped;
  summary["lineage"] = mf.provenance.value("lineage", json::array());
  io::write_json_file(prefix + "_summary.json", summary);
  std::cerr << "wpmr: forecast over " << res.n_pieces << " pieces written to "
            << prefix << "_*\n";
  return 0;
}

int cmd_stats(const std::string& path_a, const std::string& path_b,
              const std::string& which_csv, int max_lag, int bins, int ccf_ref,
              const std::string& prefix, bool force) {
  io::Dataset a = io::read_dataset(path_a);
  io::Dataset b = io::read_dataset(path_b);
  if (a.observed.dim != b.observed.dim)
    throw usage_error("stats: dimension mismatch: " +
                      std::to_string(a.observed.dim) + " vs " +
                      std::to_string(b.observed.dim));
  if (std::abs(a.observed.dt - b.observed.dt) >
      1e-12 * std::max(a.observed.dt, b.observed.dt))
    throw usage_error("stats: dt mismatch");
  if (!force && !io::lineage_compatible(a.meta, b.meta))
    throw usage_error("stats: provenance lineages disjoint (use --force)");
  const int d = a.observed.dim;
  json summary;

  std::vector<std::string> which;
  {
    std::string cur;
    for (char c : which_csv + ",") {
      if (c == ',') {
        if (!cur.empty()) which.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
  }

  for (const auto& w : which) {
    if (w == "acf") {
      const int lag = std::min<long>(max_lag, std::min(a.observed.n(),
                                                       b.observed.n()) - 1);
      auto ca = acf(a.observed, lag);
      auto cb = acf(b.observed, lag);
      std::ofstream f(prefix + "_acf.csv");
      f.precision(12);
      f << "lag_time";
      for (int k = 1; k <= d; ++k) f << ",a_re_u" << k << ",b_re_u" << k;
      f << "\n";
      double max_dev = 0.0;
      const size_t dd = static_cast<size_t>(d) * d;
      for (int h = 0; h <= lag; ++h) {
        f << h * a.observed.dt;
        for (int k = 0; k < d; ++k) {
          const double va = ca[h * dd + k * d + k].real();
          const double vb = cb[h * dd + k * d + k].real();
          const double na = va / ca[k * d + k].real();
          const double nb = vb / cb[k * d + k].real();
          max_dev = std::max(max_dev, std::abs(na - nb));
          f << "," << va << "," << vb;
        }
        f << "\n";
      }
      summary["acf_max_normalized_dev"] = max_dev;
    } else if (w == "ccf") {
      const int ref = std::min(ccf_ref, d) - 1;
      const int lag = std::min<long>(max_lag, std::min(a.observed.n(),
                                                       b.observed.n()) - 1);
      // Energy cross-correlations cov(|u_k|^2, |u_ref|^2).
      auto energy = [&](const ComplexSeries& s) {
        ComplexSeries e(s.n(), s.dim, s.dt);
        for (long t = 0; t < s.n(); ++t)
          for (int k = 0; k < d; ++k)
            e.at(t, k) = cplx(std::norm(s.at(t, k)), 0.0);
        return e;
      };
      auto ea = energy(a.observed), eb = energy(b.observed);
      auto ca = ccf(ea, ea, lag);
      auto cb = ccf(eb, eb, lag);
      std::ofstream f(prefix + "_ccf.csv");
      f.precision(12);
      f << "lag_time";
      for (int k = 1; k <= d; ++k) f << ",a_e" << k << "_e" << (ref + 1)
                                     << ",b_e" << k << "_e" << (ref + 1);
      f << "\n";
      const size_t dd = static_cast<size_t>(d) * d;
      for (int h = -lag; h <= lag; ++h) {
        f << h * a.observed.dt;
        for (int k = 0; k < d; ++k) {
          f << "," << ca[(h + lag) * dd + k * d + ref].real() << ","
            << cb[(h + lag) * dd + k * d + ref].real();
        }
        f << "\n";
      }
    } else if (w == "marginal") {
      std::ofstream f(prefix + "_marginal.csv");
      f.precision(12);
      f << "mode,bin_center,a_density,a_se,b_density,b_se\n";
      double l1 = 0.0;
      for (int k = 0; k < d; ++k) {
        auto ha = marginal_density(a.observed, k, bins);
        auto hb = marginal_density(b.observed, k, bins);
        // Rebin b onto a's support for the comparison defect.
        for (int i = 0; i < bins; ++i) {
          const double center = ha.lo + (i + 0.5) * ha.bin_width();
          f << (k + 1) << "," << center << "," << ha.density[i] << ","
            << ha.se[i] << "," << hb.density[i] << "," << hb.se[i] << "\n";
        }
        for (int i = 0; i < bins; ++i)
          l1 += std::abs(ha.density[i] * ha.bin_width() -
                         hb.density[i] * hb.bin_width());
      }
      summary["marginal_l1"] = l1 / d;
    } else if (w == "spectrum") {
      auto ea = energy_spectrum(a.observed);
      auto eb = energy_spectrum(b.observed);
      std::ofstream f(prefix + "_spectrum.csv");
      f.precision(12);
      f << "mode,a_energy,a_se,b_energy,b_se,rel_diff\n";
      double max_rel = 0.0;
      for (int k = 0; k < d; ++k) {
        const double rel = std::abs(ea.mean[k] - eb.mean[k]) /
                           std::max(1e-300, ea.mean[k]);
        max_rel = std::max(max_rel, rel);
        f << (k + 1) << "," << ea.mean[k] << "," << ea.se[k] << ","
          << eb.mean[k] << "," << eb.se[k] << "," << rel << "\n";
      }
      summary["energy_max_rel_diff"] = max_rel;
    } else if (w == "powerspec") {
      auto sa = power_spectrum(a.observed);
      auto sb = power_spectrum(b.observed);
      std::ofstream f(prefix + "_powerspec.csv");
      f.precision(12);
      f << "theta";
      for (int k = 1; k <= d; ++k) f << ",a_S" << k << ",b_S" << k;
      f << "\n";
      const long grid = std::min(sa.grid(), sb.grid());
      for (long j = 0; j < grid; ++j) {
        f << sa.freqs[j];
        for (int k = 0; k < d; ++k)
          f << "," << sa.at(j)[k * d + k].real() << ","
            << sb.at(j * sb.grid() / grid)[k * d + k].real();
        f << "\n";
      }
    } else {
      throw usage_error("stats: unknown statistic '" + w + "'");
    }
  }
  io::write_json_file(prefix + "_summary.json", summary);
  return 0;
}

int cmd_sweep(const std::string& dataset_path, int p_min, int p_max,
              const std::string& method, long test_steps,
              const std::string& out_csv) {
  io::Dataset ds = io::read_dataset(dataset_path);
  SpectralPdeConfig cfg = pipeline::config_from_json(ds.meta.at("config"));
  auto basis = pipeline::default_basis(cfg);
  std::ofstream f(out_csv);
  f << "p,r,mse,stable_fit,free_run_bounded,n_evals\n";
  std::cout << "  p  r          mse   A(z)-stable  free-run\n";
  for (int p = p_min; p <= p_max; ++p)
    for (int r = 0; r <= p; ++r) {
      FitConfig fc;
      fc.orders = ModelOrders(p, r);
      auto outcome = pipeline::fit_dataset(ds, *basis, fc, method);
      bool bounded = true;
      try {
        ComplexSeries init(2 * p + 2, ds.observed.dim, ds.observed.dt);
        for (long t = 0; t < init.n(); ++t)
          std::copy_n(ds.observed.row(t).data(), ds.observed.dim,
                      init.row(t).data());
        RngStream rng(9);
        simulate(outcome.report.model, *basis, outcome.noise, init,
                 test_steps, rng,
                 ds.forcing ? &*ds.forcing : nullptr);
      } catch (const blowup_error&) {
        bounded = false;
      } catch (const usage_error&) {
        bounded = false;  // e.g. unstable linear fit refused by the runner
      }
      f << p << "," << r << "," << outcome.report.mse << ","
        << outcome.report.stable << "," << bounded << ","
        << outcome.report.n_evals << "\n";
      std::printf("%3d %2d %12.5e %12s %9s\n", p, r, outcome.report.mse,
                  outcome.report.stable ? "yes" : "no",
                  bounded ? "bounded" : "blow-up");
    }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wiener-projection model reduction"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads");

  // simulate-full
  std::string preset, config, output = "data.wpds", csv;
  long steps = -1;
  std::uint64_t seed = 0;
  auto* full = app.add_subcommand("simulate-full",
                                  "integrate a full model and write a dataset");
  full->add_option("--preset", preset,
                   "ks-desk | ks-paper | burgers-desk | burgers-paper");
  full->add_option("--config", config, "config JSON file");
  full->add_option("--output,-o", output, "output dataset path");
  full->add_option("--csv", csv, "also export observations as CSV");
  full->add_option("--steps", steps, "override n_steps");
  full->add_option("--seed", seed, "override seed");

  // fit
  FitCliOptions fo;
  auto* fit = app.add_subcommand("fit", "fit a reduced model to a dataset");
  fit->add_option("--dataset,-d", fo.dataset, "input dataset")->required();
  fit->add_option("-p", fo.p, "memory order p")->required();
  fit->add_option("-r", fo.r, "predictor lag order r")->required();
  fit->add_option("--method", fo.method, "nonlinear | linear");
  fit->add_option("-q", fo.q, "forcing moving-average order");
  fit->add_option("--ridge", fo.ridge, "relative ridge strength");
  fit->add_option("--margin", fo.margin, "stability triangle margin");
  fit->add_option("--max-evals", fo.max_evals, "outer evaluations per start");
  fit->add_option("--tol", fo.tol, "outer relative tolerance");
  fit->add_flag("--no-ics", fo.no_ics, "do not fit internal initial values");
  fit->add_flag("--no-forcing", fo.no_forcing, "ignore recorded forcing");
  fit->add_option("--output,-o", fo.output, "model file");
  fit->add_option("--report", fo.report_path, "fit report JSON");

  // simulate-reduced
  std::string model_path, dataset_path, red_out = "reduced.wpds", red_csv;
  long red_steps = 10000;
  std::uint64_t red_seed = 1;
  auto* red = app.add_subcommand("simulate-reduced",
                                 "free-run a fitted reduced model");
  red->add_option("--model,-m", model_path, "model file")->required();
  red->add_option("--dataset,-d", dataset_path,
                  "dataset providing the initial segment (and forcing)")
      ->required();
  red->add_option("--steps", red_steps, "output rows");
  red->add_option("--seed", red_seed, "noise seed");
  red->add_option("--output,-o", red_out, "output dataset");
  red->add_option("--csv", red_csv, "also export as CSV");

  // forecast
  std::string fc_model, fc_dataset, fc_prefix = "forecast";
  int fc_ens = 100;
  long fc_horizon = 250, fc_pieces = 0, fc_tlag = 0;
  std::uint64_t fc_seed = 7;
  bool fc_members = false, fc_force = false;
  auto* fc = app.add_subcommand("forecast",
                                "ensemble forecasts + RMSE/ANCR skill");
  fc->add_option("--model,-m", fc_model)->required();
  fc->add_option("--dataset,-d", fc_dataset)->required();
  fc->add_option("--ens", fc_ens, "ensemble size");
  fc->add_option("--horizon", fc_horizon, "forecast steps past the init segment");
  fc->add_option("--pieces", fc_pieces, "number of pieces (0 = auto)");
  fc->add_option("--t-lag", fc_tlag, "piece spacing in steps (0 = auto)");
  fc->add_option("--seed", fc_seed);
  fc->add_option("--output-prefix,-o", fc_prefix);
  fc->add_flag("--members", fc_members, "write first-piece member paths");
  fc->add_flag("--force", fc_force, "allow disjoint provenance");

  // stats
  std::string st_a, st_b, st_which = "acf,marginal,spectrum",
              st_prefix = "stats";
  int st_lag = 200, st_bins = 40, st_ref = 4;
  bool st_force = false;
  auto* st = app.add_subcommand("stats", "side-by-side run statistics");
  st->add_option("--run-a,-a", st_a)->required();
  st->add_option("--run-b,-b", st_b)->required();
  st->add_option("--which", st_which, "acf,ccf,marginal,spectrum,powerspec");
  st->add_option("--max-lag", st_lag, "lags (steps)");
  st->add_option("--bins", st_bins, "marginal histogram bins");
  st->add_option("--ccf-ref", st_ref, "reference mode for energy CCFs");
  st->add_option("--output-prefix,-o", st_prefix);
  st->add_flag("--force", st_force, "allow disjoint provenance");

  // sweep
  std::string sw_dataset, sw_method = "nonlinear", sw_out = "sweep.csv";
  int sw_pmin = 1, sw_pmax = 4;
  long sw_test = 2000;
  auto* sw = app.add_subcommand("sweep", "order sweep over (p, r <= p)");
  sw->add_option("--dataset,-d", sw_dataset)->required();
  sw->add_option("--p-min", sw_pmin);
  sw->add_option("--p-max", sw_pmax);
  sw->add_option("--method", sw_method);
  sw->add_option("--test-steps", sw_test, "free-run boundedness horizon");
  sw->add_option("--output,-o", sw_out);

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) wpmr::set_thread_count(threads);

  try {
    if (*full)
      return cmd_simulate_full(preset, config, output, csv, steps, seed);
    if (*fit) return cmd_fit(fo);
    if (*red)
      return cmd_simulate_reduced(model_path, dataset_path, red_steps,
                                  red_seed, red_out, red_csv);
    if (*fc)
      return cmd_forecast(fc_model, fc_dataset, fc_ens, fc_horizon, fc_pieces,
                          fc_tlag, fc_seed, fc_prefix, fc_members, fc_force);
    if (*st)
      return cmd_stats(st_a, st_b, st_which, st_lag, st_bins, st_ref,
                       st_prefix, st_force);
    if (*sw)
      return cmd_sweep(sw_dataset, sw_pmin, sw_pmax, sw_method, sw_test,
                       sw_out);
  } catch (const usage_error& e) {
    std::cerr << "wpmr: error: " << e.what() << "\n";
    return 2;
  } catch (const blowup_error& e) {
    std::cerr << "wpmr: blow-up: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "wpmr: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
