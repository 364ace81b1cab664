#include "wpmr/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "wpmr/parallel.hpp"
#include "wpmr/sim.hpp"

namespace wpmr {
namespace {

// Cascaded regressor data for one stage-coefficient candidate, shared by the
// gram pass, the prediction pass and one_step_predictions.
struct CandidateData {
  const PredictorSeries* psi = nullptr;
  const ComplexSeries* x = nullptr;
  const ComplexSeries* forcing = nullptr;
  int p = 0, r = 0, q = 0, d = 0, m = 0, kf = 0, slots = 0;
  long n = 0, count = 0;

  std::vector<std::vector<cplx>> y_by_age;  // one entry when age-uniform
  bool shared_y = true;
  std::vector<cplx> yw;                          // forcing cascade, n_w x kf
  std::vector<std::vector<double>> g;            // [slot][count]
  std::vector<std::vector<int>> cols;            // per row
  std::vector<const double*> scale_ptr;          // per age (nullable)

  const cplx* y_frame(long t, int age) const {
    const auto& arr = shared_y ? y_by_age[0] : y_by_age[age];
    return arr.data() + static_cast<size_t>(t) * m;
  }

  int unknowns(int k) const {
    return (r + 1) * static_cast<int>(cols[k].size()) +
           (k < kf ? q + 1 : 0) + slots;
  }

  // Regressor vector for (row k, step n); v must hold unknowns(k) values.
  void assemble(int k, long n_step, cplx* v) const {
    int idx = 0;
    const auto& ck = cols[k];
    for (int j = 0; j <= r; ++j) {
      const int age = p - j;
      const cplx* frame = y_frame(n_step - p + j, age);
      const double* sc = shared_y ? scale_ptr[age] : nullptr;
      if (sc) {
        for (int c : ck) v[idx++] = sc[c] * frame[c];
      } else {
        for (int c : ck) v[idx++] = frame[c];
      }
    }
    if (k < kf)
      for (int j = 0; j <= q; ++j)
        v[idx++] = yw[static_cast<size_t>(n_step + j) * kf + k];
    for (int s = 0; s < slots; ++s) v[idx++] = g[s][n_step - p];
  }
};

CandidateData build_candidate(const CascadeCoefficients& coeffs,
                              const PredictorSeries& psi,
                              const ComplexSeries& x,
                              const ComplexSeries* forcing, int r, int q,
                              bool fit_ics) {
  CandidateData cd;
  cd.psi = &psi;
  cd.x = &x;
  cd.forcing = forcing;
  cd.p = coeffs.degree();
  cd.r = r;
  cd.d = psi.layout.state_dim;
  cd.m = psi.layout.n_columns;
  cd.n = x.n();
  cd.count = cd.n - 1 - cd.p;
  if (cd.count < 1) throw usage_error("fit: series shorter than p + 2");
  if (psi.n != cd.n) throw usage_error("fit: psi/x length mismatch");
  if (psi.layout.state_dim != x.dim) throw usage_error("fit: dim mismatch");
  if (psi.max_age < cd.p)
    throw usage_error("fit: predictor series built with max_age < p");
  cd.slots = fit_ics ? coeffs.ic_slots() : 0;

  cd.shared_y = psi.age_uniform();
  if (cd.shared_y) {
    cd.y_by_age.push_back(matrix_cascade(coeffs, psi.values, cd.n, cd.m));
    cd.scale_ptr.resize(cd.p + 1, nullptr);
    for (int a = 0; a <= cd.p; ++a) {
      auto sc = psi.scale_span(a);
      cd.scale_ptr[a] = sc.empty() ? nullptr : sc.data();
    }
  } else {
    cd.y_by_age.resize(cd.p + 1);
    for (int j = 0; j <= r; ++j) {
      const int age = cd.p - j;
      if (cd.y_by_age[age].empty())
        cd.y_by_age[age] =
            matrix_cascade(coeffs, psi.values_by_age.at(age), cd.n, cd.m);
    }
  }

  if (forcing) {
    cd.q = q;
    cd.kf = forcing->dim;
    if (forcing->n() < cd.n - 1 + q)
      throw usage_error("fit: forcing series too short for the horizon");
    cd.yw = matrix_cascade(coeffs, forcing->data, forcing->n(), cd.kf);
  }

  if (cd.slots > 0) {
    cd.g = zero_input_basis(coeffs, cd.count);
  }

  cd.cols.resize(cd.d);
  for (int c = 0; c < cd.m; ++c)
    cd.cols[psi.layout.column_row[c]].push_back(c);
  return cd;
}

// Scatters a per-row solution vector back into weights / forcing / ics.
void scatter_row(const CandidateData& cd, int k, const cplx* theta,
                 InnerResult& out) {
  int idx = 0;
  for (int j = 0; j <= cd.r; ++j)
    for (int c : cd.cols[k]) out.weights[j][c] = theta[idx++];
  if (k < cd.kf)
    for (int j = 0; j <= cd.q; ++j) out.forcing_c[j][k] = theta[idx++];
  for (int s = 0; s < cd.slots; ++s)
    out.ics[static_cast<size_t>(s) * cd.d + k] = theta[idx++];
}

// Gathers the row-k slice of a full parameter set into theta order (for the
// prediction pass of one_step_predictions).
void gather_row(const CandidateData& cd, int k,
                const std::vector<std::vector<cplx>>& weights,
                const ForcingWeights* fw, const std::vector<cplx>* ics,
                std::vector<cplx>& theta) {
  theta.clear();
  for (int j = 0; j <= cd.r; ++j)
    for (int c : cd.cols[k]) theta.push_back(weights[j][c]);
  if (k < cd.kf && fw)
    for (int j = 0; j <= cd.q; ++j) theta.push_back(fw->lag(j)[k]);
  for (int s = 0; s < cd.slots; ++s)
    theta.push_back(ics ? (*ics)[static_cast<size_t>(s) * cd.d + k]
                        : cplx(0.0, 0.0));
}

struct RowSolve {
  std::vector<cplx> theta;
  double condition = 0.0;
  bool ill_conditioned = false;
};

RowSolve solve_row(const CandidateData& cd, int k, double ridge_rel) {
  const int pk = cd.unknowns(k);
  std::vector<cplx> gram(static_cast<size_t>(pk) * pk, cplx(0.0, 0.0));
  std::vector<cplx> rhs(pk, cplx(0.0, 0.0));
  std::vector<cplx> v(pk);
  for (long n = cd.p; n <= cd.n - 2; ++n) {
    cd.assemble(k, n, v.data());
    kernels::herk_rank1_upper(as_reals(gram.data()), as_reals(v.data()), pk);
    kernels::axpy_conj(as_reals(rhs.data()), as_reals(v.data()),
                       cd.x->at(n + 1, k), pk);
  }
  Eigen::MatrixXcd G(pk, pk);
  for (int i = 0; i < pk; ++i)
    for (int j = i; j < pk; ++j) {
      G(i, j) = gram[static_cast<size_t>(i) * pk + j];
      G(j, i) = std::conj(G(i, j));
    }
  RowSolve rs;
  {
    Eigen::LDLT<Eigen::MatrixXcd> probe(G);
    const Eigen::VectorXd dvec = probe.vectorD().real();
    const double dmax = dvec.maxCoeff();
    const double dmin = dvec.minCoeff();
    rs.condition = dmin > 0.0 ? dmax / dmin
                              : std::numeric_limits<double>::infinity();
    rs.ill_conditioned = !(dmin > 0.0) || rs.condition > 1e12;
  }
  const double ridge = ridge_rel * G.real().trace() / pk;
  if (ridge > 0.0)
    for (int i = 0; i < pk; ++i) G(i, i) += ridge;
  Eigen::VectorXcd b(pk);
  for (int i = 0; i < pk; ++i) b[i] = rhs[i];
  Eigen::VectorXcd sol = Eigen::LDLT<Eigen::MatrixXcd>(G).solve(b);
  rs.theta.assign(sol.data(), sol.data() + pk);
  return rs;
}

// Residual pass at the given parameters; fills `res` (aligned with x, zero
// prefix) when non-null and returns the mean squared one-step error.
double prediction_mse(const CandidateData& cd,
                      const std::vector<std::vector<cplx>>& weights,
                      const ForcingWeights* fw, const std::vector<cplx>* ics,
                      ComplexSeries* res) {
  std::vector<std::vector<cplx>> theta(cd.d);
  for (int k = 0; k < cd.d; ++k)
    gather_row(cd, k, weights, fw, ics, theta[k]);
  std::vector<double> partial(cd.d, 0.0);
  std::vector<std::vector<cplx>> vbuf(cd.d);
  for (int k = 0; k < cd.d; ++k) vbuf[k].resize(cd.unknowns(k));
  parallel_for(cd.d, [&](long k) {
    auto& v = vbuf[k];
    double acc = 0.0;
    for (long n = cd.p; n <= cd.n - 2; ++n) {
      cd.assemble(static_cast<int>(k), n, v.data());
      cplx pred(0.0, 0.0);
      const auto& th = theta[k];
      for (size_t i = 0; i < th.size(); ++i) pred += v[i] * th[i];
      const cplx err = cd.x->at(n + 1, static_cast<int>(k)) - pred;
      if (res) res->at(n + 1, static_cast<int>(k)) = err;
      acc += std::norm(err);
    }
    partial[k] = acc;
  });
  double total = 0.0;
  for (double pv : partial) total += pv;
  return total / static_cast<double>(cd.count);
}

InnerResult solve_candidate(const CandidateData& cd, const FitConfig& cfg,
                            ComplexSeries* res) {
  InnerResult out;
  out.weights.assign(cd.r + 1, std::vector<cplx>(cd.m, cplx(0.0, 0.0)));
  out.forcing_c.assign(cd.forcing ? cd.q + 1 : 0,
                       std::vector<cplx>(cd.kf, cplx(0.0, 0.0)));
  out.ics.assign(static_cast<size_t>(cd.slots) * cd.d, cplx(0.0, 0.0));
  std::vector<RowSolve> rows(cd.d);
  parallel_for(cd.d, [&](long k) {
    rows[k] = solve_row(cd, static_cast<int>(k), cfg.ridge_rel);
  });
  for (int k = 0; k < cd.d; ++k) {
    scatter_row(cd, k, rows[k].theta.data(), out);
    out.condition = std::max(out.condition, rows[k].condition);
    out.ill_conditioned = out.ill_conditioned || rows[k].ill_conditioned;
  }
  ForcingWeights fw;
  if (cd.forcing) {
    fw.q = cd.q;
    fw.dim = cd.kf;
    for (const auto& lag : out.forcing_c)
      fw.c.insert(fw.c.end(), lag.begin(), lag.end());
  }
  out.mse = prediction_mse(cd, out.weights, cd.forcing ? &fw : nullptr,
                           cd.slots ? &out.ics : nullptr, res);
  return out;
}

// Stage-parameter packing for the outer search: [alpha0 when p odd] then
// (alpha_i, beta_i) per quadratic stage.
CascadeCoefficients unpack_params(std::span<const double> x,
                                  const ModelOrders& orders, double margin) {
  std::vector<std::pair<double, double>> pairs;
  std::optional<double> lin;
  size_t i = 0;
  if (orders.has_linear_stage()) lin = x[i++];
  for (int s = 0; s < orders.stage_pairs(); ++s) {
    pairs.emplace_back(x[i], x[i + 1]);
    i += 2;
  }
  return CascadeCoefficients::unchecked(std::move(pairs), lin, margin);
}

std::vector<std::vector<double>> default_starts(const ModelOrders& orders,
                                                const FitConfig& cfg) {
  static const double kPair[5][2] = {
      {0.0, 0.0}, {0.5, 0.25}, {-0.5, 0.25}, {0.0, 0.5}, {0.0, -0.5}};
  static const double kLin[5] = {0.0, 0.5, -0.5, 0.25, -0.25};
  std::vector<std::vector<double>> starts;
  const int ns = std::clamp(cfg.n_starts, 1, 5);
  for (int s = 0; s < ns; ++s) {
    std::vector<double> x;
    if (orders.has_linear_stage()) x.push_back(kLin[s]);
    for (int i = 0; i < orders.stage_pairs(); ++i) {
      x.push_back(kPair[s][0]);
      x.push_back(kPair[s][1]);
    }
    starts.push_back(std::move(x));
  }
  for (const auto& e : cfg.extra_starts) starts.push_back(e);
  return starts;
}

}  // namespace

InnerResult inner_solve(const CascadeCoefficients& coeffs,
                        const PredictorSeries& psi, const ComplexSeries& x,
                        const FitConfig& cfg, const ComplexSeries* forcing) {
  auto cd = build_candidate(coeffs, psi, x, forcing, cfg.orders.r,
                            cfg.forcing_q, cfg.fit_internal_ics);
  return solve_candidate(cd, cfg, nullptr);
}

FitReport fit_nonlinear(const PredictorSeries& psi, const ComplexSeries& x,
                        const FitConfig& cfg, const ComplexSeries* forcing) {
  const ModelOrders orders = cfg.orders;
  FitReport report;
  report.method = "nonlinear";

  auto finish = [&](const CascadeCoefficients& coeffs) {
    auto cd = build_candidate(coeffs, psi, x, forcing, orders.r,
                              cfg.forcing_q, cfg.fit_internal_ics);
    ComplexSeries res(x.n(), x.dim, x.dt, "residuals");
    InnerResult inner = solve_candidate(cd, cfg, &res);
    report.mse = inner.mse;
    report.residuals = std::move(res);
    report.condition = inner.condition;
    report.ill_conditioned = inner.ill_conditioned;
    CascadeModel model;
    model.orders = orders;
    model.cascade = coeffs;
    model.weights = std::move(inner.weights);
    model.basis_id = psi.layout.basis_id;
    model.state_dim = x.dim;
    model.predictor_dim = psi.layout.n_columns;
    if (forcing) {
      ForcingWeights fw;
      fw.q = cfg.forcing_q;
      fw.dim = forcing->dim;
      for (const auto& lag : inner.forcing_c)
        fw.c.insert(fw.c.end(), lag.begin(), lag.end());
      model.forcing = std::move(fw);
    }
    if (cfg.fit_internal_ics && orders.p > 0) model.fitted_ics = inner.ics;
    report.model = std::move(model);
  };

  if (orders.p == 0) {
    // No stage parameters: pure linear regression.
    finish(CascadeCoefficients::checked({}, std::nullopt, cfg.margin));
    report.n_evals = 1;
    report.converged = true;
    report.best_trace = {report.mse};
    return report;
  }

  auto objective = [&](std::span<const double> theta) {
    auto coeffs = unpack_params(theta, orders, cfg.margin);
    auto cd = build_candidate(coeffs, psi, x, forcing, orders.r,
                              cfg.forcing_q, cfg.fit_internal_ics);
    return solve_candidate(cd, cfg, nullptr).mse;
  };
  auto project = [&](std::span<double> theta) {
    size_t i = 0;
    if (orders.has_linear_stage()) {
      theta[i] = std::clamp(theta[i], -1.0 + cfg.margin, 1.0 - cfg.margin);
      ++i;
    }
    for (int s = 0; s < orders.stage_pairs(); ++s) {
      auto [a, b] = project_to_triangle(theta[i], theta[i + 1], cfg.margin);
      theta[i] = a;
      theta[i + 1] = b;
      i += 2;
    }
  };

  std::vector<double> best_x;
  double best_val = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (const auto& start : default_starts(orders, cfg)) {
    if (start.size() != static_cast<size_t>(orders.p))
      throw usage_error("fit_nonlinear: start point has wrong dimension");
    auto rs = nelder_mead(objective, project, start, cfg.optim);
    report.n_evals += rs.n_evals;
    converged = converged || rs.converged;
    for (double v : rs.best_trace)
      report.best_trace.push_back(std::min(
          v, report.best_trace.empty() ? v : report.best_trace.back()));
    if (rs.value < best_val) {
      best_val = rs.value;
      best_x = rs.x;
    }
  }
  report.converged = converged;
  finish(unpack_params(best_x, orders, cfg.margin));
  return report;
}

FitReport fit_linear(const PredictorSeries& psi, const ComplexSeries& x,
                     const FitConfig& cfg, const ComplexSeries* forcing) {
  const int p = cfg.orders.p, r = cfg.orders.r;
  const int d = psi.layout.state_dim, m = psi.layout.n_columns;
  const long n = x.n();
  const long count = n - 1 - p;
  if (count < 1) throw usage_error("fit_linear: series shorter than p + 2");
  if (psi.n != n || x.dim != d) throw usage_error("fit_linear: shape mismatch");
  const int q = forcing ? cfg.forcing_q : 0;
  const int kf = forcing ? forcing->dim : 0;
  if (forcing && forcing->n() < n - 1 + q)
    throw usage_error("fit_linear: forcing series too short");

  std::vector<std::vector<int>> cols(d);
  for (int c = 0; c < m; ++c) cols[psi.layout.column_row[c]].push_back(c);

  // Per-row blocks of the joint normal equations; the shared real a couples
  // the rows and is recovered from the Schur complement.
  Eigen::MatrixXd a_aa = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd r_a = Eigen::VectorXd::Zero(p);
  std::vector<Eigen::MatrixXcd> gk(d);
  std::vector<Eigen::MatrixXcd> mk(d);
  std::vector<Eigen::VectorXcd> rk(d);
  std::vector<int> pk(d);
  for (int k = 0; k < d; ++k) {
    pk[k] = (r + 1) * static_cast<int>(cols[k].size()) +
            (k < kf ? q + 1 : 0);
    gk[k] = Eigen::MatrixXcd::Zero(pk[k], pk[k]);
    mk[k] = Eigen::MatrixXcd::Zero(pk[k], p);
    rk[k] = Eigen::VectorXcd::Zero(pk[k]);
  }

  std::vector<cplx> v;
  std::vector<cplx> s(p);
  for (long t = p + 1; t <= n - 1; ++t) {
    for (int k = 0; k < d; ++k) {
      v.clear();
      for (int j = 0; j <= r; ++j) {
        const int age = p - j;
        const auto frame = psi.frame(t - p - 1 + j, age);
        const auto sc = psi.scale_span(age);
        for (int c : cols[k])
          v.push_back(sc.empty() ? frame[c] : sc[c] * frame[c]);
      }
      if (k < kf)
        for (int j = 0; j <= q; ++j) v.push_back(forcing->at(t - 1 + j, k));
      for (int j = 0; j < p; ++j) s[j] = -x.at(t - p + j, k);
      const cplx target = x.at(t, k);

      const int nk = pk[k];
      kernels::herk_rank1_upper(
          as_reals(reinterpret_cast<cplx*>(gk[k].data())), as_reals(v.data()),
          nk);
      for (int i = 0; i < nk; ++i) rk[k][i] += std::conj(v[i]) * target;
      for (int j = 0; j < p; ++j) {
        for (int i = 0; i < nk; ++i) mk[k](i, j) += std::conj(v[i]) * s[j];
        r_a[j] += (std::conj(s[j]) * target).real();
        for (int l = j; l < p; ++l)
          a_aa(j, l) += (std::conj(s[j]) * s[l]).real();
      }
    }
  }
  for (int j = 0; j < p; ++j)
    for (int l = 0; l < j; ++l) a_aa(j, l) = a_aa(l, j);

  // herk filled gk as row-major upper; mirror into a full Hermitian matrix.
  for (int k = 0; k < d; ++k) {
    Eigen::MatrixXcd full(pk[k], pk[k]);
    for (int i = 0; i < pk[k]; ++i)
      for (int j = i; j < pk[k]; ++j) {
        // data() is column-major; herk wrote row-major upper: entry (i, j)
        // of the logical matrix sits at flat index i * pk + j.
        full(i, j) = gk[k].data()[static_cast<size_t>(i) * pk[k] + j];
        full(j, i) = std::conj(full(i, j));
      }
    const double ridge =
        cfg.ridge_rel * full.real().trace() / std::max(1, pk[k]);
    for (int i = 0; i < pk[k]; ++i) full(i, i) += ridge;
    gk[k] = std::move(full);
  }

  Eigen::MatrixXd schur = a_aa;
  Eigen::VectorXd rhs_a = r_a;
  std::vector<Eigen::LDLT<Eigen::MatrixXcd>> fact(d);
  for (int k = 0; k < d; ++k) {
    fact[k].compute(gk[k]);
    if (p > 0) {
      Eigen::MatrixXcd gim = fact[k].solve(mk[k]);
      schur -= (mk[k].adjoint() * gim).real();
      rhs_a -= (mk[k].adjoint() * fact[k].solve(rk[k])).real();
    }
  }

  std::vector<double> a(p, 0.0);
  Eigen::VectorXd avec;
  if (p > 0) {
    avec = schur.ldlt().solve(rhs_a);
    for (int j = 0; j < p; ++j) a[j] = avec[j];
  }

  FitReport report;
  report.method = "linear";
  report.n_evals = 1;
  report.converged = true;

  CascadeModel model;
  model.orders = cfg.orders;
  model.weights.assign(r + 1, std::vector<cplx>(m, cplx(0.0, 0.0)));
  ForcingWeights fw;
  fw.q = q;
  fw.dim = kf;
  fw.c.assign(static_cast<size_t>(q + 1) * kf, cplx(0.0, 0.0));
  for (int k = 0; k < d; ++k) {
    Eigen::VectorXcd bk = rk[k];
    if (p > 0) bk -= mk[k] * avec;
    Eigen::VectorXcd theta = fact[k].solve(bk);
    int idx = 0;
    for (int j = 0; j <= r; ++j)
      for (int c : cols[k]) model.weights[j][c] = theta[idx++];
    if (k < kf)
      for (int j = 0; j <= q; ++j)
        fw.c[static_cast<size_t>(j) * kf + k] = theta[idx++];
  }
  if (forcing) model.forcing = fw;
  model.basis_id = psi.layout.basis_id;
  model.state_dim = d;
  model.predictor_dim = m;
  model.cascade = p > 0 ? pair_roots_to_cascade(a, cfg.margin)
                        : CascadeCoefficients::checked({}, std::nullopt,
                                                       cfg.margin);
  report.stable = model.cascade.is_stable();

  // E* from the multistep one-step errors.
  ComplexSeries bar_res(n, d, x.dt, "multistep-residuals");
  double total = 0.0;
  std::vector<cplx> vv;
  for (long t = p + 1; t <= n - 1; ++t) {
    for (int k = 0; k < d; ++k) {
      cplx pred(0.0, 0.0);
      for (int j = 0; j < p; ++j) pred -= a[j] * x.at(t - p + j, k);
      for (int j = 0; j <= r; ++j) {
        const int age = p - j;
        const auto frame = psi.frame(t - p - 1 + j, age);
        const auto sc = psi.scale_span(age);
        for (int c : cols[k])
          pred += (sc.empty() ? frame[c] : sc[c] * frame[c]) *
                  model.weights[j][c];
      }
      if (k < kf)
        for (int j = 0; j <= q; ++j)
          pred += fw.lag(j)[k] * forcing->at(t - 1 + j, k);
      const cplx err = x.at(t, k) - pred;
      bar_res.at(t, k) = err;
      total += std::norm(err);
    }
  }
  report.mse = total / static_cast<double>(count);
  report.best_trace = {report.mse};

  report.model = std::move(model);
  if (report.stable) {
    // Noise modeling and replay use the cascade-form residuals (the same
    // machinery that runs the fitted model).
    ComplexSeries xhat =
        one_step_predictions(report.model, psi, x, forcing);
    ComplexSeries res(n, d, x.dt, "residuals");
    for (long t = p + 1; t <= n - 1; ++t)
      for (int k = 0; k < d; ++k)
        res.at(t, k) = x.at(t, k) - xhat.at(t, k);
    report.residuals = std::move(res);
  } else {
    report.residuals = std::move(bar_res);
  }
  return report;
}

ComplexSeries one_step_predictions(const CascadeModel& model,
                                   const PredictorSeries& psi,
                                   const ComplexSeries& x,
                                   const ComplexSeries* forcing) {
  model.validate();
  auto cd = build_candidate(model.cascade, psi, x, forcing, model.orders.r,
                            model.forcing ? model.forcing->q : 0,
                            model.fitted_ics.has_value());
  ComplexSeries out = x;
  out.label = "one-step-predictions";
  std::vector<std::vector<cplx>> theta(cd.d);
  for (int k = 0; k < cd.d; ++k)
    gather_row(cd, k, model.weights,
               model.forcing ? &*model.forcing : nullptr,
               model.fitted_ics ? &*model.fitted_ics : nullptr, theta[k]);
  std::vector<cplx> v;
  for (int k = 0; k < cd.d; ++k) {
    v.resize(cd.unknowns(k));
    for (long n = cd.p; n <= cd.n - 2; ++n) {
      cd.assemble(k, n, v.data());
      cplx pred(0.0, 0.0);
      for (size_t i = 0; i < theta[k].size(); ++i) pred += v[i] * theta[k][i];
      out.at(n + 1, k) = pred;
    }
  }
  return out;
}

ComplexSeries replay_residuals(const CascadeModel& model,
                               const PredictorBasis& basis,
                               const ComplexSeries& x_data,
                               const ComplexSeries& residuals,
                               const ComplexSeries* forcing) {
  ComplexSeries init(model.orders.p + 1, x_data.dim, x_data.dt);
  for (long t = 0; t <= model.orders.p; ++t)
    std::copy_n(x_data.row(t).data(), x_data.dim, init.row(t).data());
  NoiseSource ns;
  ns.injected = &residuals;
  ReducedRunOptions opt;
  opt.n_steps = x_data.n();
  opt.fit_convention = true;
  return run_reduced(model, basis, init, ns, opt, forcing);
}

ComplexSeries residuals_for_noise(const FitReport& report, long extra_trim) {
  const int p = report.model.orders.p;
  const long start_valid = p + 1;
  const long trim = extra_trim >= 0 ? extra_trim : std::max<long>(p, 100);
  const long start = std::min<long>(start_valid + trim, report.residuals.n());
  const long len = report.residuals.n() - start;
  if (len < 1) throw usage_error("residuals_for_noise: nothing left after trim");
  ComplexSeries out(len, report.residuals.dim, report.residuals.dt,
                    "residuals-trimmed");
  for (long t = 0; t < len; ++t)
    std::copy_n(report.residuals.row(start + t).data(), out.dim,
                out.row(t).data());
  return out;
}

}  // namespace wpmr
