#include "wpmr/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace wpmr {
namespace {

std::vector<double> ks_symbol(int K, double L) {
  std::vector<double> s(K);
  for (int k = 1; k <= K; ++k) {
    const double lam = 2.0 * std::numbers::pi * k / L;
    s[k - 1] = lam * lam - lam * lam * lam * lam;
  }
  return s;
}

std::vector<double> burgers_symbol(int K, double nu) {
  std::vector<double> s(K);
  for (int k = 1; k <= K; ++k) s[k - 1] = -nu * static_cast<double>(k) * k;
  return s;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::vector<double> PredictorBasis::age_scale(int) const {
  return std::vector<double>(layout().n_columns, 1.0);
}

PredictorLayout interaction_basis_layout(int K, std::string basis_id) {
  PredictorLayout layout;
  layout.state_dim = K;
  layout.n_columns = 2 * K + K * K;
  layout.column_row.resize(layout.n_columns);
  for (int k = 0; k < K; ++k) {
    layout.column_row[k] = k;
    layout.column_row[K + k] = k;
    for (int i = 0; i < K; ++i) layout.column_row[2 * K + k * K + i] = k;
  }
  layout.basis_id = std::move(basis_id);
  layout.validate();
  return layout;
}

void quadratic_reconstruction(std::span<const cplx> u, int K,
                              std::span<cplx> recon, bool ks_prefactor,
                              double nu_decay) {
  for (int k = 1; k <= K; ++k) recon[k - 1] = u[k - 1];
  for (int k = K + 1; k <= 2 * K; ++k) {
    cplx sum(0.0, 0.0);
    for (int l = k - K; l <= K; ++l) sum += u[l - 1] * u[k - l - 1];
    if (ks_prefactor) {
      recon[k - 1] = cplx(0.0, 1.0) * sum;
    } else {
      const double kk = static_cast<double>(k);
      recon[k - 1] =
          cplx(0.0, kk / 2.0) * std::exp(-nu_decay * kk * kk) * sum;
    }
  }
}

PredictorSeries build_series(const PredictorBasis& basis,
                             const ComplexSeries& data, int max_age) {
  PredictorSeries out;
  out.layout = basis.layout();
  out.n = data.n();
  out.max_age = max_age;
  const int m = out.layout.n_columns;
  if (basis.age_uniform()) {
    out.values.resize(static_cast<size_t>(out.n) * m);
    for (long t = 0; t < out.n; ++t)
      basis.eval(data, t, 0, {out.values.data() + t * m, (size_t)m});
    out.age_scales.resize(max_age + 1);
    for (int a = 0; a <= max_age; ++a) out.age_scales[a] = basis.age_scale(a);
  } else {
    out.values_by_age.resize(max_age + 1);
    for (int a = 0; a <= max_age; ++a) {
      auto& arr = out.values_by_age[a];
      arr.resize(static_cast<size_t>(out.n) * m);
      for (long t = 0; t < out.n; ++t)
        basis.eval(data, t, a, {arr.data() + t * m, (size_t)m});
    }
  }
  return out;
}

std::string ks_basis_id(const KsBasisOptions& opt) {
  return "ks/v1;K=" + std::to_string(opt.K) + ";L=" + fmt_double(opt.L) +
         ";delta=" + fmt_double(opt.delta) +
         ";conj=" + (opt.conj_partner ? "1" : "0") +
         ";lag1=" + (opt.lag_one_first_factor ? "1" : "0");
}

std::string burgers_basis_id(const BurgersBasisOptions& opt) {
  return "burgers/v1;K=" + std::to_string(opt.K) +
         ";nu=" + fmt_double(opt.nu) + ";delta=" + fmt_double(opt.delta) +
         ";conj=" + (opt.conj_partner ? "1" : "0");
}

KsBasis::KsBasis(const KsBasisOptions& opt)
    : opt_(opt),
      layout_(interaction_basis_layout(opt.K, ks_basis_id(opt))),
      onestep_(opt.K, opt.delta, opt.L, ks_symbol(opt.K, opt.L)),
      recon_(2 * opt.K),
      recon_lag1_(2 * opt.K),
      rstep_(opt.K) {}

std::unique_ptr<PredictorBasis> KsBasis::clone() const {
  return std::make_unique<KsBasis>(opt_);
}

void KsBasis::galerkin_onestep(std::span<const cplx> u,
                               std::span<cplx> out) const {
  std::copy(u.begin(), u.end(), out.begin());
  onestep_.step(out);
}

void KsBasis::eval(const ComplexSeries& hist, long t, int age,
                   std::span<cplx> out) const {
  const int K = opt_.K;
  const auto u = hist.row(t);
  quadratic_reconstruction(u, K, recon_, /*ks_prefactor=*/true, 0.0);
  const std::vector<cplx>* first = &recon_;
  if (opt_.lag_one_first_factor) {
    // Printed-equation variant: buffer factor taken one step before the
    // usage time t + age.
    const long t1 = std::clamp<long>(t + age - 1, 0, hist.n() - 1);
    quadratic_reconstruction(hist.row(t1), K, recon_lag1_, true, 0.0);
    first = &recon_lag1_;
  }
  galerkin_onestep(u, rstep_);
  for (int k = 0; k < K; ++k) {
    out[k] = u[k];
    out[K + k] = rstep_[k];
    for (int i = 0; i < K; ++i) {
      cplx v(0.0, 0.0);
      if (i <= k) {
        const cplx partner = recon_[K + i - k - 1];
        v = 2.0 * (*first)[K + i] *
            (opt_.conj_partner ? std::conj(partner) : partner);
      }
      out[2 * K + k * K + i] = v;
    }
  }
}

BurgersBasis::BurgersBasis(const BurgersBasisOptions& opt)
    : opt_(opt),
      layout_(interaction_basis_layout(opt.K, burgers_basis_id(opt))),
      onestep_(opt.K, opt.delta, 2.0 * std::numbers::pi,
               burgers_symbol(opt.K, opt.nu)),
      recon_(2 * opt.K),
      rstep_(opt.K) {}

std::unique_ptr<PredictorBasis> BurgersBasis::clone() const {
  return std::make_unique<BurgersBasis>(opt_);
}

std::vector<double> BurgersBasis::age_scale(int age) const {
  const int K = opt_.K;
  std::vector<double> s(layout_.n_columns, 1.0);
  const double c = opt_.nu * age * opt_.delta;
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < K; ++i) {
      const double kk = K + i + 1;
      s[2 * K + k * K + i] = std::exp(-c * kk * kk);
    }
  return s;
}

void BurgersBasis::galerkin_onestep(std::span<const cplx> u,
                                    std::span<cplx> out) const {
  std::copy(u.begin(), u.end(), out.begin());
  onestep_.step(out);
}

void BurgersBasis::eval(const ComplexSeries& hist, long t, int age,
                        std::span<cplx> out) const {
  const int K = opt_.K;
  const auto u = hist.row(t);
  quadratic_reconstruction(u, K, recon_, /*ks_prefactor=*/false,
                           opt_.nu * age * opt_.delta);
  galerkin_onestep(u, rstep_);
  for (int k = 0; k < K; ++k) {
    out[k] = u[k];
    out[K + k] = rstep_[k];
    for (int i = 0; i < K; ++i) {
      cplx v(0.0, 0.0);
      if (i <= k) {
        const cplx partner = recon_[K + i - k - 1];
        v = 2.0 * recon_[K + i] *
            (opt_.conj_partner ? std::conj(partner) : partner);
      }
      out[2 * K + k * K + i] = v;
    }
  }
}

}  // namespace wpmr
