#pragma once
// Predictor bases Psi(.): the KS interaction basis and the Burgers basis
// with viscous memory weights, behind one interface. Columns are grouped as
//   [0, K)        state components (diagonal),
//   [K, 2K)       K-mode Galerkin one-step map output (diagonal),
//   [2K, 2K+K^2)  per output mode k, the K resolved/buffer interaction sums
//                 partitioned by the buffer-band magnitude K+i.

#include <memory>

#include "wpmr/models.hpp"
#include "wpmr/predictor_series.hpp"

namespace wpmr {

class PredictorBasis {
 public:
  virtual ~PredictorBasis() = default;
  virtual const PredictorLayout& layout() const = 0;
  // True when eval(t, age) = age_scale(age) .* eval(t, 0).
  virtual bool age_uniform() const { return true; }
  virtual std::vector<double> age_scale(int age) const;
  // Predictor frame for the state at time t, used at the given age (the
  // frame enters the recursion at step t + age). Instances carry scratch
  // buffers: not safe for concurrent eval; clone() per thread.
  virtual void eval(const ComplexSeries& hist, long t, int age,
                    std::span<cplx> out) const = 0;
  virtual std::unique_ptr<PredictorBasis> clone() const = 0;
};

// Evaluates the basis along a data series for ages 0..max_age.
PredictorSeries build_series(const PredictorBasis& basis,
                             const ComplexSeries& data, int max_age);

struct KsBasisOptions {
  int K = 5;
  double L = 2.0 * std::numbers::pi;
  double delta = 0.1;  // observation interval = reduced-model step
  bool conj_partner = true;        // conjugate the resolved factor
  bool lag_one_first_factor = false;  // printed-equation variant
};

class KsBasis : public PredictorBasis {
 public:
  explicit KsBasis(const KsBasisOptions& opt);
  const PredictorLayout& layout() const override { return layout_; }
  bool age_uniform() const override { return !opt_.lag_one_first_factor; }
  void eval(const ComplexSeries& hist, long t, int age,
            std::span<cplx> out) const override;
  std::unique_ptr<PredictorBasis> clone() const override;
  // One ETDRK4 step of the K-mode KS truncation over delta.
  void galerkin_onestep(std::span<const cplx> u, std::span<cplx> out) const;

 private:
  KsBasisOptions opt_;
  PredictorLayout layout_;
  mutable Etdrk4 onestep_;
  mutable std::vector<cplx> recon_, recon_lag1_, rstep_;
};

struct BurgersBasisOptions {
  int K = 9;
  double nu = 0.05;
  double delta = 0.01;
  bool conj_partner = false;
};

class BurgersBasis : public PredictorBasis {
 public:
  explicit BurgersBasis(const BurgersBasisOptions& opt);
  const PredictorLayout& layout() const override { return layout_; }
  std::vector<double> age_scale(int age) const override;
  void eval(const ComplexSeries& hist, long t, int age,
            std::span<cplx> out) const override;
  std::unique_ptr<PredictorBasis> clone() const override;
  void galerkin_onestep(std::span<const cplx> u, std::span<cplx> out) const;

 private:
  BurgersBasisOptions opt_;
  PredictorLayout layout_;
  mutable Etdrk4 onestep_;
  mutable std::vector<cplx> recon_, rstep_;
};

// Layout shared by both bases: m = 2K + K^2 with the column order above.
PredictorLayout interaction_basis_layout(int K, std::string basis_id);

// Buffer-band reconstruction used by both bases (positive indices only):
// recon[k-1] = u_k for k <= K; for K < k <= 2K the prefactor-weighted
// truncated quadratic sum_{l=k-K}^{K} u_l u_{k-l}.
void quadratic_reconstruction(std::span<const cplx> u, int K,
                              std::span<cplx> recon,
                              bool ks_prefactor, double nu_decay /* nu*age*delta */);

// Basis identifier strings (carry every layout-affecting parameter; the
// model loader refuses ids it cannot reproduce).
std::string ks_basis_id(const KsBasisOptions& opt);
std::string burgers_basis_id(const BurgersBasisOptions& opt);

}  // namespace wpmr
