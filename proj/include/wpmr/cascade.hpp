#pragma once
// Second-order cascade engine: the running form of 1/A(z). Stage order is
// [first-order stage when p is odd] followed by the quadratic stages; the
// stage-1 input is supplied by the caller and the last stage emits y_n.

#include "wpmr/core.hpp"
#include "wpmr/kernels.hpp"
#include "wpmr/predictor_series.hpp"

namespace wpmr {

// IC slot order (p slots total): slot 0 = linear-stage z^{n-1} when p is
// odd; then per quadratic stage i the pair (z_i^{n-1}, z_i^{n-2}).
class CascadeEngine {
 public:
  CascadeEngine(const CascadeCoefficients& coeffs, int lanes);

  int lanes() const { return lanes_; }
  int slots() const { return coeffs_.ic_slots(); }
  const CascadeCoefficients& coeffs() const { return coeffs_; }

  void reset();
  // state is slot-major: slots() frames of lanes() complex values.
  void load_state(std::span<const cplx> state);
  void save_state(std::span<cplx> state) const;

  // frame holds the stage-1 input on entry and y_n on exit.
  void step(std::span<cplx> frame);
  // In-place over n time-major frames.
  void run(cplx* frames, long n);

 private:
  CascadeCoefficients coeffs_;
  int lanes_;
  std::vector<kernels::BiquadStage> stages_;
  double lin_alpha_ = 0.0;
  bool has_lin_ = false;
  std::vector<double> hist1_;
  std::vector<double> hist_;
};

// Back-solves the per-stage initial values from the first p+1 observations
// (y_j = x_{j+1}); returns slots() x d values in engine slot order. Zero
// data yields the zero state.
std::vector<cplx> init_from_history(const CascadeCoefficients& coeffs,
                                    const ComplexSeries& x_data, int dim);

// Output sequences of unit initial perturbations per IC slot with zero
// input: result[slot][t], t = 0..horizon-1. Real-valued since the stage
// coefficients are real.
std::vector<std::vector<double>> zero_input_basis(
    const CascadeCoefficients& coeffs, long horizon);

// Runs the cascade with the psi frames themselves as stage-1 input (zero
// initial state, identity weight): Y_n in the same frame layout.
std::vector<cplx> matrix_cascade(const CascadeCoefficients& coeffs,
                                 std::span<const cplx> frames, long n,
                                 int width);

// Multistep form x_{n+p+1} + a_{p-1} x_{n+p} + ... + a_0 x_{n+1} =
// sum_j Psi_{n+j} b_j + bar_xi. Exogenous psi; out-of-range psi frames are
// treated as zero so homogeneous initial data reproduce the cascade run
// exactly. `init` holds x_0..x_{p-1}; `bar_noise` (nullable) supplies the
// bar-xi sequence aligned with the output index.
ComplexSeries multistep_run(const ModelOrders& orders,
                            std::span<const double> a,
                            const std::vector<std::vector<cplx>>& b,
                            const PredictorSeries& psi,
                            std::span<const cplx> init, long n_steps,
                            const ComplexSeries* bar_noise,
                            double blowup_norm = 1e12);

}  // namespace wpmr
