#pragma once
// Model orders, the quadratic-factor parameterization of A(z), and the
// stability-triangle geometry behind the decaying-memory constraint.

#include <optional>
#include <utility>

#include "wpmr/common.hpp"

namespace wpmr {

struct ModelOrders {
  int p = 0;  // memory order, deg A(z)
  int r = 0;  // predictor lag order, deg B(z)

  ModelOrders() = default;
  ModelOrders(int p_, int r_) : p(p_), r(r_) {
    if (p < 0 || r < 0 || p < r)
      throw usage_error("ModelOrders: need 0 <= r <= p");
  }
  int stage_pairs() const { return p / 2; }
  bool has_linear_stage() const { return p % 2 != 0; }
};

// True iff both roots of z^2 + alpha z + beta lie strictly inside the unit
// disc with the given margin: beta <= 1 - margin and beta >= |alpha| - 1 +
// margin. The feasible set is the triangle with vertices (+-2, 1), (0, -1).
bool triangle_contains(double alpha, double beta, double margin);

// Closest point of the margin-shrunk triangle (Euclidean projection).
std::pair<double, double> project_to_triangle(double alpha, double beta,
                                              double margin);

// Quadratic-factor form of a real monic A(z): one (alpha_i, beta_i) per
// second-order stage plus an optional first-order stage for odd degree.
struct CascadeCoefficients {
  std::vector<std::pair<double, double>> pairs;
  std::optional<double> linear_alpha;
  double margin = 1e-6;

  // Validates triangle membership of every stage (|alpha0| < 1 - margin for
  // the linear stage).
  static CascadeCoefficients checked(
      std::vector<std::pair<double, double>> pairs,
      std::optional<double> linear_alpha, double margin = 1e-6);
  // No validation; for reporting unstable fits. Query is_stable().
  static CascadeCoefficients unchecked(
      std::vector<std::pair<double, double>> pairs,
      std::optional<double> linear_alpha, double margin = 1e-6);

  bool is_stable() const;
  int degree() const {
    return 2 * static_cast<int>(pairs.size()) + (linear_alpha ? 1 : 0);
  }
  int stage_count() const {
    return static_cast<int>(pairs.size()) + (linear_alpha ? 1 : 0);
  }
  // 2 history slots per quadratic stage, 1 for the linear stage (= p).
  int ic_slots() const { return degree(); }
};

// Exogenous moving-average forcing weights c_0..c_q (shared-forcing runs):
// c[j] acts diagonally on the first `dim` state components.
struct ForcingWeights {
  int q = 0;
  int dim = 0;                // number of forced components
  std::vector<cplx> c;        // (q+1) * dim, lag-major
  std::span<const cplx> lag(int j) const {
    return {c.data() + static_cast<size_t>(j) * dim, static_cast<size_t>(dim)};
  }
};

// A fitted reduced model: x_{n+1} = y_n + xi_{n+1} with y the cascade-form
// filter B(z)/A(z) applied to the predictor stream.
struct CascadeModel {
  ModelOrders orders;
  CascadeCoefficients cascade;
  std::vector<std::vector<cplx>> weights;  // (r+1) vectors of length m
  std::string basis_id;
  int state_dim = 0;
  int predictor_dim = 0;
  std::optional<ForcingWeights> forcing;
  // Fitted internal initial values (slot-major, slots x d), present when the
  // fit estimated homogeneous ICs; replay requires them.
  std::optional<std::vector<cplx>> fitted_ics;

  void validate() const {
    if (weights.size() != static_cast<size_t>(orders.r) + 1)
      throw usage_error("CascadeModel: |weights| != r+1");
    for (const auto& w : weights)
      if (w.size() != static_cast<size_t>(predictor_dim))
        throw usage_error("CascadeModel: weight length != m");
    if (cascade.degree() != orders.p)
      throw usage_error("CascadeModel: cascade degree != p");
  }
};

// Spectral factor f(theta_j) of a stationary Gaussian noise model on an
// equispaced angle grid; f f^* reconstructs S_xi_xi.
struct NoiseModel {
  int dim = 0;
  long grid = 0;              // M grid points theta_j = 2 pi j / M
  std::vector<cplx> factors;  // grid * dim * dim, row-major per angle
  bool real_output = false;

  std::span<const cplx> factor(long j) const {
    const size_t dd = static_cast<size_t>(dim) * dim;
    return {factors.data() + j * dd, dd};
  }
};

// Monic-polynomial coefficients of A(z) = prod(z^2 + alpha_i z + beta_i)
// * (z + alpha0 when present), constant term first: {a_0, ..., a_{p-1}}.
std::vector<double> expand_cascade(const CascadeCoefficients& c);

// Roots of the monic polynomial z^p + a_{p-1} z^{p-1} + ... + a_0 given the
// constant-first coefficient list (companion-matrix eigenvalues).
std::vector<cplx> polynomial_roots(std::span<const double> constant_first);

// True iff every root lies strictly inside the unit circle.
bool roots_inside_unit_disc(std::span<const double> constant_first);

// Pairs the roots of a real monic polynomial into quadratic factors (plus a
// linear factor for odd degree). Complex roots are conjugate-paired; real
// roots are paired greedily. Does not enforce stability; check is_stable().
CascadeCoefficients pair_roots_to_cascade(std::span<const double> constant_first,
                                          double margin = 1e-6);

}  // namespace wpmr
