#pragma once
// Projected Nelder-Mead for the low-dimensional outer problem over the
// stage parameters. Every trial point is projected into the feasible set
// before evaluation, so the objective is only ever queried at admissible
// coefficients.

#include <functional>
#include <span>
#include <vector>

namespace wpmr {

struct NelderMeadOptions {
  long max_evals = 2000;
  double tol_rel = 1e-8;    // relative spread of simplex values
  double init_step = 0.25;  // initial simplex edge
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  long n_evals = 0;
  bool converged = false;
  std::vector<double> best_trace;  // best-so-far value per evaluation
};

NelderMeadResult nelder_mead(
    const std::function<double(std::span<const double>)>& objective,
    const std::function<void(std::span<double>)>& project,
    std::span<const double> start, const NelderMeadOptions& opt);

}  // namespace wpmr
