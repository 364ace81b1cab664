#include "wpmr/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wpmr/common.hpp"

namespace wpmr {

NelderMeadResult nelder_mead(
    const std::function<double(std::span<const double>)>& objective,
    const std::function<void(std::span<double>)>& project,
    std::span<const double> start, const NelderMeadOptions& opt) {
  const int dim = static_cast<int>(start.size());
  if (dim < 1) throw usage_error("nelder_mead: empty parameter vector");
  if (opt.max_evals < 1) throw usage_error("nelder_mead: max_evals >= 1");

  NelderMeadResult res;
  res.x.assign(start.begin(), start.end());
  res.value = std::numeric_limits<double>::infinity();

  auto eval = [&](std::vector<double>& x) {
    project(x);
    const double v = objective(x);
    ++res.n_evals;
    if (v < res.value) {
      res.value = v;
      res.x = x;
    }
    res.best_trace.push_back(res.value);
    return v;
  };

  // Simplex: start plus one offset vertex per coordinate.
  std::vector<std::vector<double>> xs(dim + 1, res.x);
  std::vector<double> fs(dim + 1);
  fs[0] = eval(xs[0]);
  for (int i = 0; i < dim; ++i) {
    xs[i + 1][i] += opt.init_step;
    fs[i + 1] = eval(xs[i + 1]);
    if (res.n_evals >= opt.max_evals) return res;
  }

  std::vector<int> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  while (res.n_evals < opt.max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = order[0], worst = order[dim],
              second = order[dim - 1];
    const double spread =
        std::abs(fs[worst] - fs[best]) /
        std::max(1e-300, std::abs(fs[best]) + std::abs(fs[worst]));
    double size = 0.0;
    for (int i = 0; i <= dim; ++i)
      for (int c = 0; c < dim; ++c)
        size = std::max(size, std::abs(xs[i][c] - xs[best][c]));
    if (spread < opt.tol_rel && size < std::sqrt(opt.tol_rel)) {
      res.converged = true;
      return res;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (int i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (int c = 0; c < dim; ++c) centroid[c] += xs[i][c];
    }
    for (double& c : centroid) c /= dim;

    auto blend = [&](std::vector<double>& out, double coef) {
      for (int c = 0; c < dim; ++c)
        out[c] = centroid[c] + coef * (xs[worst][c] - centroid[c]);
    };

    blend(trial, -1.0);  // reflection
    const double fr = eval(trial);
    if (fr < fs[best]) {
      blend(trial2, -2.0);  // expansion
      const double fe = eval(trial2);
      if (fe < fr) {
        xs[worst] = trial2;
        fs[worst] = fe;
      } else {
        xs[worst] = trial;
        fs[worst] = fr;
      }
    } else if (fr < fs[second]) {
      xs[worst] = trial;
      fs[worst] = fr;
    } else {
      const bool outside = fr < fs[worst];
      blend(trial2, outside ? -0.5 : 0.5);  // contraction
      const double fc = eval(trial2);
      if (fc < std::min(fr, fs[worst])) {
        xs[worst] = trial2;
        fs[worst] = fc;
      } else {
        // Shrink toward the best vertex.
        for (int i = 0; i <= dim; ++i) {
          if (i == best) continue;
          for (int c = 0; c < dim; ++c)
            xs[i][c] = xs[best][c] + 0.5 * (xs[i][c] - xs[best][c]);
          fs[i] = eval(xs[i]);
          if (res.n_evals >= opt.max_evals) return res;
        }
      }
    }
  }
  return res;
}

}  // namespace wpmr
