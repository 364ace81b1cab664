#include "wpmr/core.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace wpmr {

bool triangle_contains(double alpha, double beta, double margin) {
  if (margin < 0.0) throw usage_error("triangle_contains: margin >= 0");
  return beta <= 1.0 - margin && beta >= alpha - 1.0 + margin &&
         beta >= -alpha - 1.0 + margin;
}

namespace {

// Projection of q onto segment [a, b].
std::pair<double, double> project_segment(double qx, double qy, double ax,
                                          double ay, double bx, double by) {
  const double vx = bx - ax, vy = by - ay;
  double t = ((qx - ax) * vx + (qy - ay) * vy) / (vx * vx + vy * vy);
  t = std::clamp(t, 0.0, 1.0);
  return {ax + t * vx, ay + t * vy};
}

}  // namespace

std::pair<double, double> project_to_triangle(double alpha, double beta,
                                              double margin) {
  if (triangle_contains(alpha, beta, margin)) return {alpha, beta};
  // Vertices of the shrunk triangle: intersect the offset edges
  //   beta = 1 - m, beta = alpha - 1 + m, beta = -alpha - 1 + m.
  const double m = margin;
  const double top = 1.0 - m;
  const double vx1 = 2.0 - 2.0 * m;           // right vertex (vx1, top)
  const double vy0 = -1.0 + m;                // bottom vertex (0, vy0)
  const std::pair<double, double> v[3] = {{-vx1, top}, {vx1, top}, {0.0, vy0}};
  double best_d = std::numeric_limits<double>::infinity();
  std::pair<double, double> best = v[0];
  for (int e = 0; e < 3; ++e) {
    const auto& a = v[e];
    const auto& b = v[(e + 1) % 3];
    const auto q = project_segment(alpha, beta, a.first, a.second, b.first,
                                   b.second);
    const double d = std::hypot(q.first - alpha, q.second - beta);
    if (d < best_d) {
      best_d = d;
      best = q;
    }
  }
  return best;
}

CascadeCoefficients CascadeCoefficients::checked(
    std::vector<std::pair<double, double>> pairs,
    std::optional<double> linear_alpha, double margin) {
  CascadeCoefficients c = unchecked(std::move(pairs), linear_alpha, margin);
  for (const auto& [a, b] : c.pairs)
    if (!triangle_contains(a, b, margin))
      throw usage_error("CascadeCoefficients: stage outside stability triangle");
  if (c.linear_alpha && std::abs(*c.linear_alpha) >= 1.0 - margin)
    throw usage_error("CascadeCoefficients: |alpha0| >= 1 - margin");
  return c;
}

CascadeCoefficients CascadeCoefficients::unchecked(
    std::vector<std::pair<double, double>> pairs,
    std::optional<double> linear_alpha, double margin) {
  CascadeCoefficients c;
  c.pairs = std::move(pairs);
  c.linear_alpha = linear_alpha;
  c.margin = margin;
  return c;
}

bool CascadeCoefficients::is_stable() const {
  for (const auto& [a, b] : pairs)
    if (!triangle_contains(a, b, 0.0) || b == 1.0 || b == std::abs(a) - 1.0)
      return false;
  if (linear_alpha && std::abs(*linear_alpha) >= 1.0) return false;
  return true;
}

std::vector<double> expand_cascade(const CascadeCoefficients& c) {
  // Convolve factor coefficient lists, constant term first.
  std::vector<double> a = {1.0};
  auto mul = [&a](std::span<const double> f) {
    std::vector<double> out(a.size() + f.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < f.size(); ++j) out[i + j] += a[i] * f[j];
    a = std::move(out);
  };
  if (c.linear_alpha) {
    const double f[2] = {*c.linear_alpha, 1.0};
    mul(f);
  }
  for (const auto& [alpha, beta] : c.pairs) {
    const double f[3] = {beta, alpha, 1.0};
    mul(f);
  }
  a.pop_back();  // drop the leading monic 1
  return a;
}

std::vector<cplx> polynomial_roots(std::span<const double> constant_first) {
  const int p = static_cast<int>(constant_first.size());
  if (p < 1) throw usage_error("polynomial_roots: degree >= 1 required");
  if (p == 1) return {cplx(-constant_first[0], 0.0)};
  if (p == 2) {
    const double a1 = constant_first[1], a0 = constant_first[0];
    const cplx disc = std::sqrt(cplx(a1 * a1 - 4.0 * a0, 0.0));
    return {(-a1 + disc) / 2.0, (-a1 - disc) / 2.0};
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(p, p);
  for (int i = 1; i < p; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < p; ++i) comp(i, p - 1) = -constant_first[i];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
  std::vector<cplx> roots(p);
  for (int i = 0; i < p; ++i) roots[i] = es.eigenvalues()[i];
  return roots;
}

bool roots_inside_unit_disc(std::span<const double> constant_first) {
  for (const cplx& z : polynomial_roots(constant_first))
    if (std::abs(z) >= 1.0) return false;
  return true;
}

CascadeCoefficients pair_roots_to_cascade(std::span<const double> constant_first,
                                          double margin) {
  auto roots = polynomial_roots(constant_first);
  // Numerical asymmetry can leave near-conjugate partners; symmetrize by
  // sorting into conjugate pairs by real part, then matching +imag to -imag.
  std::vector<cplx> complex_roots;
  std::vector<double> real_roots;
  for (const cplx& z : roots) {
    if (std::abs(z.imag()) < 1e-12 * std::max(1.0, std::abs(z.real())))
      real_roots.push_back(z.real());
    else
      complex_roots.push_back(z);
  }
  std::sort(complex_roots.begin(), complex_roots.end(),
            [](const cplx& a, const cplx& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });
  std::vector<std::pair<double, double>> pairs;
  for (size_t i = 0; i + 1 < complex_roots.size(); i += 2) {
    // Partner the two; symmetrized as z, conj(z) with averaged parts.
    const double re = 0.5 * (complex_roots[i].real() + complex_roots[i + 1].real());
    const double im =
        0.5 * (std::abs(complex_roots[i].imag()) + std::abs(complex_roots[i + 1].imag()));
    pairs.emplace_back(-2.0 * re, re * re + im * im);
  }
  if (complex_roots.size() % 2 != 0) {
    // Stranded complex root (should not happen for real input); fold its
    // modulus into a real root.
    real_roots.push_back(std::abs(complex_roots.back()) *
                         (complex_roots.back().real() < 0 ? -1.0 : 1.0));
  }
  std::sort(real_roots.begin(), real_roots.end());
  std::optional<double> lin;
  if (real_roots.size() % 2 != 0) {
    lin = -real_roots.back();
    real_roots.pop_back();
  }
  for (size_t i = 0; i + 1 < real_roots.size(); i += 2)
    pairs.emplace_back(-(real_roots[i] + real_roots[i + 1]),
                       real_roots[i] * real_roots[i + 1]);
  return CascadeCoefficients::unchecked(std::move(pairs), lin, margin);
}

}  // namespace wpmr
