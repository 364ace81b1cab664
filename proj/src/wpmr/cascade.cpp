#include "wpmr/cascade.hpp"

#include <cmath>
#include <cstring>

namespace wpmr {

void apply_weights(const PredictorLayout& layout, std::span<const cplx> frame,
                   std::span<const double> scale_or_empty,
                   std::span<const cplx> weights, std::span<cplx> out) {
  const int m = layout.n_columns;
  if (scale_or_empty.empty()) {
    for (int c = 0; c < m; ++c)
      out[layout.column_row[c]] += frame[c] * weights[c];
  } else {
    for (int c = 0; c < m; ++c)
      out[layout.column_row[c]] += scale_or_empty[c] * frame[c] * weights[c];
  }
}

CascadeEngine::CascadeEngine(const CascadeCoefficients& coeffs, int lanes)
    : coeffs_(coeffs), lanes_(lanes) {
  if (lanes < 1) throw usage_error("CascadeEngine: lanes >= 1");
  for (const auto& [a, b] : coeffs.pairs) stages_.push_back({a, b});
  if (coeffs.linear_alpha) {
    has_lin_ = true;
    lin_alpha_ = *coeffs.linear_alpha;
  }
  hist1_.assign(2 * static_cast<size_t>(lanes_), 0.0);
  hist_.assign(stages_.size() * 2 * 2 * static_cast<size_t>(lanes_), 0.0);
}

void CascadeEngine::reset() {
  std::fill(hist1_.begin(), hist1_.end(), 0.0);
  std::fill(hist_.begin(), hist_.end(), 0.0);
}

void CascadeEngine::load_state(std::span<const cplx> state) {
  if (state.size() != static_cast<size_t>(slots()) * lanes_)
    throw usage_error("CascadeEngine: bad state size");
  size_t s = 0;
  const size_t w = 2 * static_cast<size_t>(lanes_);
  if (has_lin_) {
    std::copy_n(as_reals(state.data()), w, hist1_.data());
    ++s;
  }
  for (size_t i = 0; i < stages_.size(); ++i) {
    std::copy_n(as_reals(state.data() + (s + 0) * lanes_), w,
                hist_.data() + (2 * i + 0) * w);
    std::copy_n(as_reals(state.data() + (s + 1) * lanes_), w,
                hist_.data() + (2 * i + 1) * w);
    s += 2;
  }
}

void CascadeEngine::save_state(std::span<cplx> state) const {
  const size_t w = 2 * static_cast<size_t>(lanes_);
  size_t s = 0;
  if (has_lin_) {
    std::copy_n(hist1_.data(), w, as_reals(state.data()));
    ++s;
  }
  for (size_t i = 0; i < stages_.size(); ++i) {
    std::copy_n(hist_.data() + (2 * i + 0) * w, w,
                as_reals(state.data() + (s + 0) * lanes_));
    std::copy_n(hist_.data() + (2 * i + 1) * w, w,
                as_reals(state.data() + (s + 1) * lanes_));
    s += 2;
  }
}

void CascadeEngine::step(std::span<cplx> frame) {
  kernels::cascade_chain(as_reals(frame.data()), 1, 2 * lanes_,
                         stages_.data(), static_cast<int>(stages_.size()),
                         has_lin_ ? &lin_alpha_ : nullptr, hist1_.data(),
                         hist_.data());
}

void CascadeEngine::run(cplx* frames, long n) {
  kernels::cascade_chain(as_reals(frames), n, 2 * lanes_, stages_.data(),
                         static_cast<int>(stages_.size()),
                         has_lin_ ? &lin_alpha_ : nullptr, hist1_.data(),
                         hist_.data());
}

std::vector<cplx> init_from_history(const CascadeCoefficients& coeffs,
                                    const ComplexSeries& x_data, int dim) {
  const int p = coeffs.degree();
  if (p == 0) return {};
  if (x_data.dim != dim) throw usage_error("init_from_history: dim mismatch");
  if (x_data.n() < p + 1)
    throw usage_error("init_from_history: need at least p+1 observations");
  const int n_quads = static_cast<int>(coeffs.pairs.size());
  if (p < 2 && n_quads > 0)
    throw usage_error("init_from_history: p < 2 with quadratic stages");

  // y_j = x_{j+1}, j = 0..p-1, are the outputs of the last stage.
  std::vector<cplx> work(static_cast<size_t>(p) * dim);
  for (int j = 0; j < p; ++j)
    std::copy_n(x_data.row(j + 1).data(), dim, work.data() + j * dim);

  std::vector<cplx> state(static_cast<size_t>(p) * dim, cplx(0.0, 0.0));
  const int lin_off = coeffs.linear_alpha ? 1 : 0;
  auto slot = [&](int s) { return state.data() + static_cast<size_t>(s) * dim; };
  auto val = [&](int n) { return work.data() + static_cast<size_t>(n) * dim; };

  int valid_lo = 0;
  // Quadratic stages, back from the output stage.
  for (int i = n_quads - 1; i >= 0; --i) {
    std::copy_n(val(p - 1), dim, slot(lin_off + 2 * i + 0));  // z_i^{p-1}
    std::copy_n(val(p - 2), dim, slot(lin_off + 2 * i + 1));  // z_i^{p-2}
    const bool more = i > 0 || coeffs.linear_alpha.has_value();
    if (!more) break;
    const double a = coeffs.pairs[i].first, b = coeffs.pairs[i].second;
    // Predecessor values: input_i[n] = z_i[n] + a z_i[n-1] + b z_i[n-2].
    for (int n = p - 1; n >= valid_lo + 2; --n)
      for (int c = 0; c < dim; ++c)
        val(n)[c] = val(n)[c] + a * val(n - 1)[c] + b * val(n - 2)[c];
    valid_lo += 2;
  }
  if (coeffs.linear_alpha) {
    // The linear stage needs only z^{p-1}; for p odd the back-solve leaves
    // exactly that index valid, for p = 1 it is y_0 itself.
    std::copy_n(val(p - 1), dim, slot(0));
  }
  return state;
}

std::vector<std::vector<double>> zero_input_basis(
    const CascadeCoefficients& coeffs, long horizon) {
  const int slots = coeffs.ic_slots();
  std::vector<std::vector<double>> out(slots);
  for (int s = 0; s < slots; ++s) {
    CascadeEngine engine(coeffs, 1);
    std::vector<cplx> state(slots, cplx(0.0, 0.0));
    state[s] = cplx(1.0, 0.0);
    engine.load_state(state);
    out[s].resize(horizon);
    cplx frame;
    for (long t = 0; t < horizon; ++t) {
      frame = cplx(0.0, 0.0);
      engine.step({&frame, 1});
      out[s][t] = frame.real();
    }
  }
  return out;
}

std::vector<cplx> matrix_cascade(const CascadeCoefficients& coeffs,
                                 std::span<const cplx> frames, long n,
                                 int width) {
  std::vector<cplx> out(frames.begin(), frames.end());
  CascadeEngine engine(coeffs, width);
  engine.run(out.data(), n);
  return out;
}

ComplexSeries multistep_run(const ModelOrders& orders,
                            std::span<const double> a,
                            const std::vector<std::vector<cplx>>& b,
                            const PredictorSeries& psi,
                            std::span<const cplx> init, long n_steps,
                            const ComplexSeries* bar_noise,
                            double blowup_norm) {
  const int p = orders.p, r = orders.r;
  const int d = psi.layout.state_dim;
  if (a.size() != static_cast<size_t>(p) ||
      b.size() != static_cast<size_t>(r) + 1)
    throw usage_error("multistep_run: |a| = p, |b| = r+1 required");
  if (init.size() != static_cast<size_t>(p) * d)
    throw usage_error("multistep_run: init must hold p state vectors");

  ComplexSeries x(std::max<long>(n_steps, p), d);
  std::copy_n(init.data(), init.size(), x.data.data());
  std::vector<cplx> acc(d);
  for (long t = p; t < n_steps; ++t) {
    std::fill(acc.begin(), acc.end(), cplx(0.0, 0.0));
    if (bar_noise && t < bar_noise->n())
      std::copy_n(bar_noise->row(t).data(), d, acc.data());
    for (int j = 0; j < p; ++j) {
      const auto xr = x.row(t - p + j);
      for (int c = 0; c < d; ++c) acc[c] -= a[j] * xr[c];
    }
    for (int j = 0; j <= r; ++j) {
      const long tp = t - p - 1 + j;
      if (tp < 0 || tp >= psi.n) continue;  // homogeneous zero padding
      const int age = p - j;
      apply_weights(psi.layout, psi.frame(tp, age), psi.scale_span(age), b[j],
                    acc);
    }
    double norm2 = 0.0;
    for (int c = 0; c < d; ++c) {
      x.at(t, c) = acc[c];
      norm2 += std::norm(acc[c]);
    }
    if (!(norm2 <= blowup_norm * blowup_norm))
      throw blowup_error("multistep_run: instability", t);
  }
  return x;
}

}  // namespace wpmr
