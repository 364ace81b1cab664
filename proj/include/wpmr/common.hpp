#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpmr {

using cplx = std::complex<double>;

// Caller violated a documented precondition.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Trajectory or recursion left the finite range; carries the step index.
class blowup_error : public std::runtime_error {
 public:
  blowup_error(const std::string& what, long step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

// Uniformly sampled vector-valued complex time series, time-major storage.
struct ComplexSeries {
  std::vector<cplx> data;  // n * dim values
  int dim = 0;
  double dt = 1.0;
  std::string label;

  ComplexSeries() = default;
  ComplexSeries(long n, int d, double dt_ = 1.0, std::string label_ = {})
      : data(static_cast<size_t>(n) * d), dim(d), dt(dt_),
        label(std::move(label_)) {
    if (d < 1 || dt_ <= 0.0) throw usage_error("ComplexSeries: need d >= 1, dt > 0");
  }

  long n() const { return dim == 0 ? 0 : static_cast<long>(data.size()) / dim; }
  std::span<cplx> row(long t) {
    return {data.data() + static_cast<size_t>(t) * dim, static_cast<size_t>(dim)};
  }
  std::span<const cplx> row(long t) const {
    return {data.data() + static_cast<size_t>(t) * dim, static_cast<size_t>(dim)};
  }
  cplx& at(long t, int c) { return data[static_cast<size_t>(t) * dim + c]; }
  cplx at(long t, int c) const { return data[static_cast<size_t>(t) * dim + c]; }
};

inline const double* as_reals(const cplx* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* as_reals(cplx* p) { return reinterpret_cast<double*>(p); }

}  // namespace wpmr
