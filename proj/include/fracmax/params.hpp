#pragma once

#include <cmath>
#include <stdexcept>

namespace fracmax {

/// Smoothness s in (0,1) and integrability p in (1,inf).
class FracParams {
 public:
  FracParams(double s, double p) : s_(s), p_(p) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0,1)");
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must lie in (1,inf)");
  }

  double s() const { return s_; }
  double p() const { return p_; }
  double sp() const { return s_ * p_; }
  /// n + s p
  double kernel_exponent(int dim) const { return dim + s_ * p_; }
  /// n/p + s, the exponent of the pair transform.
  double pair_exponent(int dim) const { return dim / p_ + s_; }
  void require_subcritical(int dim) const {
    if (!(s_ * p_ < dim)) throw std::invalid_argument("s*p must be smaller than the dimension");
  }

 private:
  double s_;
  double p_;
};

}  // namespace fracmax
