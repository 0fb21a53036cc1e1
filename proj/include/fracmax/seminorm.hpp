#pragma once

#include <cstddef>
#include <vector>

#include "fracmax/grid_function.hpp"
#include "fracmax/pair_field.hpp"
#include "fracmax/params.hpp"

namespace fracmax {

/// |m|^(-sigma) for every lattice offset m that fits in the window, m != 0.
class OffsetKernel {
 public:
  OffsetKernel(const GridDomain& g, double sigma);
  double operator()(Coord a, Coord b) const {
    return table_[std::size_t(b[0] - a[0] + shift_) + std::size_t(b[1] - a[1] + row_shift_) * span_];
  }

 private:
  int shift_;
  int row_shift_;
  std::size_t span_;
  std::vector<double> table_;
};

/// sum over interior x != y of h^(2n) |f(x)-f(y)|^p / |x-y|^(n+sp).
/// The diagonal cell pairs are excluded.
double seminorm_power(const GridFunction& f, const FracParams& params);
/// seminorm_power(f)^(1/p)
double fractional_seminorm(const GridFunction& f, const FracParams& params);

/// S(f)(x,y) = |f(x)-f(y)| / |x-y|^(n/p+s) on interior pairs, zero elsewhere
/// and on the diagonal.
PairField pair_transform(const GridFunction& f, const FracParams& params,
                         EvalMode mode = EvalMode::Stored);

/// (sum over window pairs of h^(2n) |F|^p)^(1/p)
double lp_norm_pair(const PairField& field, double p);
double lp_norm_pair_power(const PairField& field, double p);

/// sum over interior x of h^n |f(x)|^p dist(x, boundary)^(-sp)
double hardy_lhs(const GridFunction& f, const FracParams& params);

/// |M_G f| / |f| in the fractional seminorm (0 when both vanish).
double maximal_boundedness_ratio(const GridFunction& f, const FracParams& params);

/// Right-hand side of the pointwise domination,
///   R(x,y) = sum_{i,j,k,l in {0,1}} M_ij(M_kl F)(x,y) + M_ij(M_kl F)(y,x),
/// for a symmetric non-negative F.  Uses M_ij(F^T) = (M_ji F)^T and
/// M_00 = |.| so that only seven maximal sweeps are needed.
PairField domination_rhs(const PairField& sf, RadiusSet radii);
/// The same sum evaluated term by term (16 compositions, for checking).
PairField domination_rhs_direct(const PairField& sf, RadiusSet radii);

struct DominationReport {
  double max_ratio = 0.0;
  CellIndex arg_x = 0;
  CellIndex arg_y = 0;
  bool finite = true;
  std::size_t pairs = 0;
  /// Pairs with R < 2 S(f); the identity terms make this zero.
  std::size_t identity_violations = 0;
  double bucket_width = 0.05;
  /// histogram[k] counts ratios in [k w, (k+1) w).
  std::vector<std::size_t> histogram;
};

/// Compares L = S(M_G f) with R built from S(f) at every interior pair x != y.
DominationReport domination_check(const GridFunction& f, const FracParams& params,
                                  RadiusSet radii = RadiusSet::All, double bucket_width = 0.05);

}  // namespace fracmax
