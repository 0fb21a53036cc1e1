#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fracmax/geometry.hpp"

namespace fracmax {

/// A function on pairs of window cells, i.e. on the discretised R^n x R^n
/// restricted to the window.  Values outside the window are zero.
///
/// Stored fields hold cell_count()^2 doubles (row a, column b).  Streaming
/// fields evaluate a callback on demand and are read-only.
class PairField {
 public:
  using Evaluator = std::function<double(CellIndex, CellIndex)>;

  explicit PairField(DomainPtr domain);
  static PairField streaming(DomainPtr domain, Evaluator eval);

  const GridDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  std::size_t side() const { return domain_->cell_count(); }
  bool is_stored() const { return !eval_; }

  double operator()(CellIndex a, CellIndex b) const {
    return eval_ ? eval_(a, b) : values_[a * side() + b];
  }
  /// Stored fields only.
  double& at(CellIndex a, CellIndex b) { return values_[a * side() + b]; }
  std::span<double> data() { return values_; }
  std::span<const double> data() const { return values_; }

  /// Stored copy (evaluates every pair of a streaming field).
  PairField materialized() const;
  PairField transposed() const;

 private:
  PairField(DomainPtr domain, int /*no storage*/);

  DomainPtr domain_;
  std::vector<double> values_;
  Evaluator eval_;
};

/// Radii used by the directional maximal operators, in cells.
///   All:    every integer radius 0..R_max.
///   Dyadic: 0, 1, 2, 4, ..., R_max.
enum class RadiusSet { All, Dyadic };
enum class EvalMode { Stored, Streaming };

/// Smallest integer radius whose ball around any window cell covers the window.
int window_radius(const GridDomain& g);
std::vector<int> radius_ladder(int max_radius, RadiusSet set);

/// M_ij(F)(x,y) = max over radii r of the average of |F(x + i z, y + j z)|
/// over the discrete ball |z| <= r, with F extended by zero outside the
/// window.  (0,0) returns |F|.
PairField directional_maximal(const PairField& f, int i, int j, RadiusSet radii = RadiusSet::All,
                              EvalMode mode = EvalMode::Stored);
/// Direct evaluation of M_ij(F) at one pair (enumerates the z-balls).
double directional_maximal_at(const PairField& f, int i, int j, CellIndex a, CellIndex b,
                              RadiusSet radii = RadiusSet::All);

}  // namespace fracmax
