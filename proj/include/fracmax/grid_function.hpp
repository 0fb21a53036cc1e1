#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracmax/geometry.hpp"

namespace fracmax {

/// Real values on the cells of a GridDomain.  Storage covers the whole
/// window; entries off G are held at zero.
class GridFunction {
 public:
  explicit GridFunction(DomainPtr domain)
      : domain_(std::move(domain)), values_(domain_->cell_count(), 0.0) {}

  /// Values per window cell.  Entries on exterior cells are discarded.
  GridFunction(DomainPtr domain, std::vector<double> values)
      : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_->cell_count())
      throw std::invalid_argument("function size does not match the domain window");
    for (CellIndex c = 0; c < values_.size(); ++c) {
      if (!domain_->interior(c)) values_[c] = 0.0;
      else if (!std::isfinite(values_[c])) throw std::invalid_argument("function values must be finite");
    }
  }

  const GridDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  std::span<const double> values() const { return values_; }
  double operator[](CellIndex c) const { return values_[c]; }

  void set(CellIndex c, double v) {
    if (!domain_->interior(c)) throw std::domain_error("cannot set a value outside the domain");
    values_[c] = v;
  }

 private:
  DomainPtr domain_;
  std::vector<double> values_;
};

inline GridFunction scaled(const GridFunction& f, double c) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x *= c;
  return GridFunction(f.domain_ptr(), std::move(v));
}

inline GridFunction sum(const GridFunction& f, const GridFunction& g) {
  if (&f.domain() != &g.domain()) throw std::invalid_argument("functions live on different domains");
  std::vector<double> v(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += g[i];
  return GridFunction(f.domain_ptr(), std::move(v));
}

/// Characteristic function of the interior cells.
inline GridFunction indicator_of_domain(const DomainPtr& d) {
  GridFunction f(d);
  for (CellIndex c : d->interior_cells()) f.set(c, 1.0);
  return f;
}

}  // namespace fracmax
