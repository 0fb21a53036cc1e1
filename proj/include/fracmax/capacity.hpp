#pragma once

#include <cstddef>
#include <vector>

#include "fracmax/grid_function.hpp"
#include "fracmax/params.hpp"

namespace fracmax {

/// A compact set K: a (possibly empty) set of interior cells.
struct CompactSet {
  CompactSet(DomainPtr domain, std::vector<CellIndex> cells);

  DomainPtr domain;
  std::vector<CellIndex> cells;  // sorted, unique
};

/// sum over m in Z^n \ {0} of |m|^(-sigma), sigma > n.
/// 1D: 2 zeta(sigma).  2D: 4 zeta(t) beta(t) with t = sigma/2.
double lattice_zeta(int dim, double sigma);

/// Interaction of each interior cell with the exterior lattice cells,
///   kappa(x) = h^n sum over lattice y outside G of |x-y|^-(n+sp),
/// per window cell (zero off G).
std::vector<double> exterior_kernel(const GridDomain& g, const FracParams& params);

/// Gagliardo energy of u extended by zero to the whole lattice:
///   seminorm_power(u) + 2 sum over x in G of h^n |u(x)|^p kappa(x).
/// This is the quantity minimised by capacity().
double capacity_energy(const GridFunction& u, const FracParams& params);

struct SolverOptions {
  std::size_t max_iterations = 100000;
  /// Stop when the energy dropped by at most tolerance * energy over `window` iterations.
  double tolerance = 1e-8;
  std::size_t window = 50;
};

struct CapacityResult {
  explicit CapacityResult(DomainPtr domain) : minimizer(std::move(domain)) {}

  double value = 0.0;
  GridFunction minimizer;
  std::size_t iterations = 0;
  /// sup-norm of the projected gradient step at the returned iterate.
  double residual = 0.0;
  bool converged = false;
  /// False when s p >= n.
  bool subcritical = true;
  /// Energy of the accepted iterate after each iteration.
  std::vector<double> energy_history;
};

/// cap_{s,p}(K, G): minimises capacity_energy(u) over u >= 1 on K, u = 0 off G.
///
/// Truncating an admissible u to [0,1] never increases the energy, so the
/// search runs over the box {u = 1 on K, 0 <= u <= 1 elsewhere}, starting
/// from the indicator of K.  p = 2 uses monotone accelerated projected
/// gradient with the fixed step 1/L, L from power iteration; other p use
/// projected gradient with backtracking.  The best iterate is returned.
CapacityResult capacity(const CompactSet& k, const FracParams& params, const SolverOptions& opts = {});

/// Exact p = 2 capacity by active-set enumeration on the untruncated
/// problem.  Independent of capacity(): the quadratic form is assembled from
/// capacity_energy by polarisation and solved densely for every candidate
/// active set.  Refuses (std::length_error) when |K| > 16 or |G \ K| > 16.
double capacity_oracle(const CompactSet& k, const FracParams& params);

/// sum over x in K of h^n dist(x, boundary)^(-sp)
double mazya_numerator(const CompactSet& k, const FracParams& params);
/// mazya_numerator(K) / cap(K).  Throws std::domain_error for empty K.
double mazya_ratio(const CompactSet& k, const FracParams& params, const SolverOptions& opts = {});

}  // namespace fracmax
