#include "fracmax/capacity.hpp"

#include <gsl/gsl_sf_zeta.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracmax/parallel.hpp"
#include "fracmax/seminorm.hpp"

namespace fracmax {

CompactSet::CompactSet(DomainPtr d, std::vector<CellIndex> c) : domain(std::move(d)), cells(std::move(c)) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  for (CellIndex x : cells)
    if (x >= domain->cell_count() || !domain->interior(x))
      throw std::domain_error("compact set must consist of interior cells");
}

double lattice_zeta(int dim, double sigma) {
  if (!(sigma > dim)) throw std::invalid_argument("lattice zeta needs sigma > dim");
  if (dim == 1) return 2.0 * gsl_sf_zeta(sigma);
  if (dim == 2) {
    const double t = 0.5 * sigma;
    const double beta = std::pow(4.0, -t) * (gsl_sf_hzeta(t, 0.25) - gsl_sf_hzeta(t, 0.75));
    return 4.0 * gsl_sf_zeta(t) * beta;
  }
  throw std::invalid_argument("dim must be 1 or 2");
}

std::vector<double> exterior_kernel(const GridDomain& g, const FracParams& params) {
  const int n = g.dim();
  const double sigma = params.kernel_exponent(n);
  const double total = lattice_zeta(n, sigma);
  const OffsetKernel kernel(g, sigma);
  const auto& cells = g.interior_cells();
  std::vector<double> out(g.cell_count(), 0.0);
  const double scale = std::pow(g.spacing(), -params.sp());
  parallel_for(cells.size(), [&](std::size_t i) {
    const Coord x = g.coords(cells[i]);
    double inside = 0.0;
    for (CellIndex y : cells) inside += kernel(x, g.coords(y));
    out[cells[i]] = scale * (total - inside);
  });
  return out;
}

double capacity_energy(const GridFunction& u, const FracParams& params) {
  const GridDomain& g = u.domain();
  const std::vector<double> kappa = exterior_kernel(g, params);
  double killing = 0.0;
  for (CellIndex c : g.interior_cells())
    if (u[c] != 0.0) killing += std::pow(std::abs(u[c]), params.p()) * kappa[c];
  return seminorm_power(u, params) + 2.0 * std::pow(g.spacing(), g.dim()) * killing;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Box for the truncated problem: u = 1 on K, 0 <= u <= 1 elsewhere.
struct Box {
  VectorXd lo, hi;
  VectorXd project(const VectorXd& v) const { return v.cwiseMax(lo).cwiseMin(hi); }
};

Box make_box(const GridDomain& g, const CompactSet& k) {
  const std::size_t m = g.interior_cells().size();
  Box box{VectorXd::Zero(m), VectorXd::Ones(m)};
  for (CellIndex c : k.cells) box.lo[g.interior_rank(c)] = 1.0;
  return box;
}

// The p = 2 energy is u^T A u with A_xx = 2 h^(n-sp) Z, A_xy = -2 h^(n-sp) |x-y|^-sigma.
MatrixXd quadratic_form(const GridDomain& g, const FracParams& params) {
  const int n = g.dim();
  const double sigma = params.kernel_exponent(n);
  const double scale = 2.0 * std::pow(g.spacing(), n - params.sp());
  const double diag = scale * lattice_zeta(n, sigma);
  const OffsetKernel kernel(g, sigma);
  const auto& cells = g.interior_cells();
  const Eigen::Index m = static_cast<Eigen::Index>(cells.size());
  MatrixXd a(m, m);
  parallel_for(cells.size(), [&](std::size_t j) {
    const Coord xj = g.coords(cells[j]);
    for (Eigen::Index i = 0; i < m; ++i)
      a(i, Eigen::Index(j)) = Eigen::Index(j) == i ? diag : -scale * kernel(g.coords(cells[i]), xj);
  });
  return a;
}

double lipschitz_bound(const GridDomain& g, const MatrixXd& a) {
  const Eigen::Index m = a.rows();
  VectorXd v(m);
  const auto& cells = g.interior_cells();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Coord xy = g.coords(cells[i]);
    v[i] = ((xy[0] + xy[1]) % 2 == 0) ? 1.0 : -1.0;
  }
  double lambda = 0.0;
  for (int it = 0; it < 100; ++it) {
    const VectorXd w = a * v;
    const double norm = w.norm();
    if (norm == 0.0) break;
    lambda = v.dot(w) / v.squaredNorm();
    v = w / norm;
  }
  const double gershgorin = a.cwiseAbs().rowwise().sum().maxCoeff();
  return 2.0 * std::min(1.05 * lambda, gershgorin);
}

bool stalled(const std::vector<double>& history, const SolverOptions& opts) {
  const std::size_t k = history.size();
  if (k == 0) return false;
  if (history.back() == 0.0) return true;
  if (k <= opts.window) return false;
  return history[k - 1 - opts.window] - history.back() <= opts.tolerance * std::abs(history.back());
}

GridFunction to_grid(const DomainPtr& d, const VectorXd& u) {
  std::vector<double> values(d->cell_count(), 0.0);
  const auto& cells = d->interior_cells();
  for (std::size_t i = 0; i < cells.size(); ++i) values[cells[i]] = u[Eigen::Index(i)];
  return GridFunction(d, std::move(values));
}

CapacityResult solve_quadratic(const CompactSet& k, const FracParams& params, const SolverOptions& opts) {
  const GridDomain& g = *k.domain;
  const MatrixXd a = quadratic_form(g, params);
  const Box box = make_box(g, k);
  const double lip = lipschitz_bound(g, a);

  VectorXd x = box.lo;  // indicator of K
  VectorXd ax = a * x;
  double ex = x.dot(ax);
  VectorXd x_prev = x, ax_prev = ax;
  VectorXd y = x, ay = ax;
  double t = 1.0;

  CapacityResult result(k.domain);
  std::size_t it = 0;
  while (it < opts.max_iterations && !stalled(result.energy_history, opts)) {
    ++it;
    const VectorXd z = box.project(y - (2.0 / lip) * ay);
    const VectorXd az = a * z;
    const double ez = z.dot(az);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    x_prev = x;
    ax_prev = ax;
    if (ez <= ex) {
      x = z;
      ax = az;
      ex = ez;
      y = x + (t / t_next) * (z - x) + ((t - 1.0) / t_next) * (x - x_prev);
      ay = ax + (t / t_next) * (az - ax) + ((t - 1.0) / t_next) * (ax - ax_prev);
      t = t_next;
    } else {
      // Momentum overshoot: restart from the best iterate.
      y = x;
      ay = ax;
      t = 1.0;
    }
    result.energy_history.push_back(ex);
  }
  result.iterations = it;
  result.converged = stalled(result.energy_history, opts) || (it == 0);
  result.value = ex;
  const VectorXd step = x - box.project(x - (2.0 / lip) * ax);
  result.residual = step.size() ? step.cwiseAbs().maxCoeff() : 0.0;
  result.minimizer = to_grid(k.domain, x);
  return result;
}

// Energy and gradient of the general-p energy on the interior vector.
class PowerEnergy {
 public:
  PowerEnergy(const GridDomain& g, const FracParams& params)
      : g_(g), p_(params.p()), kernel_(g, params.kernel_exponent(g.dim())),
        scale_(std::pow(g.spacing(), g.dim() - params.sp())) {
    const auto& cells = g.interior_cells();
    const double total = lattice_zeta(g.dim(), params.kernel_exponent(g.dim()));
    killing_.resize(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      double inside = 0.0;
      for (CellIndex y : cells) inside += kernel_(g.coords(cells[i]), g.coords(y));
      killing_[i] = total - inside;
    }
  }

  double value(const VectorXd& u) const {
    const auto& cells = g_.interior_cells();
    std::vector<double> partial(cells.size(), 0.0);
    parallel_for(cells.size(), [&](std::size_t i) {
      const Coord xi = g_.coords(cells[i]);
      double acc = 2.0 * std::pow(std::abs(u[Eigen::Index(i)]), p_) * killing_[i];
      for (std::size_t j = 0; j < cells.size(); ++j) {
        if (i == j) continue;
        const double d = u[Eigen::Index(i)] - u[Eigen::Index(j)];
        if (d != 0.0) acc += kernel_(xi, g_.coords(cells[j])) * std::pow(std::abs(d), p_);
      }
      partial[i] = acc;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    return scale_ * total;
  }

  VectorXd gradient(const VectorXd& u) const {
    const auto& cells = g_.interior_cells();
    VectorXd grad(u.size());
    auto dpow = [this](double t) { return t == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(t), p_ - 1.0), t); };
    parallel_for(cells.size(), [&](std::size_t i) {
      const Coord xi = g_.coords(cells[i]);
      double acc = killing_[i] * dpow(u[Eigen::Index(i)]);
      for (std::size_t j = 0; j < cells.size(); ++j) {
        if (i == j) continue;
        acc += kernel_(xi, g_.coords(cells[j])) * dpow(u[Eigen::Index(i)] - u[Eigen::Index(j)]);
      }
      grad[Eigen::Index(i)] = 2.0 * p_ * scale_ * acc;
    });
    return grad;
  }

 private:
  const GridDomain& g_;
  double p_;
  OffsetKernel kernel_;
  double scale_;
  std::vector<double> killing_;
};

CapacityResult solve_general(const CompactSet& k, const FracParams& params, const SolverOptions& opts) {
  const GridDomain& g = *k.domain;
  const PowerEnergy energy(g, params);
  const Box box = make_box(g, k);

  VectorXd x = box.lo;
  double ex = energy.value(x);
  VectorXd grad = energy.gradient(x);
  double step = 1.0 / std::max(1.0, grad.cwiseAbs().maxCoeff());

  CapacityResult result(k.domain);
  std::size_t it = 0;
  bool stationary = false;
  while (it < opts.max_iterations && !stalled(result.energy_history, opts) && !stationary) {
    ++it;
    bool accepted = false;
    for (int trial = 0; trial < 60 && !accepted; ++trial) {
      const VectorXd z = box.project(x - step * grad);
      const VectorXd dz = z - x;
      if (dz.cwiseAbs().maxCoeff() == 0.0) {
        stationary = true;
        break;
      }
      const double ez = energy.value(z);
      if (ez <= ex + grad.dot(dz) + dz.squaredNorm() / (2.0 * step)) {
        x = z;
        ex = ez;
        grad = energy.gradient(x);
        step *= 1.5;
        accepted = true;
      } else {
        step *= 0.5;
      }
    }
    if (!accepted) stationary = true;
    result.energy_history.push_back(ex);
  }
  result.iterations = it;
  result.converged = stationary || stalled(result.energy_history, opts) || it == 0;
  result.value = ex;
  const VectorXd s = x - box.project(x - grad);
  result.residual = s.size() ? s.cwiseAbs().maxCoeff() : 0.0;
  result.minimizer = to_grid(k.domain, x);
  return result;
}

}  // namespace

CapacityResult capacity(const CompactSet& k, const FracParams& params, const SolverOptions& opts) {
  if (opts.window == 0) throw std::invalid_argument("solver window must be positive");
  CapacityResult result =
      params.p() == 2.0 ? solve_quadratic(k, params, opts) : solve_general(k, params, opts);
  result.subcritical = params.sp() < k.domain->dim();
  return result;
}

double capacity_oracle(const CompactSet& k, const FracParams& params) {
  if (params.p() != 2.0) throw std::invalid_argument("capacity_oracle needs p = 2");
  const DomainPtr& d = k.domain;
  const auto& cells = d->interior_cells();
  const std::size_t m = cells.size();
  if (k.cells.size() > 16 || m - k.cells.size() > 16)
    throw std::length_error("capacity_oracle instance too large");

  // Polarisation: A_xy = (E(e_x + e_y) - E(e_x) - E(e_y)) / 2.
  auto energy_of = [&](std::initializer_list<std::size_t> support) {
    GridFunction u(d);
    for (std::size_t i : support) u.set(cells[i], 1.0);
    return capacity_energy(u, params);
  };
  MatrixXd a(m, m);
  std::vector<double> single(m);
  for (std::size_t i = 0; i < m; ++i) single[i] = energy_of({i});
  for (std::size_t i = 0; i < m; ++i) {
    a(Eigen::Index(i), Eigen::Index(i)) = single[i];
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = 0.5 * (energy_of({i, j}) - single[i] - single[j]);
      a(Eigen::Index(i), Eigen::Index(j)) = v;
      a(Eigen::Index(j), Eigen::Index(i)) = v;
    }
  }

  std::vector<std::size_t> constrained;
  for (CellIndex c : k.cells) constrained.push_back(static_cast<std::size_t>(d->interior_rank(c)));

  double best = std::numeric_limits<double>::infinity();
  const std::size_t subsets = std::size_t(1) << constrained.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    std::vector<bool> active(m, false);
    for (std::size_t b = 0; b < constrained.size(); ++b)
      if (mask & (std::size_t(1) << b)) active[constrained[b]] = true;
    std::vector<Eigen::Index> free_idx, fixed_idx;
    for (std::size_t i = 0; i < m; ++i) (active[i] ? fixed_idx : free_idx).push_back(Eigen::Index(i));

    VectorXd u = VectorXd::Zero(m);
    for (auto i : fixed_idx) u[i] = 1.0;
    if (!free_idx.empty()) {
      const auto nf = Eigen::Index(free_idx.size());
      MatrixXd aff(nf, nf);
      VectorXd rhs = VectorXd::Zero(nf);
      for (Eigen::Index r = 0; r < nf; ++r) {
        for (Eigen::Index c = 0; c < nf; ++c) aff(r, c) = a(free_idx[r], free_idx[c]);
        for (auto f : fixed_idx) rhs[r] -= a(free_idx[r], f);
      }
      const VectorXd sol = aff.llt().solve(rhs);
      for (Eigen::Index r = 0; r < nf; ++r) u[free_idx[r]] = sol[r];
    }
    bool feasible = true;
    for (std::size_t i : constrained)
      if (u[Eigen::Index(i)] < 1.0 - 1e-12) feasible = false;
    if (!feasible) continue;
    best = std::min(best, u.dot(a * u));
  }
  return best;
}

double mazya_numerator(const CompactSet& k, const FracParams& params) {
  const GridDomain& g = *k.domain;
  double total = 0.0;
  for (CellIndex c : k.cells) total += std::pow(g.dist_to_boundary(c), -params.sp());
  return total * std::pow(g.spacing(), g.dim());
}

double mazya_ratio(const CompactSet& k, const FracParams& params, const SolverOptions& opts) {
  if (k.cells.empty()) throw std::domain_error("mazya_ratio needs a non-empty compact set");
  return mazya_numerator(k, params) / capacity(k, params, opts).value;
}

}  // namespace fracmax
