#include "fracmax/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fracmax/lattice.hpp"
#include "fracmax/parallel.hpp"

namespace fracmax {

GridFunction local_maximal(const GridFunction& f) {
  const GridDomain& g = f.domain();
  const int n = g.cells_per_side();
  const int rows = static_cast<int>(g.rows());

  // Largest admissible radius per cell: 4k^2 < 4 (dist/h)^2.
  std::vector<int> kmax(g.cell_count(), -1);
  int overall = 0;
  for (CellIndex c : g.interior_cells()) {
    const std::int64_t q = g.boundary_dist2_quarter(c);
    std::int64_t k = isqrt(q / 4);
    while (4 * k * k >= q) --k;
    kmax[c] = static_cast<int>(k);
    overall = std::max(overall, kmax[c]);
  }
  const BallTable balls(g.dim(), overall);

  std::vector<double> prefix(std::size_t(rows) * (n + 1), 0.0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < n; ++c)
      prefix[std::size_t(r) * (n + 1) + c + 1] =
          prefix[std::size_t(r) * (n + 1) + c] + std::abs(f[std::size_t(r) * n + c]);

  std::vector<double> out(g.cell_count(), 0.0);
  const auto& cells = g.interior_cells();
  parallel_for(cells.size(), [&](std::size_t idx) {
    const CellIndex x = cells[idx];
    const Coord xy = g.coords(x);
    double best = std::abs(f[x]);
    for (int k = 1; k <= kmax[x]; ++k) {
      double total = 0.0;
      const int reach = g.dim() == 1 ? 0 : k;
      for (int dy = -reach; dy <= reach; ++dy) {
        const int row = xy[1] + dy;
        const int w = balls.half_width(k, dy);
        const double* p = &prefix[std::size_t(row) * (n + 1)];
        total += p[xy[0] + w + 1] - p[xy[0] - w];
      }
      best = std::max(best, total / static_cast<double>(balls.count(k)));
    }
    out[x] = best;
  });
  return GridFunction(f.domain_ptr(), std::move(out));
}

double harnack_constant(int dim) {
  if (dim == 1) return 16.0 / 5.0;
  if (dim == 2) return 128.0 * std::numbers::pi / 25.0;
  throw std::invalid_argument("dim must be 1 or 2");
}

double box_average(const GridFunction& u, const Box& box) {
  const GridDomain& g = u.domain();
  const double h = g.spacing();
  const int dim = g.dim();
  const int n = g.cells_per_side();
  auto range = [&](int axis, int& lo, int& hi) {
    lo = std::max(0, static_cast<int>(std::floor((box.lo[axis] - g.origin()[axis]) / h)));
    hi = std::min(n - 1, static_cast<int>(std::ceil((box.hi[axis] - g.origin()[axis]) / h)) - 1);
  };
  auto overlap = [&](int axis, int i) {
    const double a = g.origin()[axis] + i * h;
    return std::max(0.0, std::min(a + h, box.hi[axis]) - std::max(a, box.lo[axis]));
  };
  int c0, c1, r0 = 0, r1 = 0;
  range(0, c0, c1);
  if (dim == 2) range(1, r0, r1);
  double volume = box.hi[0] - box.lo[0];
  if (dim == 2) volume *= box.hi[1] - box.lo[1];
  if (!(volume > 0.0)) throw std::invalid_argument("box has no volume");
  double total = 0.0;
  for (int r = r0; r <= r1; ++r) {
    const double wr = dim == 2 ? overlap(1, r) : 1.0;
    for (int c = c0; c <= c1; ++c) total += wr * overlap(0, c) * u[g.cell({c, r})];
  }
  return total / volume;
}

double harnack_ratio(const GridFunction& u, const GridFunction& mu, const WhitneyDecomposition& w,
                     const DyadicCube& q) {
  if (!w.find(q)) throw std::domain_error("cube is not a Whitney cube of the domain");
  for (double v : u.values())
    if (v < 0.0) throw std::domain_error("harnack_ratio needs a non-negative function");
  const GridDomain& g = u.domain();
  const double numerator = box_average(u, scaled_box(q, g, 0.5));
  double denominator = std::numeric_limits<double>::infinity();
  for (CellIndex c : cube_cells(q, g)) denominator = std::min(denominator, mu[c]);
  if (denominator == 0.0) return numerator == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return numerator / denominator;
}

double harnack_ratio(const GridFunction& u, const WhitneyDecomposition& w, const DyadicCube& q) {
  return harnack_ratio(u, local_maximal(u), w, q);
}

}  // namespace fracmax
