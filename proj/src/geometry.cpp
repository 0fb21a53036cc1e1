#include "fracmax/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracmax/lattice.hpp"
#include "fracmax/random.hpp"

namespace fracmax {

bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

GridDomain::GridDomain(int dim, int cells_per_side, std::vector<std::uint8_t> mask,
                       double spacing, Point origin)
    : dim_(dim), n_(cells_per_side), h_(spacing), origin_(origin), mask_(std::move(mask)) {
  if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("dim must be 1 or 2");
  if (n_ < 4 || !is_power_of_two(n_))
    throw std::invalid_argument("cells_per_side must be a power of two >= 4");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw std::invalid_argument("spacing must be positive");
  const std::size_t expected = dim_ == 1 ? std::size_t(n_) : std::size_t(n_) * n_;
  if (mask_.size() != expected) throw std::invalid_argument("mask size does not match the grid");

  rank_.assign(mask_.size(), -1);
  for (CellIndex c = 0; c < mask_.size(); ++c) {
    if (mask_[c]) {
      mask_[c] = 1;
      rank_[c] = static_cast<std::ptrdiff_t>(interior_.size());
      interior_.push_back(c);
    }
  }
  if (interior_.empty()) throw std::invalid_argument("domain has no interior cells");
  compute_distances();
}

Coord GridDomain::coords(CellIndex c) const {
  if (dim_ == 1) return {static_cast<int>(c), 0};
  return {static_cast<int>(c % n_), static_cast<int>(c / n_)};
}

CellIndex GridDomain::cell(Coord xy) const {
  return dim_ == 1 ? CellIndex(xy[0]) : CellIndex(xy[1]) * n_ + CellIndex(xy[0]);
}

bool GridDomain::in_window(Coord xy) const {
  if (xy[0] < 0 || xy[0] >= n_) return false;
  if (dim_ == 1) return xy[1] == 0;
  return xy[1] >= 0 && xy[1] < n_;
}

Point GridDomain::center(CellIndex c) const {
  const Coord xy = coords(c);
  Point p{origin_[0] + (xy[0] + 0.5) * h_, 0.0};
  if (dim_ == 2) p[1] = origin_[1] + (xy[1] + 0.5) * h_;
  return p;
}

std::optional<CellIndex> GridDomain::cell_containing(Point x) const {
  Coord xy{static_cast<int>(std::floor((x[0] - origin_[0]) / h_)), 0};
  if (dim_ == 2) xy[1] = static_cast<int>(std::floor((x[1] - origin_[1]) / h_));
  if (!in_window(xy)) return std::nullopt;
  return cell(xy);
}

double GridDomain::dist_to_boundary(CellIndex c) const {
  if (c >= mask_.size() || !mask_[c]) throw std::domain_error("cell is not interior");
  return 0.5 * h_ * std::sqrt(static_cast<double>(centre_dist_q_[c]));
}

double GridDomain::dist_to_boundary(Point x) const {
  const auto home = cell_containing(x);
  if (!home || !mask_[*home]) throw std::domain_error("point is not in an interior cell");
  // The nearest exterior cell is no farther than the one found from the centre.
  const double bound = dist_to_boundary(*home) + std::sqrt(double(dim_)) * h_;
  const int reach = static_cast<int>(std::ceil(bound / h_)) + 1;
  const Coord xy = coords(*home);
  const int rows = dim_ == 1 ? 0 : reach;
  double best2 = std::numeric_limits<double>::infinity();
  for (int dy = -rows; dy <= rows; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      const Coord e{xy[0] + dx, xy[1] + dy};
      if (in_window(e) && mask_[cell(e)]) continue;
      double d2 = 0.0;
      for (int a = 0; a < dim_; ++a) {
        const double lo = origin_[a] + e[a] * h_;
        const double gap = std::max({lo - x[a], x[a] - (lo + h_), 0.0});
        d2 += gap * gap;
      }
      best2 = std::min(best2, d2);
    }
  }
  return std::sqrt(best2);
}

namespace {

// Separable exact distance transform to the union of exterior cells on a grid
// padded with one exterior ring.  gap2(k) is the squared one-axis gap (in the
// caller's integer units) between cells whose indices differ by k.
template <class Gap2>
std::vector<std::int64_t> exterior_transform(const std::vector<std::uint8_t>& mask, int n, int dim,
                                             Gap2 gap2) {
  const int p = n + 2;
  const int prow = dim == 1 ? 1 : p;
  auto exterior = [&](int c, int r) {
    if (c == 0 || c == p - 1) return true;
    if (dim == 2 && (r == 0 || r == p - 1)) return true;
    const int wc = c - 1;
    const int wr = dim == 1 ? 0 : r - 1;
    return mask[std::size_t(wr) * n + wc] == 0;
  };

  // Pass along columns: nearest exterior cell in the same row.
  std::vector<std::int64_t> row_pass(std::size_t(p) * prow);
  std::vector<int> nearest(p);
  for (int r = 0; r < prow; ++r) {
    int last = -1;
    for (int c = 0; c < p; ++c) {
      if (exterior(c, r)) last = c;
      nearest[c] = last < 0 ? std::numeric_limits<int>::max() : c - last;
    }
    last = -1;
    for (int c = p - 1; c >= 0; --c) {
      if (exterior(c, r)) last = c;
      if (last >= 0) nearest[c] = std::min(nearest[c], last - c);
      row_pass[std::size_t(r) * p + c] = gap2(nearest[c]);
    }
  }

  std::vector<std::int64_t> out(mask.size());
  if (dim == 1) {
    for (int c = 0; c < n; ++c) out[c] = row_pass[c + 1];
    return out;
  }
  for (int r = 1; r < p - 1; ++r) {
    for (int c = 1; c < p - 1; ++c) {
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (int rr = 0; rr < p; ++rr) {
        const std::int64_t v = gap2(std::abs(r - rr)) + row_pass[std::size_t(rr) * p + c];
        best = std::min(best, v);
      }
      out[std::size_t(r - 1) * n + (c - 1)] = best;
    }
  }
  return out;
}

}  // namespace

void GridDomain::compute_distances() {
  // Centre-to-closed-cell gap is (|k| - 1/2) h for k != 0; stored doubled.
  centre_dist_q_ = exterior_transform(mask_, n_, dim_, [](int k) -> std::int64_t {
    if (k == 0) return 0;
    const std::int64_t g = 2 * std::int64_t(k) - 1;
    return g * g;
  });
  cell_gap2_ = exterior_transform(mask_, n_, dim_, [](int k) -> std::int64_t {
    const std::int64_t g = k > 1 ? k - 1 : 0;
    return g * g;
  });
  for (CellIndex c = 0; c < mask_.size(); ++c) {
    if (!mask_[c]) {
      centre_dist_q_[c] = 0;
      cell_gap2_[c] = 0;
    }
  }
}

// --- builtin shapes -----------------------------------------------------

const std::vector<std::string>& builtin_shapes() {
  static const std::vector<std::string> names{"interval", "punctured-interval", "square", "ball",
                                              "l-shape",  "annulus",            "cusp",   "corridor"};
  return names;
}

int builtin_dim(const std::string& name) {
  if (name == "interval" || name == "punctured-interval") return 1;
  for (const auto& s : builtin_shapes())
    if (s == name) return 2;
  throw std::invalid_argument("unknown shape '" + name + "'");
}

DomainPtr make_builtin(const std::string& name, int cells_per_side, const ShapeParams& params) {
  const int dim = builtin_dim(name);
  if (cells_per_side < 4 || !is_power_of_two(cells_per_side))
    throw std::invalid_argument("cells_per_side must be a power of two >= 4");
  const int n = cells_per_side;
  const double h = 1.0 / n;
  const std::size_t count = dim == 1 ? std::size_t(n) : std::size_t(n) * n;
  std::vector<std::uint8_t> mask(count, 0);

  auto inside = [&](double x, double y) -> bool {
    const double dx = x - 0.5, dy = y - 0.5;
    const double r = std::hypot(dx, dy);
    if (name == "interval" || name == "square") return true;
    if (name == "ball") return r < 0.45;
    if (name == "annulus") return r > 0.2 && r < 0.45;
    if (name == "l-shape") return !(x > 0.5 && y > 0.5);
    if (name == "cusp") return y < std::pow(x, params.beta);
    if (name == "corridor") {
      const bool band = y > 5.0 / 16 && y < 11.0 / 16;
      const bool left = x > 1.0 / 16 && x < 7.0 / 16 && band;
      const bool right = x > 9.0 / 16 && x < 15.0 / 16 && band;
      const bool link = x >= 7.0 / 16 && x <= 9.0 / 16 && std::abs(y - 0.5) < 0.5 * params.width;
      return left || right || link;
    }
    return false;
  };

  if (dim == 1) {
    for (int i = 0; i < n; ++i) mask[i] = 1;
    if (name == "punctured-interval") mask[n / 2] = 0;
  } else {
    if (name == "cusp" && !(params.beta > 1.0)) throw std::invalid_argument("cusp beta must exceed 1");
    if (name == "corridor" && !(params.width > 0.0 && params.width <= 0.375))
      throw std::invalid_argument("corridor width must lie in (0, 0.375]");
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        mask[std::size_t(r) * n + c] = inside((c + 0.5) * h, (r + 0.5) * h) ? 1 : 0;
  }
  return std::make_shared<const GridDomain>(dim, n, std::move(mask), h);
}

DomainPtr make_from_mask(int dim, int cells_per_side, std::vector<std::uint8_t> mask) {
  return std::make_shared<const GridDomain>(dim, cells_per_side, std::move(mask), 1.0 / cells_per_side);
}

// --- dyadic cubes -------------------------------------------------------

CubeQuantities cube_quantities(const DyadicCube& q, const GridDomain& g) {
  const double h = g.spacing();
  const double side = q.side_cells * h;
  const Coord first = q.first_cell();
  Point center{g.origin()[0] + (first[0] + 0.5 * q.side_cells) * h, 0.0};
  if (g.dim() == 2) center[1] = g.origin()[1] + (first[1] + 0.5 * q.side_cells) * h;
  const double dist = h * std::sqrt(static_cast<double>(cube_gap2(q, g)));
  return {side, std::sqrt(static_cast<double>(g.dim())) * side, dist, center};
}

Box scaled_box(const DyadicCube& q, const GridDomain& g, double t) {
  const auto cq = cube_quantities(q, g);
  const double half = 0.5 * t * cq.side;
  Box b;
  b.lo = {cq.center[0] - half, g.dim() == 2 ? cq.center[1] - half : 0.0};
  b.hi = {cq.center[0] + half, g.dim() == 2 ? cq.center[1] + half : 0.0};
  return b;
}

std::vector<CellIndex> cube_cells(const DyadicCube& q, const GridDomain& g) {
  std::vector<CellIndex> cells;
  const Coord first = q.first_cell();
  const int rows = g.dim() == 1 ? 1 : q.side_cells;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < q.side_cells; ++c) cells.push_back(g.cell({first[0] + c, first[1] + r}));
  return cells;
}

std::int64_t cube_gap2(const DyadicCube& q, const GridDomain& g) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (CellIndex c : cube_cells(q, g)) best = std::min(best, g.interior(c) ? g.cell_gap2(c) : 0);
  return best;
}

std::optional<std::size_t> WhitneyDecomposition::find(const DyadicCube& q) const {
  for (std::size_t i = 0; i < cubes.size(); ++i)
    if (cubes[i] == q) return i;
  return std::nullopt;
}

WhitneyDecomposition whitney_decompose(const GridDomain& g) {
  const int n = g.cells_per_side();
  const int dim = g.dim();
  int levels = 0;
  while ((1 << levels) < n) ++levels;

  // Pyramid of per-node minimum gaps and interior counts, finest level last.
  std::vector<std::vector<std::int64_t>> min_gap(levels + 1);
  std::vector<std::vector<std::int64_t>> count(levels + 1);
  min_gap[levels].resize(g.cell_count());
  count[levels].resize(g.cell_count());
  for (CellIndex c = 0; c < g.cell_count(); ++c) {
    min_gap[levels][c] = g.interior(c) ? g.cell_gap2(c) : 0;
    count[levels][c] = g.interior(c) ? 1 : 0;
  }
  for (int k = levels - 1; k >= 0; --k) {
    const int per = 1 << k;
    const int child_per = per * 2;
    const int rows = dim == 1 ? 1 : per;
    min_gap[k].assign(std::size_t(per) * rows, std::numeric_limits<std::int64_t>::max());
    count[k].assign(std::size_t(per) * rows, 0);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < per; ++c) {
        const std::size_t node = std::size_t(r) * per + c;
        for (int dr = 0; dr < (dim == 1 ? 1 : 2); ++dr) {
          for (int dc = 0; dc < 2; ++dc) {
            const int cr = dim == 1 ? 0 : 2 * r + dr;
            const std::size_t child = std::size_t(cr) * child_per + (2 * c + dc);
            min_gap[k][node] = std::min(min_gap[k][node], min_gap[k + 1][child]);
            count[k][node] += count[k + 1][child];
          }
        }
      }
    }
  }

  WhitneyDecomposition w;
  w.owner.assign(g.cell_count(), -1);
  struct Node {
    int level;
    Coord index;
  };
  std::vector<Node> stack{{0, {0, 0}}};
  while (!stack.empty()) {
    const Node node = stack.back();
    stack.pop_back();
    const int per = 1 << node.level;
    const std::size_t id = std::size_t(node.index[1]) * per + node.index[0];
    if (count[node.level][id] == 0) continue;
    const int side = n >> node.level;
    const std::int64_t diam2 = std::int64_t(dim) * side * side;
    if (diam2 <= min_gap[node.level][id]) {
      w.cubes.push_back({node.level, node.index, side});
      continue;
    }
    if (side == 1) {
      w.residual.push_back(g.cell(node.index));
      continue;
    }
    for (int dr = (dim == 1 ? 0 : 1); dr >= 0; --dr)
      for (int dc = 1; dc >= 0; --dc)
        stack.push_back({node.level + 1, {2 * node.index[0] + dc, dim == 1 ? 0 : 2 * node.index[1] + dr}});
  }

  std::sort(w.cubes.begin(), w.cubes.end(), [](const DyadicCube& a, const DyadicCube& b) {
    if (a.level != b.level) return a.level < b.level;
    if (a.index[1] != b.index[1]) return a.index[1] < b.index[1];
    return a.index[0] < b.index[0];
  });
  std::sort(w.residual.begin(), w.residual.end());
  for (std::size_t i = 0; i < w.cubes.size(); ++i)
    for (CellIndex c : cube_cells(w.cubes[i], g)) w.owner[c] = static_cast<std::ptrdiff_t>(i);
  return w;
}

double regularity_ratio(const GridDomain& g, int samples, std::uint64_t seed, double r_max) {
  if (samples < 0) throw std::invalid_argument("samples must be non-negative");
  if (!(r_max > 0.0)) throw std::invalid_argument("r_max must be positive");
  const int n = g.cells_per_side();
  const int rows = static_cast<int>(g.rows());
  const double h = g.spacing();

  std::vector<int> radii;
  for (int k = 1; k * h < r_max; k = std::max(k + 1, static_cast<int>(k * 1.25))) radii.push_back(k);
  if (radii.empty()) return 1.0;
  const BallTable balls(g.dim(), radii.back());

  std::vector<std::int64_t> prefix(std::size_t(rows) * (n + 1), 0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < n; ++c)
      prefix[std::size_t(r) * (n + 1) + c + 1] =
          prefix[std::size_t(r) * (n + 1) + c] + g.mask()[std::size_t(r) * n + c];

  std::vector<CellIndex> centres;
  for (CellIndex c : g.interior_cells())
    if (g.cell_gap2(c) == 0) centres.push_back(c);
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) centres.push_back(g.interior_cells()[rng.below(g.interior_cells().size())]);

  double best = 1.0;
  for (CellIndex x : centres) {
    const Coord xy = g.coords(x);
    for (int k : radii) {
      std::int64_t inside = 0;
      const int reach = g.dim() == 1 ? 0 : k;
      for (int dy = -reach; dy <= reach; ++dy) {
        const int row = xy[1] + dy;
        if (row < 0 || row >= rows) continue;
        const int w = balls.half_width(k, dy);
        const int lo = std::max(xy[0] - w, 0);
        const int hi = std::min(xy[0] + w, n - 1);
        if (lo > hi) continue;
        inside += prefix[std::size_t(row) * (n + 1) + hi + 1] - prefix[std::size_t(row) * (n + 1) + lo];
      }
      best = std::min(best, static_cast<double>(inside) / static_cast<double>(balls.count(k)));
    }
  }
  return best;
}

}  // namespace fracmax
