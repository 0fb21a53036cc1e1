#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fracmax {

using CellIndex = std::size_t;
/// Integer cell coordinates (column, row). The row is always 0 in 1D.
using Coord = std::array<int, 2>;
using Point = std::array<double, 2>;

/// A bounded open set G inside a square (or interval) window of
/// `cells_per_side` cells per axis.  A cell belongs to G when its mask entry
/// is set.  Everything outside the window is exterior, so the window is
/// implicitly surrounded by a non-interior ring of cells.
///
/// The boundary of G is the polygonal interface between interior and
/// exterior cells.  Distances to it are exact and are stored as integers in
/// units of h (or h/2 for cell centres) so that the Whitney bounds can be
/// checked without rounding.
class GridDomain {
 public:
  GridDomain(int dim, int cells_per_side, std::vector<std::uint8_t> mask,
             double spacing, Point origin = {0.0, 0.0});

  int dim() const { return dim_; }
  int cells_per_side() const { return n_; }
  double spacing() const { return h_; }
  const Point& origin() const { return origin_; }
  /// Number of cells in the window (N^dim).
  std::size_t cell_count() const { return mask_.size(); }
  std::size_t rows() const { return dim_ == 1 ? 1 : static_cast<std::size_t>(n_); }

  bool interior(CellIndex c) const { return mask_[c] != 0; }
  const std::vector<CellIndex>& interior_cells() const { return interior_; }
  /// Position of `c` in interior_cells(), or -1 when c is exterior.
  std::ptrdiff_t interior_rank(CellIndex c) const { return rank_[c]; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }

  Coord coords(CellIndex c) const;
  CellIndex cell(Coord xy) const;
  bool in_window(Coord xy) const;
  Point center(CellIndex c) const;
  /// Cell whose half-open box [ih,(i+1)h) contains the point, if inside the window.
  std::optional<CellIndex> cell_containing(Point x) const;

  /// Exact distance from the centre of interior cell `c` to the boundary.
  /// Throws std::domain_error when c is not interior.
  double dist_to_boundary(CellIndex c) const;
  /// Exact distance from any point of an interior cell to the boundary.
  /// Throws std::domain_error when x does not lie in an interior cell.
  double dist_to_boundary(Point x) const;
  /// 4 * (dist_to_boundary / h)^2, an integer.
  std::int64_t boundary_dist2_quarter(CellIndex c) const { return centre_dist_q_[c]; }
  /// (dist(closed cell, boundary) / h)^2, an integer; 0 for exterior cells.
  std::int64_t cell_gap2(CellIndex c) const { return cell_gap2_[c]; }

  /// Window side length N*h.
  double window_side() const { return n_ * h_; }

 private:
  void compute_distances();

  int dim_;
  int n_;
  double h_;
  Point origin_;
  std::vector<std::uint8_t> mask_;
  std::vector<CellIndex> interior_;
  std::vector<std::ptrdiff_t> rank_;
  std::vector<std::int64_t> centre_dist_q_;
  std::vector<std::int64_t> cell_gap2_;
};

using DomainPtr = std::shared_ptr<const GridDomain>;

struct ShapeParams {
  double beta = 3.0;     // cusp exponent
  double width = 0.125;  // corridor width
};

/// Builtin shapes on the unit window [0,1]^n with h = 1/cells_per_side:
/// interval, punctured-interval (1D); square, ball, l-shape, annulus, cusp,
/// corridor (2D).
DomainPtr make_builtin(const std::string& name, int cells_per_side,
                       const ShapeParams& params = {});
const std::vector<std::string>& builtin_shapes();
/// Dimension of a builtin shape; throws std::invalid_argument for unknown names.
int builtin_dim(const std::string& name);
DomainPtr make_from_mask(int dim, int cells_per_side, std::vector<std::uint8_t> mask);

bool is_power_of_two(long long v);

// --- dyadic cubes -------------------------------------------------------

/// Dyadic cube of the window: level k has side N*h / 2^k, index m.
struct DyadicCube {
  int level = 0;
  Coord index{0, 0};
  int side_cells = 0;

  Coord first_cell() const { return {index[0] * side_cells, index[1] * side_cells}; }
  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
};

struct Box {
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};
};

struct CubeQuantities {
  double side;
  double diam;
  double dist;
  Point center;
};

CubeQuantities cube_quantities(const DyadicCube& q, const GridDomain& g);
/// The cube tQ: same centre, side t*l(Q).
Box scaled_box(const DyadicCube& q, const GridDomain& g, double t);
/// Cells of the window covered by the cube.
std::vector<CellIndex> cube_cells(const DyadicCube& q, const GridDomain& g);
/// (dist(Q, boundary)/h)^2 as an integer; 0 if Q meets the exterior.
std::int64_t cube_gap2(const DyadicCube& q, const GridDomain& g);

class WhitneyDecomposition {
 public:
  std::vector<DyadicCube> cubes;
  /// Owning cube per window cell, -1 for exterior cells and the residual layer.
  std::vector<std::ptrdiff_t> owner;
  /// Interior cells too close to the boundary for any resolvable cube.
  std::vector<CellIndex> residual;

  std::optional<std::size_t> find(const DyadicCube& q) const;
};

/// Maximal dyadic cubes with diam(Q) <= dist(Q, boundary).
WhitneyDecomposition whitney_decompose(const GridDomain& g);

/// inf over sampled (x, r) of |B(x,r) ∩ G| / |B(x,r)|, both measured by
/// counting lattice cells.  Centres are every interior cell touching the
/// boundary plus `samples` seeded random interior cells; radii run over a
/// geometric ladder of multiples of h below r_max.
double regularity_ratio(const GridDomain& g, int samples, std::uint64_t seed = 0,
                        double r_max = 1.0);

}  // namespace fracmax
