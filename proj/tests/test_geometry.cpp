#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "fracmax/geometry.hpp"
#include "fracmax/random.hpp"

using namespace fracmax;

namespace {

// Every exterior lattice cell within one ring of the window.
std::vector<Coord> exterior_cells(const GridDomain& g) {
  std::vector<Coord> out;
  const int n = g.cells_per_side();
  const int r0 = g.dim() == 1 ? 0 : -1, r1 = g.dim() == 1 ? 0 : n;
  for (int r = r0; r <= r1; ++r)
    for (int c = -1; c <= n; ++c)
      if (!g.in_window({c, r}) || !g.interior(g.cell({c, r}))) out.push_back({c, r});
  return out;
}

// Squared gap between the closed boxes [lo, lo+len] on each axis, in cells.
double box_gap2(Coord lo_a, int len_a, Coord lo_b, int len_b, int dim) {
  double d2 = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double gap = std::max({double(lo_b[a] - (lo_a[a] + len_a)), double(lo_a[a] - (lo_b[a] + len_b)), 0.0});
    d2 += gap * gap;
  }
  return d2;
}

double brute_centre_dist(const GridDomain& g, CellIndex c) {
  const Coord x = g.coords(c);
  double best = INFINITY;
  for (const Coord& e : exterior_cells(g)) {
    double d2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const double k = std::abs(e[a] - x[a]);
      const double gap = k == 0 ? 0.0 : k - 0.5;
      d2 += gap * gap;
    }
    best = std::min(best, d2);
  }
  return std::sqrt(best) * g.spacing();
}

struct OracleWhitney {
  std::set<std::tuple<int, int, int>> cubes;  // level, ix, iy
  std::set<CellIndex> residual;
};

// Enumerate every dyadic cube, keep the maximal ones made of interior cells
// with diam <= dist.
OracleWhitney brute_whitney(const GridDomain& g) {
  const int n = g.cells_per_side();
  const auto ext = exterior_cells(g);
  auto good = [&](int level, int ix, int iy) {
    const int side = n >> level;
    const Coord lo{ix * side, iy * side};
    for (int r = 0; r < (g.dim() == 1 ? 1 : side); ++r)
      for (int c = 0; c < side; ++c)
        if (!g.interior(g.cell({lo[0] + c, lo[1] + r}))) return false;
    double dist2 = INFINITY;
    for (const Coord& e : ext) dist2 = std::min(dist2, box_gap2(lo, side, e, 1, g.dim()));
    return double(g.dim()) * side * side <= dist2;
  };
  OracleWhitney out;
  std::set<CellIndex> covered;
  int levels = 0;
  while ((1 << levels) < n) ++levels;
  for (int level = 0; level <= levels; ++level) {
    const int per = 1 << level;
    for (int iy = 0; iy < (g.dim() == 1 ? 1 : per); ++iy) {
      for (int ix = 0; ix < per; ++ix) {
        if (!good(level, ix, iy)) continue;
        if (level > 0 && good(level - 1, ix / 2, iy / 2)) continue;
        out.cubes.insert({level, ix, iy});
        const int side = n >> level;
        for (int r = 0; r < (g.dim() == 1 ? 1 : side); ++r)
          for (int c = 0; c < side; ++c) covered.insert(g.cell({ix * side + c, iy * side + r}));
      }
    }
  }
  for (CellIndex c : g.interior_cells())
    if (!covered.count(c)) out.residual.insert(c);
  return out;
}

int grid_for(const std::string& shape, int fine1d, int fine2d) {
  return builtin_dim(shape) == 1 ? fine1d : fine2d;
}

}  // namespace

TEST_CASE("domain construction enforces its invariants") {
  CHECK_THROWS_AS(make_from_mask(1, 8, std::vector<std::uint8_t>(8, 0)), std::invalid_argument);
  CHECK_THROWS_AS(make_from_mask(1, 12, std::vector<std::uint8_t>(12, 1)), std::invalid_argument);
  CHECK_THROWS_AS(make_from_mask(1, 2, std::vector<std::uint8_t>(2, 1)), std::invalid_argument);
  CHECK_THROWS_AS(make_from_mask(2, 8, std::vector<std::uint8_t>(8, 1)), std::invalid_argument);
  CHECK_THROWS_AS(make_from_mask(3, 8, std::vector<std::uint8_t>(512, 1)), std::invalid_argument);
  CHECK_THROWS_AS(make_builtin("nonsense", 16), std::invalid_argument);
  CHECK_THROWS_AS(make_builtin("square", 24), std::invalid_argument);
  for (const auto& name : builtin_shapes()) {
    const auto g = make_builtin(name, grid_for(name, 64, 32));
    CHECK(!g->interior_cells().empty());
    CHECK(g->spacing() > 0.0);
  }
}

TEST_CASE("distance transform matches brute force on every builtin and random masks") {
  for (const auto& name : builtin_shapes()) {
    const auto g = make_builtin(name, grid_for(name, 64, 32));
    for (CellIndex c : g->interior_cells()) {
      const double want = brute_centre_dist(*g, c);
      REQUIRE(g->dist_to_boundary(c) == doctest::Approx(want).epsilon(1e-14));
      CHECK(g->dist_to_boundary(c) > 0.0);
    }
  }
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::uint8_t> mask(256);
    for (auto& m : mask) m = rng.uniform() < 0.7;
    mask[17] = 1;
    const auto g = make_from_mask(2, 16, mask);
    for (CellIndex c : g->interior_cells()) CHECK(g->dist_to_boundary(c) == doctest::Approx(brute_centre_dist(*g, c)));
  }
}

TEST_CASE("distance examples") {
  const auto interval = make_builtin("interval", 8);
  CHECK(interval->dist_to_boundary(Point{0.5, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(interval->dist_to_boundary(CellIndex(0)) == doctest::Approx(interval->spacing() / 2));
  CHECK(interval->dist_to_boundary(CellIndex(7)) == doctest::Approx(interval->spacing() / 2));
  const auto square = make_builtin("square", 16);
  CHECK(square->dist_to_boundary(Point{0.5, 0.5}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(square->dist_to_boundary(square->cell({0, 7})) == doctest::Approx(square->spacing() / 2));

  const auto punctured = make_builtin("punctured-interval", 16);
  CHECK_THROWS_AS(punctured->dist_to_boundary(CellIndex(8)), std::domain_error);
  CHECK_THROWS_AS(punctured->dist_to_boundary(Point{0.53, 0.0}), std::domain_error);
  const auto ball = make_builtin("ball", 16);
  CHECK_THROWS_AS(ball->dist_to_boundary(CellIndex(0)), std::domain_error);
}

TEST_CASE("point distance agrees with brute force over exterior boxes") {
  const auto g = make_builtin("l-shape", 16);
  Rng rng(3);
  int checked = 0;
  while (checked < 200) {
    const Point x{rng.uniform(), rng.uniform()};
    const auto cell = g->cell_containing(x);
    if (!cell || !g->interior(*cell)) continue;
    double best = INFINITY;
    for (const Coord& e : exterior_cells(*g)) {
      double d2 = 0.0;
      for (int a = 0; a < 2; ++a) {
        const double lo = e[a] * g->spacing();
        const double gap = std::max({lo - x[a], x[a] - lo - g->spacing(), 0.0});
        d2 += gap * gap;
      }
      best = std::min(best, d2);
    }
    CHECK(g->dist_to_boundary(x) == doctest::Approx(std::sqrt(best)).epsilon(1e-14));
    ++checked;
  }
}

TEST_CASE("distance is monotone under domain inclusion") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::uint8_t> big(256), small(256);
    for (std::size_t i = 0; i < big.size(); ++i) {
      big[i] = rng.uniform() < 0.8;
      small[i] = big[i] && rng.uniform() < 0.8;
    }
    big[100] = small[100] = 1;
    const auto g1 = make_from_mask(2, 16, small);
    const auto g2 = make_from_mask(2, 16, big);
    for (CellIndex c : g1->interior_cells()) CHECK(g1->dist_to_boundary(c) <= g2->dist_to_boundary(c));
  }
}

TEST_CASE("Whitney decomposition equals the enumeration oracle") {
  for (const auto& name : builtin_shapes()) {
    for (int n : {8, 16, 32}) {
      const auto g = make_builtin(name, grid_for(name, 4 * n, n));
      const auto w = whitney_decompose(*g);
      const auto oracle = brute_whitney(*g);
      std::set<std::tuple<int, int, int>> got;
      for (const auto& q : w.cubes) got.insert({q.level, q.index[0], q.index[1]});
      INFO(name, " N=", g->cells_per_side());
      CHECK(got == oracle.cubes);
      CHECK(std::set<CellIndex>(w.residual.begin(), w.residual.end()) == oracle.residual);
    }
  }
}

TEST_CASE("Whitney invariants hold exactly") {
  for (const auto& name : builtin_shapes()) {
    const auto g = make_builtin(name, grid_for(name, 256, 64));
    const auto w = whitney_decompose(*g);
    std::vector<int> hits(g->cell_count(), 0);
    std::size_t volume = 0;
    for (std::size_t i = 0; i < w.cubes.size(); ++i) {
      const auto& q = w.cubes[i];
      const std::int64_t side2 = std::int64_t(q.side_cells) * q.side_cells;
      const std::int64_t diam2 = g->dim() * side2;
      const std::int64_t gap2 = cube_gap2(q, *g);
      CHECK(diam2 <= gap2);
      CHECK(gap2 <= 16 * diam2);
      for (CellIndex c : cube_cells(q, *g)) {
        CHECK(g->interior(c));
        ++hits[c];
        CHECK(w.owner[c] == std::ptrdiff_t(i));
      }
      volume += cube_cells(q, *g).size();
    }
    for (CellIndex c : w.residual) {
      ++hits[c];
      CHECK(w.owner[c] == -1);
    }
    for (CellIndex c = 0; c < g->cell_count(); ++c) CHECK(hits[c] == (g->interior(c) ? 1 : 0));
    CHECK(volume + w.residual.size() == g->interior_cells().size());
  }
}

TEST_CASE("Whitney example: the unit interval") {
  const int n = 64;
  const auto g = make_builtin("interval", n);
  const auto w = whitney_decompose(*g);
  std::set<std::pair<int, int>> want;  // (first cell, side) of [2^-(k+1), 2^-k] and mirror
  for (int side = n / 4; side >= 1; side /= 2) {
    want.insert({side, side});
    want.insert({n - 2 * side, side});
  }
  std::set<std::pair<int, int>> got;
  for (const auto& q : w.cubes) got.insert({q.first_cell()[0], q.side_cells});
  CHECK(got == want);
  CHECK(w.residual == std::vector<CellIndex>{0, CellIndex(n - 1)});
  for (const auto& q : w.cubes) {
    const auto cq = cube_quantities(q, *g);
    CHECK(cq.diam / cq.dist >= 0.25);
    CHECK(cq.diam / cq.dist <= 1.0);
  }
}

TEST_CASE("Whitney example: the unit square middle") {
  const auto g = make_builtin("square", 64);
  const auto w = whitney_decompose(*g);
  // [1/4,3/4]^2 is tiled by the sixteen level-3 cubes.
  int middle = 0;
  for (const auto& q : w.cubes) {
    const auto cq = cube_quantities(q, *g);
    if (cq.center[0] > 0.25 && cq.center[0] < 0.75 && cq.center[1] > 0.25 && cq.center[1] < 0.75) {
      CHECK(q.level == 3);
      ++middle;
    }
    CHECK(q.level >= 3);
  }
  CHECK(middle == 16);
}

TEST_CASE("cube quantities") {
  const auto square = make_builtin("square", 16);
  const DyadicCube q2{2, {1, 1}, 4};
  const auto cq = cube_quantities(q2, *square);
  CHECK(cq.side == doctest::Approx(0.25));
  CHECK(cq.diam == doctest::Approx(std::sqrt(2.0) / 4));
  CHECK(cq.center[0] == doctest::Approx(0.375));

  const auto interval = make_builtin("interval", 16);
  const DyadicCube q{2, {1, 0}, 4};  // [1/4, 1/2]
  CHECK(cube_quantities(q, *interval).dist == doctest::Approx(0.25));
  const Box half = scaled_box(q, *interval, 0.5);
  CHECK(half.hi[0] - half.lo[0] == doctest::Approx(0.125));
  CHECK(0.5 * (half.hi[0] + half.lo[0]) == doctest::Approx(0.375));
  const Box twice = scaled_box(q2, *square, 2.0);
  CHECK(twice.hi[1] - twice.lo[1] == doctest::Approx(0.5));
}

TEST_CASE("Whitney cubes of side >= 4h are stable under refinement") {
  for (const std::string name : {"interval", "square", "l-shape"}) {
    const int n = builtin_dim(name) == 1 ? 64 : 32;
    const auto coarse = make_builtin(name, n);
    const auto fine = make_builtin(name, 2 * n);
    std::set<std::tuple<int, int, int>> a, b;
    for (const auto& q : whitney_decompose(*coarse).cubes)
      if (q.side_cells >= 4) a.insert({q.level, q.index[0], q.index[1]});
    for (const auto& q : whitney_decompose(*fine).cubes)
      if (q.side_cells >= 8) b.insert({q.level, q.index[0], q.index[1]});
    CHECK(a == b);
  }
}

TEST_CASE("regularity ratio") {
  const auto square = make_builtin("square", 128);
  const double corner = regularity_ratio(*square, 0);
  CHECK(corner == doctest::Approx(0.25).epsilon(0.1));
  CHECK(corner > 0.0);
  CHECK(corner <= 1.0);

  // Boundary points of a ball see roughly a half-space at small radii.
  const auto ball = make_builtin("ball", 128);
  CHECK(regularity_ratio(*ball, 32, 1, 0.45 / 8) >= 0.5 - 0.1);

  // The outward cusp loses mass at its tip as h shrinks.
  double previous = 1.0;
  for (int n : {32, 64, 128, 256}) {
    const double r = regularity_ratio(*make_builtin("cusp", n), 0);
    CHECK(r < previous);
    previous = r;
  }
  CHECK(previous < 0.05);

  // Full cell-count oracle at one corner centre and one radius.
  const auto g = make_builtin("l-shape", 32);
  int inside = 0, total = 0;
  const int k = 10;
  for (int dy = -k; dy <= k; ++dy)
    for (int dx = -k; dx <= k; ++dx) {
      if (dx * dx + dy * dy > k * k) continue;
      ++total;
      const Coord c{dx, dy};
      if (g->in_window(c) && g->interior(g->cell(c))) ++inside;
    }
  CHECK(regularity_ratio(*g, 0) <= double(inside) / total);
}
