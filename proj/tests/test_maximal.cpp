#include <doctest.h>

#include <cmath>

#include "fracmax/maximal.hpp"
#include "fracmax/pair_field.hpp"
#include "fracmax/random.hpp"

using namespace fracmax;

namespace {

GridFunction random_function(const DomainPtr& d, Rng& rng, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(d->cell_count());
  for (double& x : v) x = rng.uniform(lo, hi);
  return GridFunction(d, v);
}

// Largest cell average of |f| over balls that fit strictly inside G.
double brute_maximal(const GridFunction& f, CellIndex x) {
  const GridDomain& g = f.domain();
  const Coord c = g.coords(x);
  const double dist = g.dist_to_boundary(x);
  double best = std::abs(f[x]);
  for (int k = 1; k * g.spacing() < dist; ++k) {
    double total = 0.0;
    int count = 0;
    const int reach = g.dim() == 1 ? 0 : k;
    for (int dy = -reach; dy <= reach; ++dy)
      for (int dx = -k; dx <= k; ++dx) {
        if (dx * dx + dy * dy > k * k) continue;
        const Coord y{c[0] + dx, c[1] + dy};
        REQUIRE(g.in_window(y));
        REQUIRE(g.interior(g.cell(y)));
        total += std::abs(f[g.cell(y)]);
        ++count;
      }
    best = std::max(best, total / count);
  }
  return best;
}

PairField random_pair_field(const DomainPtr& d, Rng& rng) {
  PairField f(d);
  for (CellIndex a : d->interior_cells())
    for (CellIndex b : d->interior_cells()) f.at(a, b) = rng.uniform(-1.0, 1.0);
  return f;
}

}  // namespace

TEST_CASE("local maximal matches direct ball enumeration") {
  Rng rng(1);
  for (const std::string name : {"interval", "punctured-interval", "square", "annulus", "cusp", "corridor"}) {
    const auto g = make_builtin(name, builtin_dim(name) == 1 ? 64 : 32);
    const GridFunction f = random_function(g, rng);
    const GridFunction m = local_maximal(f);
    for (CellIndex c : g->interior_cells()) CHECK(m[c] == doctest::Approx(brute_maximal(f, c)).epsilon(1e-13));
    for (CellIndex c = 0; c < g->cell_count(); ++c)
      if (!g->interior(c)) CHECK(m[c] == 0.0);
  }
}

TEST_CASE("local maximal examples") {
  const auto g = make_builtin("interval", 64);
  const GridFunction constant(g, std::vector<double>(64, -2.5));
  for (CellIndex c : g->interior_cells()) CHECK(local_maximal(constant)[c] == 2.5);

  std::vector<double> v(64, 0.0);
  for (CellIndex c = 0; c < 64; ++c) v[c] = g->center(c)[0] < 0.5 ? 1.0 : 0.0;
  const GridFunction chi(g, v);
  const GridFunction m = local_maximal(chi);
  CHECK(m[*g->cell_containing({0.75, 0.0})] == 0.0);

  // Nearest cells to x = 1/2: on the left the value 1 itself, on the right
  // the best centred average k/(2k+1), within h of 1/2.
  const CellIndex right = *g->cell_containing({0.5, 0.0});
  CHECK(m[right - 1] == 1.0);
  CHECK(m[right] == doctest::Approx(brute_maximal(chi, right)).epsilon(1e-15));
  CHECK(std::abs(m[right] - 0.5) <= g->spacing());
}

TEST_CASE("local maximal unit properties") {
  Rng rng(2);
  for (const std::string name : {"interval", "l-shape", "ball"}) {
    const auto g = make_builtin(name, builtin_dim(name) == 1 ? 128 : 32);
    for (int trial = 0; trial < 10; ++trial) {
      const GridFunction f = random_function(g, rng);
      const GridFunction h = random_function(g, rng, -3.0, 0.5);
      const GridFunction mf = local_maximal(f);
      const GridFunction mh = local_maximal(h);
      const GridFunction mfh = local_maximal(sum(f, h));
      for (CellIndex c : g->interior_cells()) {
        CHECK(mf[c] >= std::abs(f[c]));
        CHECK(mfh[c] <= (mf[c] + mh[c]) * (1.0 + 1e-14));
      }
      for (double scale : {-2.0, 0.5, 4.0}) {
        const GridFunction ms = local_maximal(scaled(f, scale));
        for (CellIndex c : g->interior_cells()) CHECK(ms[c] == std::abs(scale) * mf[c]);
      }
      const GridFunction m3 = local_maximal(scaled(f, -3.7));
      for (CellIndex c : g->interior_cells()) CHECK(m3[c] == doctest::Approx(3.7 * mf[c]).epsilon(1e-14));
    }
  }
}

TEST_CASE("shrinking the domain never increases the maximal function") {
  Rng rng(5);
  const auto big = make_builtin("square", 32);
  std::vector<std::uint8_t> mask(big->mask().begin(), big->mask().end());
  for (auto& m : mask) m = m && rng.uniform() < 0.9;
  mask[16 * 32 + 16] = 1;
  const auto small = make_from_mask(2, 32, mask);
  const GridFunction f = random_function(big, rng);
  const GridFunction fs(small, std::vector<double>(f.values().begin(), f.values().end()));
  const GridFunction mb = local_maximal(f), ms = local_maximal(fs);
  for (CellIndex c : small->interior_cells()) CHECK(ms[c] <= mb[c] * (1.0 + 1e-14));
}

TEST_CASE("directional maximal sweeps match direct evaluation") {
  Rng rng(3);
  for (const std::string name : {"interval", "punctured-interval", "l-shape", "annulus"}) {
    const auto g = make_builtin(name, builtin_dim(name) == 1 ? 16 : 8);
    const PairField f = random_pair_field(g, rng);
    for (RadiusSet radii : {RadiusSet::All, RadiusSet::Dyadic}) {
      for (auto [i, j] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}}) {
        const PairField m = directional_maximal(f, i, j, radii);
        const PairField lazy = directional_maximal(f, i, j, radii, EvalMode::Streaming);
        for (CellIndex a = 0; a < g->cell_count(); ++a)
          for (CellIndex b = 0; b < g->cell_count(); ++b) {
            const double want = directional_maximal_at(f, i, j, a, b, radii);
            REQUIRE(m(a, b) == doctest::Approx(want).epsilon(1e-13));
            REQUIRE(lazy(a, b) == want);
            REQUIRE(m(a, b) >= std::abs(f(a, b)));
          }
      }
    }
  }
}

TEST_CASE("directional maximal examples") {
  const auto g = make_builtin("l-shape", 8);
  Rng rng(4);
  const PairField f = random_pair_field(g, rng);
  const PairField m00 = directional_maximal(f, 0, 0);
  for (CellIndex a = 0; a < g->cell_count(); ++a)
    for (CellIndex b = 0; b < g->cell_count(); ++b) CHECK(m00(a, b) == std::abs(f(a, b)));

  PairField ones(g);
  for (CellIndex a : g->interior_cells())
    for (CellIndex b : g->interior_cells()) ones.at(a, b) = 1.0;
  const PairField m11 = directional_maximal(ones, 1, 1);
  for (CellIndex a = 0; a < g->cell_count(); ++a)
    for (CellIndex b = 0; b < g->cell_count(); ++b) {
      CHECK(m11(a, b) <= 1.0);
      if (g->interior(a) && g->interior(b)) CHECK(m11(a, b) == 1.0);
    }

  // A point mass spreads over the x-slice as 1 / |smallest ball reaching it|.
  const auto line = make_builtin("interval", 32);
  PairField delta(line);
  const CellIndex a0 = 9, b0 = 20;
  delta.at(a0, b0) = 1.0;
  const PairField m10 = directional_maximal(delta, 1, 0);
  for (CellIndex x = 0; x < 32; ++x) {
    const int k = std::abs(int(x) - int(a0));
    CHECK(m10(x, b0) == doctest::Approx(1.0 / (2 * k + 1)));
    CHECK(m10(x, (b0 + 1) % 32) == 0.0);
  }
}

TEST_CASE("window radius and ladders") {
  CHECK(window_radius(*make_builtin("interval", 16)) == 15);
  CHECK(window_radius(*make_builtin("square", 16)) == 22);  // ceil(15 sqrt 2)
  CHECK(radius_ladder(10, RadiusSet::Dyadic) == std::vector<int>{0, 1, 2, 4, 8, 10});
  CHECK(radius_ladder(3, RadiusSet::All) == std::vector<int>{0, 1, 2, 3});
  const auto g = make_builtin("interval", 8);
  CHECK_THROWS_AS(directional_maximal(PairField(g), 2, 0), std::invalid_argument);
}

TEST_CASE("Harnack check") {
  CHECK(harnack_constant(1) == doctest::Approx(3.2));
  CHECK(harnack_constant(2) == doctest::Approx(128.0 * M_PI / 25.0));
  Rng rng(6);
  for (const auto& name : builtin_shapes()) {
    const auto g = make_builtin(name, builtin_dim(name) == 1 ? 128 : 32);
    const auto w = whitney_decompose(*g);
    const GridFunction one = indicator_of_domain(g);
    const GridFunction zero(g);
    for (const auto& q : w.cubes) {
      CHECK(harnack_ratio(one, w, q) == doctest::Approx(1.0));
      CHECK(harnack_ratio(zero, w, q) == 1.0);
    }
    for (int trial = 0; trial < 5; ++trial) {
      const GridFunction u = random_function(g, rng, 0.0, 1.0);
      const GridFunction mu = local_maximal(u);
      for (const auto& q : w.cubes) CHECK(harnack_ratio(u, mu, w, q) <= harnack_constant(g->dim()) + 0.05);
    }
  }
}

TEST_CASE("Harnack check edge cases") {
  const auto g = make_builtin("interval", 64);
  const auto w = whitney_decompose(*g);
  const DyadicCube q = w.cubes.front();  // [1/4, 1/2]
  std::vector<double> v(64, 0.0);
  v[30] = 1.0;  // in Q, outside the half cube
  CHECK(harnack_ratio(GridFunction(g, v), w, q) == 0.0);
  v[30] = 0.0;
  v[63] = 1.0;  // out of reach of every ball centred in Q: 0/0
  CHECK(harnack_ratio(GridFunction(g, v), w, q) == 1.0);
  v[63] = -1.0;
  CHECK_THROWS_AS(harnack_ratio(GridFunction(g, v), w, q), std::domain_error);
  CHECK_THROWS_AS(harnack_ratio(indicator_of_domain(g), w, DyadicCube{1, {0, 0}, 32}), std::domain_error);
}

TEST_CASE("box averages are exact for cut cells") {
  const auto g = make_builtin("interval", 4);
  const GridFunction u(g, {1.0, 2.0, 3.0, 4.0});
  // [0.125, 0.625]: half of cell 0, cell 1, half of cell 2.
  CHECK(box_average(u, Box{{0.125, 0.0}, {0.625, 0.0}}) == doctest::Approx((0.5 * 1 + 2 + 0.5 * 3) / 2.0));
}
