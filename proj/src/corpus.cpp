#include "fracmax/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fracmax/random.hpp"

namespace fracmax {

namespace {

constexpr std::array<FunctionKind, 6> kAllKinds{FunctionKind::Bump,     FunctionKind::Indicator,
                                                FunctionKind::Linear,   FunctionKind::Sinusoid,
                                                FunctionKind::Mollified, FunctionKind::RandomSmooth};

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <class Formula>
GridFunction sample(const DomainPtr& d, Formula formula) {
  std::vector<double> v(d->cell_count(), 0.0);
  for (CellIndex c : d->interior_cells()) v[c] = formula(d->center(c));
  return GridFunction(d, std::move(v));
}

double radius2(const Point& x, const Point& c, int dim) {
  const double dx = x[0] - c[0];
  const double dy = dim == 2 ? x[1] - c[1] : 0.0;
  return dx * dx + dy * dy;
}

Point random_point(const GridDomain& g, Rng& rng) {
  Point p{g.origin()[0] + rng.uniform() * g.window_side(), g.origin()[1]};
  if (g.dim() == 2) p[1] += rng.uniform() * g.window_side();
  return p;
}

// Centre and radius of a ball that stays inside G.
std::pair<Point, double> interior_ball(const GridDomain& g, Rng& rng) {
  const double wanted = g.window_side() / 16.0;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Point p = random_point(g, rng);
    const auto cell = g.cell_containing(p);
    if (!cell || !g.interior(*cell)) continue;
    const double dist = g.dist_to_boundary(p);
    if (dist < wanted) continue;
    return {p, (0.25 + 0.5 * rng.uniform()) * dist};
  }
  CellIndex best = g.interior_cells().front();
  for (CellIndex c : g.interior_cells())
    if (g.boundary_dist2_quarter(c) > g.boundary_dist2_quarter(best)) best = c;
  return {g.center(best), 0.5 * g.dist_to_boundary(best)};
}

}  // namespace

FunctionKind parse_function_kind(const std::string& name) {
  for (FunctionKind k : kAllKinds)
    if (function_kind_name(k) == name) return k;
  throw std::invalid_argument("unknown function kind '" + name + "'");
}

std::string function_kind_name(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::Bump: return "bump";
    case FunctionKind::Indicator: return "indicator";
    case FunctionKind::Linear: return "linear";
    case FunctionKind::Sinusoid: return "sinusoid";
    case FunctionKind::Mollified: return "mollified";
    case FunctionKind::RandomSmooth: return "random-smooth";
  }
  return "?";
}

GridFunction make_function(const DomainPtr& domain, FunctionKind kind, std::uint64_t seed) {
  const GridDomain& g = *domain;
  const int dim = g.dim();
  Rng rng(seed);
  const double amp = rng.uniform(0.5, 2.0);
  switch (kind) {
    case FunctionKind::Bump: {
      const auto [c, r] = interior_ball(g, rng);
      return sample(domain, [=](const Point& x) {
        const double t = radius2(x, c, dim) / (r * r);
        return t < 1.0 ? amp * std::exp(1.0 - 1.0 / (1.0 - t)) : 0.0;
      });
    }
    case FunctionKind::Indicator: {
      const Point c = random_point(g, rng);
      const double r = g.window_side() * rng.uniform(0.1, 0.4);
      return sample(domain, [=](const Point& x) { return radius2(x, c, dim) < r * r ? amp : 0.0; });
    }
    case FunctionKind::Linear: {
      const double a0 = rng.uniform(-1.0, 1.0), a1 = rng.uniform(-1.0, 1.0), b = rng.uniform(-1.0, 1.0);
      return sample(domain, [=](const Point& x) { return amp * (a0 * x[0] + (dim == 2 ? a1 * x[1] : 0.0) + b); });
    }
    case FunctionKind::Sinusoid: {
      const double k0 = 1 + double(rng.below(4)), k1 = 1 + double(rng.below(4));
      const double p0 = rng.uniform(0.0, 2.0 * std::numbers::pi), p1 = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double l = g.window_side();
      return sample(domain, [=](const Point& x) {
        double v = std::sin(std::numbers::pi * k0 * x[0] / l + p0);
        if (dim == 2) v *= std::sin(std::numbers::pi * k1 * x[1] / l + p1);
        return amp * v;
      });
    }
    case FunctionKind::Mollified: {
      Point lo = random_point(g, rng), hi = random_point(g, rng);
      for (int a = 0; a < 2; ++a)
        if (lo[a] > hi[a]) std::swap(lo[a], hi[a]);
      const double ramp = g.window_side() * rng.uniform(0.02, 0.15);
      return sample(domain, [=](const Point& x) {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) {
          const double inside = std::min(x[a] - lo[a], hi[a] - x[a]);
          v *= std::clamp(0.5 + inside / ramp, 0.0, 1.0);
        }
        return amp * v;
      });
    }
    case FunctionKind::RandomSmooth: {
      struct Mode { double k0, k1, phase, weight; };
      std::vector<Mode> modes(6);
      for (Mode& m : modes) {
        m.k0 = double(rng.below(5));
        m.k1 = dim == 2 ? double(rng.below(5)) : 0.0;
        m.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        m.weight = rng.uniform(-1.0, 1.0) / (1.0 + m.k0 * m.k0 + m.k1 * m.k1);
      }
      const double l = g.window_side();
      return sample(domain, [=](const Point& x) {
        double v = 0.0;
        for (const Mode& m : modes)
          v += m.weight * std::cos(2.0 * std::numbers::pi * (m.k0 * x[0] + m.k1 * x[1]) / l + m.phase);
        return amp * v;
      });
    }
  }
  throw std::invalid_argument("unknown function kind");
}

std::vector<GridFunction> standard_corpus(const DomainPtr& domain, int count, std::uint64_t seed) {
  std::vector<GridFunction> out;
  for (int i = 0; i < count; ++i)
    out.push_back(make_function(domain, kAllKinds[std::size_t(i) % kAllKinds.size()], mix(seed + std::uint64_t(i))));
  return out;
}

std::vector<GridFunction> bump_corpus(const DomainPtr& domain, int count, std::uint64_t seed) {
  std::vector<GridFunction> out;
  for (int i = 0; i < count; ++i)
    out.push_back(make_function(domain, FunctionKind::Bump, mix(seed + std::uint64_t(i))));
  return out;
}

}  // namespace fracmax
