#include "fracmax/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fracmax/corpus.hpp"
#include "fracmax/random.hpp"
#include "fracmax/seminorm.hpp"

namespace fracmax {

CapacityCache::Entry CapacityCache::get(std::vector<CellIndex> cells) {
  std::sort(cells.begin(), cells.end());
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(cells); it != cache_.end()) return it->second;
  }
  const CapacityResult r = capacity(CompactSet(domain_, cells), params_, opts_);
  const Entry e{r.value, r.converged, r.iterations};
  std::lock_guard lock(mutex_);
  return cache_.emplace(std::move(cells), e).first->second;
}

namespace {

bool eligible(const DyadicCube& q, int min_side_cells) { return q.side_cells >= min_side_cells; }

std::vector<CellIndex> union_cells(const GridDomain& g, const WhitneyDecomposition& w, const CubeFamily& e) {
  std::vector<CellIndex> cells;
  for (std::size_t id : e) {
    const auto part = cube_cells(w.cubes.at(id), g);
    cells.insert(cells.end(), part.begin(), part.end());
  }
  return cells;
}

bool touching(const DyadicCube& a, const DyadicCube& b, int dim) {
  for (int axis = 0; axis < dim; ++axis) {
    const int a0 = a.first_cell()[axis], a1 = a0 + a.side_cells;
    const int b0 = b.first_cell()[axis], b1 = b0 + b.side_cells;
    if (a1 < b0 || b1 < a0) return false;
  }
  return true;
}

}  // namespace

TestingReport testing_condition(const DomainPtr& g, const WhitneyDecomposition& w, const FracParams& params,
                                CapacityCache& cache, int min_side_cells) {
  params.require_subcritical(g->dim());
  TestingReport report;
  report.min_side_cells = min_side_cells;
  const double exponent = g->dim() - params.sp();
  for (std::size_t id = 0; id < w.cubes.size(); ++id) {
    const DyadicCube& q = w.cubes[id];
    if (!eligible(q, min_side_cells)) {
      ++report.skipped_small;
      continue;
    }
    const auto entry = cache.get(cube_cells(q, *g));
    const double side_power = std::pow(q.side_cells * g->spacing(), exponent);
    report.records.push_back({id, q, side_power, entry.value, side_power / entry.value, entry.converged});
    if (entry.converged) report.max_c = std::max(report.max_c, side_power / entry.value);
    else ++report.unconverged;
  }
  return report;
}

TestingReport testing_condition(const DomainPtr& g, const FracParams& params, const SolverOptions& opts,
                                int min_side_cells) {
  params.require_subcritical(g->dim());
  CapacityCache cache(g, params, opts);
  return testing_condition(g, whitney_decompose(*g), params, cache, min_side_cells);
}

QuasiadditivityReport quasiadditivity(const DomainPtr& g, const WhitneyDecomposition& w,
                                      const std::vector<CubeFamily>& families, CapacityCache& cache) {
  QuasiadditivityReport report;
  for (std::size_t fid = 0; fid < families.size(); ++fid) {
    const CubeFamily& e = families[fid];
    if (e.empty()) throw std::invalid_argument("cube families must be non-empty");
    double sum = 0.0;
    bool converged = true;
    for (std::size_t id : e) {
      const auto entry = cache.get(cube_cells(w.cubes.at(id), *g));
      sum += entry.value;
      converged = converged && entry.converged;
    }
    const auto whole = cache.get(union_cells(*g, w, e));
    converged = converged && whole.converged;
    const double ratio = sum / whole.value;
    report.records.push_back({fid, e.size(), sum, whole.value, ratio, converged});
    if (converged) report.max_ratio = std::max(report.max_ratio, ratio);
    else ++report.unconverged;
  }
  return report;
}

std::vector<CubeFamily> sample_families(const GridDomain& g, const WhitneyDecomposition& w, std::size_t budget,
                                        std::uint64_t seed, int min_side_cells) {
  std::vector<std::size_t> pool;
  for (std::size_t id = 0; id < w.cubes.size(); ++id)
    if (eligible(w.cubes[id], min_side_cells)) pool.push_back(id);

  std::vector<CubeFamily> out;
  for (std::size_t id : pool) out.push_back({id});
  std::set<CubeFamily> seen;
  std::size_t extra = 0;
  auto add = [&](CubeFamily e) {
    if (extra >= budget || e.size() < 2) return;
    std::sort(e.begin(), e.end());
    if (!seen.insert(e).second) return;
    out.push_back(std::move(e));
    ++extra;
  };

  // Chains from the centroid of G toward each window corner.
  Point centroid{0.0, 0.0};
  for (CellIndex c : g.interior_cells()) {
    centroid[0] += g.center(c)[0];
    centroid[1] += g.center(c)[1];
  }
  centroid[0] /= double(g.interior_cells().size());
  centroid[1] /= double(g.interior_cells().size());
  const int corners = g.dim() == 1 ? 2 : 4;
  for (int k = 0; k < corners; ++k) {
    const Point corner{g.origin()[0] + (k & 1) * g.window_side(),
                       g.origin()[1] + (g.dim() == 2 ? ((k >> 1) & 1) * g.window_side() : 0.0)};
    CubeFamily chain;
    const int steps = 4 * g.cells_per_side();
    for (int t = 0; t <= steps; ++t) {
      const double a = double(t) / steps;
      const Point x{centroid[0] + a * (corner[0] - centroid[0]), centroid[1] + a * (corner[1] - centroid[1])};
      const auto cell = g.cell_containing(x);
      if (!cell || w.owner[*cell] < 0) continue;
      const auto id = static_cast<std::size_t>(w.owner[*cell]);
      if (eligible(w.cubes[id], min_side_cells) && std::find(chain.begin(), chain.end(), id) == chain.end())
        chain.push_back(id);
    }
    add(chain);
  }

  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j)
      if (touching(w.cubes[pool[i]], w.cubes[pool[j]], g.dim())) add({pool[i], pool[j]});

  Rng rng(seed);
  const std::size_t kmax = std::min<std::size_t>(8, pool.size());
  for (std::size_t attempt = 0; kmax >= 2 && extra < budget && attempt < 20 * budget; ++attempt) {
    const std::size_t k = 2 + rng.below(kmax - 1);
    std::vector<std::size_t> left = pool;
    CubeFamily e;
    for (std::size_t m = 0; m < k; ++m) {
      const std::size_t pick = rng.below(left.size());
      e.push_back(left[pick]);
      left.erase(left.begin() + std::ptrdiff_t(pick));
    }
    add(e);
  }
  return out;
}

double hardy_constant_estimate(const std::vector<GridFunction>& corpus, const FracParams& params) {
  double best = 0.0;
  for (const GridFunction& f : corpus) {
    const double denom = seminorm_power(f, params);
    if (denom == 0.0) continue;
    best = std::max(best, hardy_lhs(f, params) / denom);
  }
  return best;
}

ConditionBReport condition_b_report(const DomainPtr& g, const FracParams& params, const ConditionBOptions& opts) {
  params.require_subcritical(g->dim());
  const WhitneyDecomposition w = whitney_decompose(*g);
  CapacityCache cache(g, params, opts.solver);
  ConditionBReport report;
  report.residual_cells = w.residual.size();
  report.testing = testing_condition(g, w, params, cache, opts.min_side_cells);
  const auto families = sample_families(*g, w, opts.family_budget, opts.seed, opts.min_side_cells);
  report.families = families.size();
  report.quasi = quasiadditivity(g, w, families, cache);
  report.hardy_lower_bound = hardy_constant_estimate(bump_corpus(g, opts.corpus_size, opts.seed), params);
  return report;
}

}  // namespace fracmax
