#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "fracmax/capacity.hpp"
#include "fracmax/geometry.hpp"

namespace fracmax {

/// Memoised capacities keyed by the cell set, so that equal sets always
/// produce the identical number.
class CapacityCache {
 public:
  CapacityCache(DomainPtr domain, FracParams params, SolverOptions opts)
      : domain_(std::move(domain)), params_(params), opts_(opts) {}

  struct Entry {
    double value = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
  };
  Entry get(std::vector<CellIndex> cells);
  std::size_t solves() const { return cache_.size(); }

 private:
  DomainPtr domain_;
  FracParams params_;
  SolverOptions opts_;
  std::mutex mutex_;
  std::map<std::vector<CellIndex>, Entry> cache_;
};

struct CubeRecord {
  std::size_t cube_id;  // index into the Whitney decomposition
  DyadicCube cube;
  double side_power;  // l(Q)^(n - sp)
  double cap;
  double c;  // side_power / cap
  bool converged;
};

struct TestingReport {
  std::vector<CubeRecord> records;
  /// Max of c over converged records.
  double max_c = 0.0;
  int min_side_cells = 4;
  std::size_t skipped_small = 0;
  std::size_t unconverged = 0;
};

/// c_Q = l(Q)^(n-sp) / cap(Q, G) for every Whitney cube with at least
/// min_side_cells cells per side.  Requires sp < n.
TestingReport testing_condition(const DomainPtr& g, const WhitneyDecomposition& w, const FracParams& params,
                                CapacityCache& cache, int min_side_cells = 4);
TestingReport testing_condition(const DomainPtr& g, const FracParams& params, const SolverOptions& opts = {},
                                int min_side_cells = 4);

/// A family of Whitney cubes given by indices into the decomposition.
using CubeFamily = std::vector<std::size_t>;

struct FamilyRecord {
  std::size_t family_id;
  std::size_t size;
  double sum_cap;
  double cap_union;
  double ratio;
  bool converged;
};

struct QuasiadditivityReport {
  std::vector<FamilyRecord> records;
  double max_ratio = 0.0;
  std::size_t unconverged = 0;
};

/// Ratio sum_{Q in E} cap(Q) / cap(union E) per family.
QuasiadditivityReport quasiadditivity(const DomainPtr& g, const WhitneyDecomposition& w,
                                      const std::vector<CubeFamily>& families, CapacityCache& cache);

/// Singletons, adjacent pairs, seeded random k-subsets (2 <= k <= 8) and one
/// chain of nested-toward-the-boundary cubes per window corner, using cubes
/// with at least min_side_cells cells per side.  Non-singleton families are
/// capped at `budget`.
std::vector<CubeFamily> sample_families(const GridDomain& g, const WhitneyDecomposition& w, std::size_t budget,
                                        std::uint64_t seed, int min_side_cells = 4);

/// max over the corpus of hardy_lhs(f) / |f|^p; functions with zero seminorm
/// are skipped, an empty maximum is 0.
double hardy_constant_estimate(const std::vector<GridFunction>& corpus, const FracParams& params);

struct ConditionBReport {
  TestingReport testing;
  QuasiadditivityReport quasi;
  double hardy_lower_bound = 0.0;
  std::size_t families = 0;
  std::size_t residual_cells = 0;
};

struct ConditionBOptions {
  std::size_t family_budget = 32;
  std::uint64_t seed = 0;
  int corpus_size = 20;
  int min_side_cells = 4;
  SolverOptions solver;
};

ConditionBReport condition_b_report(const DomainPtr& g, const FracParams& params, const ConditionBOptions& opts = {});

}  // namespace fracmax
