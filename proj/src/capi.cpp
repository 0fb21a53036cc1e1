#include "fracmax/fracmax.h"

#include <new>
#include <stdexcept>
#include <string>

#include "fracmax/capacity.hpp"
#include "fracmax/corpus.hpp"
#include "fracmax/hardy.hpp"
#include "fracmax/maximal.hpp"
#include "fracmax/parallel.hpp"
#include "fracmax/seminorm.hpp"

using namespace fracmax;

struct fracmax_domain {
  DomainPtr ptr;
};
struct fracmax_function {
  GridFunction f;
};
struct fracmax_whitney {
  DomainPtr domain;
  WhitneyDecomposition w;
};
struct fracmax_domination {
  DominationReport report;
};
struct fracmax_hardy_report {
  ConditionBReport report;
  fracmax_hardy_mode mode;
};

namespace {

thread_local std::string last_error;

fracmax_status fail(fracmax_status code, const char* what) {
  last_error = what;
  return code;
}

template <class Body>
fracmax_status guarded(Body&& body) {
  try {
    body();
    last_error.clear();
    return FRACMAX_OK;
  } catch (const std::length_error& e) {
    return fail(FRACMAX_ERR_TOO_LARGE, e.what());
  } catch (const std::domain_error& e) {
    return fail(FRACMAX_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(FRACMAX_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(FRACMAX_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FRACMAX_ERR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(FRACMAX_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FRACMAX_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

SolverOptions solver_options(const fracmax_solver_options* opts) {
  SolverOptions o;
  if (opts) {
    o.max_iterations = opts->max_iterations;
    o.tolerance = opts->tolerance;
    o.window = opts->window;
  }
  return o;
}

CompactSet compact_set(const fracmax_domain* d, const size_t* cells, size_t n) {
  require(d != nullptr, "null domain");
  require(n == 0 || cells != nullptr, "null cell list");
  for (size_t i = 0; i < n; ++i)
    if (cells[i] >= d->ptr->cell_count()) throw std::invalid_argument("cell index outside the window");
  return CompactSet(d->ptr, std::vector<CellIndex>(cells, cells + n));
}

}  // namespace

extern "C" {

const char* fracmax_version(void) { return "fracmax 0.1.0"; }

const char* fracmax_last_error(void) { return last_error.c_str(); }

fracmax_status fracmax_set_threads(unsigned threads) {
  return guarded([&] { set_thread_count(threads); });
}

fracmax_status fracmax_domain_builtin(const char* name, int cells_per_side, double beta, double width,
                                      fracmax_domain** out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = new fracmax_domain{make_builtin(name, cells_per_side, ShapeParams{beta, width})};
  });
}

fracmax_status fracmax_domain_from_mask(int dim, int cells_per_side, const unsigned char* mask,
                                        fracmax_domain** out) {
  return guarded([&] {
    require(mask && out, "null argument");
    require(dim == 1 || dim == 2, "dim must be 1 or 2");
    require(cells_per_side > 0, "cells_per_side must be positive");
    const size_t count = dim == 1 ? size_t(cells_per_side) : size_t(cells_per_side) * size_t(cells_per_side);
    *out = new fracmax_domain{make_from_mask(dim, cells_per_side, std::vector<std::uint8_t>(mask, mask + count))};
  });
}

void fracmax_domain_free(fracmax_domain* d) { delete d; }

fracmax_status fracmax_builtin_dim(const char* name, int* out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = builtin_dim(name);
  });
}

fracmax_status fracmax_domain_get_info(const fracmax_domain* d, fracmax_domain_info* out) {
  return guarded([&] {
    require(d && out, "null argument");
    const GridDomain& g = *d->ptr;
    *out = {g.dim(), g.cells_per_side(), g.spacing(), g.cell_count(), g.interior_cells().size()};
  });
}

fracmax_status fracmax_domain_is_interior(const fracmax_domain* d, size_t cell, int* out) {
  return guarded([&] {
    require(d && out, "null argument");
    require(cell < d->ptr->cell_count(), "cell index outside the window");
    *out = d->ptr->interior(cell) ? 1 : 0;
  });
}

fracmax_status fracmax_dist_to_boundary(const fracmax_domain* d, size_t cell, double* out) {
  return guarded([&] {
    require(d && out, "null argument");
    require(cell < d->ptr->cell_count(), "cell index outside the window");
    *out = d->ptr->dist_to_boundary(cell);
  });
}

fracmax_status fracmax_regularity_ratio(const fracmax_domain* d, int samples, uint64_t seed, double r_max,
                                        double* out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = regularity_ratio(*d->ptr, samples, seed, r_max);
  });
}

fracmax_status fracmax_function_from_values(const fracmax_domain* d, const double* values, size_t count,
                                            fracmax_function** out) {
  return guarded([&] {
    require(d && values && out, "null argument");
    *out = new fracmax_function{GridFunction(d->ptr, std::vector<double>(values, values + count))};
  });
}

fracmax_status fracmax_function_builtin(const fracmax_domain* d, const char* kind, uint64_t seed,
                                        fracmax_function** out) {
  return guarded([&] {
    require(d && kind && out, "null argument");
    *out = new fracmax_function{make_function(d->ptr, parse_function_kind(kind), seed)};
  });
}

void fracmax_function_free(fracmax_function* f) { delete f; }

fracmax_status fracmax_function_values(const fracmax_function* f, double* out, size_t count) {
  return guarded([&] {
    require(f && out, "null argument");
    require(count == f->f.values().size(), "count must equal the cell count");
    std::copy(f->f.values().begin(), f->f.values().end(), out);
  });
}

fracmax_status fracmax_local_maximal(const fracmax_function* f, fracmax_function** out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = new fracmax_function{local_maximal(f->f)};
  });
}

fracmax_status fracmax_whitney_decompose(const fracmax_domain* d, fracmax_whitney** out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = new fracmax_whitney{d->ptr, whitney_decompose(*d->ptr)};
  });
}

void fracmax_whitney_free(fracmax_whitney* w) { delete w; }

fracmax_status fracmax_whitney_counts(const fracmax_whitney* w, size_t* cubes, size_t* residual) {
  return guarded([&] {
    require(w != nullptr, "null argument");
    if (cubes) *cubes = w->w.cubes.size();
    if (residual) *residual = w->w.residual.size();
  });
}

fracmax_status fracmax_whitney_cube(const fracmax_whitney* w, size_t i, fracmax_cube_info* out) {
  return guarded([&] {
    require(w && out, "null argument");
    const DyadicCube& q = w->w.cubes.at(i);
    const CubeQuantities cq = cube_quantities(q, *w->domain);
    *out = {q.level, {q.index[0], q.index[1]}, q.side_cells, cq.side, cq.diam, cq.dist, {cq.center[0], cq.center[1]}};
  });
}

fracmax_status fracmax_harnack_constant(int dim, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = harnack_constant(dim);
  });
}

fracmax_status fracmax_harnack_ratio(const fracmax_function* u, const fracmax_whitney* w, size_t cube,
                                     double* out) {
  return guarded([&] {
    require(u && w && out, "null argument");
    require(u->f.domain_ptr() == w->domain, "function and decomposition use different domains");
    *out = harnack_ratio(u->f, w->w, w->w.cubes.at(cube));
  });
}

fracmax_status fracmax_seminorm(const fracmax_function* f, double s, double p, double* out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = fractional_seminorm(f->f, FracParams(s, p));
  });
}

fracmax_status fracmax_hardy_lhs(const fracmax_function* f, double s, double p, double* out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = hardy_lhs(f->f, FracParams(s, p));
  });
}

fracmax_status fracmax_boundedness_ratio(const fracmax_function* f, double s, double p, double* out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = maximal_boundedness_ratio(f->f, FracParams(s, p));
  });
}

fracmax_status fracmax_domination_check(const fracmax_function* f, double s, double p, int dyadic_radii,
                                        double bucket_width, fracmax_domination** out) {
  return guarded([&] {
    require(f && out, "null argument");
    const RadiusSet radii = dyadic_radii ? RadiusSet::Dyadic : RadiusSet::All;
    *out = new fracmax_domination{domination_check(f->f, FracParams(s, p), radii, bucket_width)};
  });
}

void fracmax_domination_free(fracmax_domination* r) { delete r; }

fracmax_status fracmax_domination_get_summary(const fracmax_domination* r, fracmax_domination_summary* out) {
  return guarded([&] {
    require(r && out, "null argument");
    const DominationReport& d = r->report;
    *out = {d.max_ratio, d.arg_x, d.arg_y, d.finite ? 1 : 0, d.pairs, d.identity_violations, d.bucket_width,
            d.histogram.size()};
  });
}

fracmax_status fracmax_domination_histogram(const fracmax_domination* r, size_t* counts, size_t n) {
  return guarded([&] {
    require(r && (counts || n == 0), "null argument");
    require(n == r->report.histogram.size(), "n must equal the bucket count");
    std::copy(r->report.histogram.begin(), r->report.histogram.end(), counts);
  });
}

void fracmax_solver_defaults(fracmax_solver_options* out) {
  if (!out) return;
  const SolverOptions o;
  *out = {o.max_iterations, o.tolerance, o.window};
}

fracmax_status fracmax_capacity(const fracmax_domain* d, const size_t* cells, size_t n, double s, double p,
                                const fracmax_solver_options* opts, fracmax_capacity_summary* out,
                                double* minimizer) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const CompactSet k = compact_set(d, cells, n);
    const CapacityResult r = capacity(k, FracParams(s, p), solver_options(opts));
    *out = {r.value, r.iterations, r.residual, r.converged ? 1 : 0, r.subcritical ? 1 : 0};
    if (minimizer) std::copy(r.minimizer.values().begin(), r.minimizer.values().end(), minimizer);
  });
}

fracmax_status fracmax_capacity_oracle(const fracmax_domain* d, const size_t* cells, size_t n, double s, double p,
                                       double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = capacity_oracle(compact_set(d, cells, n), FracParams(s, p));
  });
}

fracmax_status fracmax_mazya_ratio(const fracmax_domain* d, const size_t* cells, size_t n, double s, double p,
                                   const fracmax_solver_options* opts, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = mazya_ratio(compact_set(d, cells, n), FracParams(s, p), solver_options(opts));
  });
}

void fracmax_hardy_defaults(fracmax_hardy_options* out) {
  if (!out) return;
  const ConditionBOptions o;
  out->family_budget = o.family_budget;
  out->seed = o.seed;
  out->corpus_size = o.corpus_size;
  out->min_side_cells = o.min_side_cells;
  fracmax_solver_defaults(&out->solver);
}

fracmax_status fracmax_hardy_run(const fracmax_domain* d, double s, double p, fracmax_hardy_mode mode,
                                 const fracmax_hardy_options* opts, fracmax_hardy_report** out) {
  return guarded([&] {
    require(d && out, "null argument");
    const FracParams params(s, p);
    ConditionBOptions o;
    if (opts) {
      o.family_budget = opts->family_budget;
      o.seed = opts->seed;
      o.corpus_size = opts->corpus_size;
      o.min_side_cells = opts->min_side_cells;
      o.solver = solver_options(&opts->solver);
    }
    ConditionBReport report;
    if (mode == FRACMAX_HARDY_CONDITION_B) {
      report = condition_b_report(d->ptr, params, o);
    } else if (mode == FRACMAX_HARDY_TESTING || mode == FRACMAX_HARDY_QUASI) {
      params.require_subcritical(d->ptr->dim());
      const WhitneyDecomposition w = whitney_decompose(*d->ptr);
      CapacityCache cache(d->ptr, params, o.solver);
      report.residual_cells = w.residual.size();
      if (mode == FRACMAX_HARDY_TESTING) {
        report.testing = testing_condition(d->ptr, w, params, cache, o.min_side_cells);
      } else {
        const auto families = sample_families(*d->ptr, w, o.family_budget, o.seed, o.min_side_cells);
        report.families = families.size();
        report.quasi = quasiadditivity(d->ptr, w, families, cache);
        report.testing.min_side_cells = o.min_side_cells;
      }
    } else {
      throw std::invalid_argument("unknown hardy mode");
    }
    *out = new fracmax_hardy_report{std::move(report), mode};
  });
}

void fracmax_hardy_free(fracmax_hardy_report* r) { delete r; }

fracmax_status fracmax_hardy_get_summary(const fracmax_hardy_report* r, fracmax_hardy_summary* out) {
  return guarded([&] {
    require(r && out, "null argument");
    const ConditionBReport& b = r->report;
    *out = {b.testing.max_c,
            b.quasi.max_ratio,
            b.hardy_lower_bound,
            b.testing.records.size(),
            b.testing.skipped_small,
            b.families,
            b.testing.unconverged + b.quasi.unconverged,
            b.residual_cells,
            b.testing.min_side_cells};
  });
}

fracmax_status fracmax_hardy_cube(const fracmax_hardy_report* r, size_t i, fracmax_cube_record* out) {
  return guarded([&] {
    require(r && out, "null argument");
    const CubeRecord& c = r->report.testing.records.at(i);
    *out = {c.cube_id, c.cube.level, {c.cube.index[0], c.cube.index[1]}, c.cube.side_cells, c.side_power, c.cap,
            c.c,       c.converged ? 1 : 0};
  });
}

fracmax_status fracmax_hardy_family(const fracmax_hardy_report* r, size_t i, fracmax_family_record* out) {
  return guarded([&] {
    require(r && out, "null argument");
    const FamilyRecord& f = r->report.quasi.records.at(i);
    *out = {f.family_id, f.size, f.sum_cap, f.cap_union, f.ratio, f.converged ? 1 : 0};
  });
}

size_t fracmax_hardy_cube_count(const fracmax_hardy_report* r) { return r ? r->report.testing.records.size() : 0; }

size_t fracmax_hardy_family_count(const fracmax_hardy_report* r) { return r ? r->report.quasi.records.size() : 0; }

fracmax_status fracmax_hardy_constant(const fracmax_domain* d, double s, double p, int corpus_size, uint64_t seed,
                                      double* out) {
  return guarded([&] {
    require(d && out, "null argument");
    require(corpus_size >= 0, "corpus_size must be non-negative");
    *out = hardy_constant_estimate(bump_corpus(d->ptr, corpus_size, seed), FracParams(s, p));
  });
}

}  // extern "C"
