#ifndef FRACMAX_H
#define FRACMAX_H

#include <stddef.h>
#include <stdint.h>

#if defined(FRACMAX_BUILDING_LIBRARY)
#define FRACMAX_API __attribute__((visibility("default")))
#else
#define FRACMAX_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fracmax_status {
  FRACMAX_OK = 0,
  FRACMAX_ERR_INVALID_ARGUMENT = 1,
  FRACMAX_ERR_DOMAIN = 2,
  FRACMAX_ERR_TOO_LARGE = 3,
  FRACMAX_ERR_OUT_OF_MEMORY = 4,
  FRACMAX_ERR_INTERNAL = 5
} fracmax_status;

typedef struct fracmax_domain fracmax_domain;
typedef struct fracmax_function fracmax_function;
typedef struct fracmax_whitney fracmax_whitney;
typedef struct fracmax_domination fracmax_domination;
typedef struct fracmax_hardy_report fracmax_hardy_report;

FRACMAX_API const char* fracmax_version(void);
/* Message of the last failed call on this thread ("" if none). */
FRACMAX_API const char* fracmax_last_error(void);
/* 0 = hardware concurrency. */
FRACMAX_API fracmax_status fracmax_set_threads(unsigned threads);

/* ---- domains ---------------------------------------------------------- */

/* Builtin shape on the unit window; beta and width are the cusp exponent
   and corridor width (ignored by other shapes). */
FRACMAX_API fracmax_status fracmax_domain_builtin(const char* name, int cells_per_side, double beta,
                                                  double width, fracmax_domain** out);
/* mask has cells_per_side^dim entries, row-major, nonzero = interior. */
FRACMAX_API fracmax_status fracmax_domain_from_mask(int dim, int cells_per_side, const unsigned char* mask,
                                                    fracmax_domain** out);
FRACMAX_API void fracmax_domain_free(fracmax_domain* d);
/* Dimension of a builtin shape name. */
FRACMAX_API fracmax_status fracmax_builtin_dim(const char* name, int* out);

typedef struct fracmax_domain_info {
  int dim;
  int cells_per_side;
  double spacing;
  size_t cell_count;
  size_t interior_count;
} fracmax_domain_info;

FRACMAX_API fracmax_status fracmax_domain_get_info(const fracmax_domain* d, fracmax_domain_info* out);
FRACMAX_API fracmax_status fracmax_domain_is_interior(const fracmax_domain* d, size_t cell, int* out);
FRACMAX_API fracmax_status fracmax_dist_to_boundary(const fracmax_domain* d, size_t cell, double* out);
FRACMAX_API fracmax_status fracmax_regularity_ratio(const fracmax_domain* d, int samples, uint64_t seed,
                                                    double r_max, double* out);

/* ---- grid functions --------------------------------------------------- */

/* values has cell_count entries; entries off the domain are ignored. */
FRACMAX_API fracmax_status fracmax_function_from_values(const fracmax_domain* d, const double* values,
                                                        size_t count, fracmax_function** out);
/* kind: bump, indicator, linear, sinusoid, mollified, random-smooth. */
FRACMAX_API fracmax_status fracmax_function_builtin(const fracmax_domain* d, const char* kind, uint64_t seed,
                                                    fracmax_function** out);
FRACMAX_API void fracmax_function_free(fracmax_function* f);
FRACMAX_API fracmax_status fracmax_function_values(const fracmax_function* f, double* out, size_t count);
FRACMAX_API fracmax_status fracmax_local_maximal(const fracmax_function* f, fracmax_function** out);

/* ---- Whitney cubes ---------------------------------------------------- */

typedef struct fracmax_cube_info {
  int level;
  int index[2];
  int side_cells;
  double side;
  double diam;
  double dist;
  double center[2];
} fracmax_cube_info;

FRACMAX_API fracmax_status fracmax_whitney_decompose(const fracmax_domain* d, fracmax_whitney** out);
FRACMAX_API void fracmax_whitney_free(fracmax_whitney* w);
FRACMAX_API fracmax_status fracmax_whitney_counts(const fracmax_whitney* w, size_t* cubes, size_t* residual);
FRACMAX_API fracmax_status fracmax_whitney_cube(const fracmax_whitney* w, size_t i, fracmax_cube_info* out);
FRACMAX_API fracmax_status fracmax_harnack_constant(int dim, double* out);
/* u must live on the domain the decomposition was built from. */
FRACMAX_API fracmax_status fracmax_harnack_ratio(const fracmax_function* u, const fracmax_whitney* w, size_t cube,
                                                 double* out);

/* ---- seminorm and domination ------------------------------------------ */

FRACMAX_API fracmax_status fracmax_seminorm(const fracmax_function* f, double s, double p, double* out);
FRACMAX_API fracmax_status fracmax_hardy_lhs(const fracmax_function* f, double s, double p, double* out);
FRACMAX_API fracmax_status fracmax_boundedness_ratio(const fracmax_function* f, double s, double p, double* out);

typedef struct fracmax_domination_summary {
  double max_ratio;
  size_t arg_x;
  size_t arg_y;
  int finite;
  size_t pairs;
  size_t identity_violations;
  double bucket_width;
  size_t buckets;
} fracmax_domination_summary;

/* dyadic_radii != 0 restricts the directional maximal radii to 0,1,2,4,... */
FRACMAX_API fracmax_status fracmax_domination_check(const fracmax_function* f, double s, double p, int dyadic_radii,
                                                    double bucket_width, fracmax_domination** out);
FRACMAX_API void fracmax_domination_free(fracmax_domination* r);
FRACMAX_API fracmax_status fracmax_domination_get_summary(const fracmax_domination* r,
                                                          fracmax_domination_summary* out);
/* counts receives `buckets` entries. */
FRACMAX_API fracmax_status fracmax_domination_histogram(const fracmax_domination* r, size_t* counts, size_t n);

/* ---- capacity --------------------------------------------------------- */

typedef struct fracmax_solver_options {
  size_t max_iterations;
  double tolerance;
  size_t window;
} fracmax_solver_options;

typedef struct fracmax_capacity_summary {
  double value;
  size_t iterations;
  double residual;
  int converged;
  int subcritical;
} fracmax_capacity_summary;

FRACMAX_API void fracmax_solver_defaults(fracmax_solver_options* out);
/* opts may be NULL; minimizer may be NULL or receive cell_count values. */
FRACMAX_API fracmax_status fracmax_capacity(const fracmax_domain* d, const size_t* cells, size_t n, double s,
                                            double p, const fracmax_solver_options* opts,
                                            fracmax_capacity_summary* out, double* minimizer);
FRACMAX_API fracmax_status fracmax_capacity_oracle(const fracmax_domain* d, const size_t* cells, size_t n, double s,
                                                   double p, double* out);
FRACMAX_API fracmax_status fracmax_mazya_ratio(const fracmax_domain* d, const size_t* cells, size_t n, double s,
                                               double p, const fracmax_solver_options* opts, double* out);

/* ---- Hardy testing ---------------------------------------------------- */

typedef struct fracmax_hardy_options {
  size_t family_budget;
  uint64_t seed;
  int corpus_size;
  int min_side_cells;
  fracmax_solver_options solver;
} fracmax_hardy_options;

typedef struct fracmax_hardy_summary {
  double max_c;
  double max_ratio;
  double hardy_lower_bound;
  size_t cubes;
  size_t skipped_small;
  size_t families;
  size_t unconverged;
  size_t residual_cells;
  int min_side_cells;
} fracmax_hardy_summary;

typedef struct fracmax_cube_record {
  size_t cube_id;
  int level;
  int index[2];
  int side_cells;
  double side_power;
  double cap;
  double c;
  int converged;
} fracmax_cube_record;

typedef struct fracmax_family_record {
  size_t family_id;
  size_t size;
  double sum_cap;
  double cap_union;
  double ratio;
  int converged;
} fracmax_family_record;

typedef enum fracmax_hardy_mode {
  FRACMAX_HARDY_TESTING = 0,
  FRACMAX_HARDY_QUASI = 1,
  FRACMAX_HARDY_CONDITION_B = 2
} fracmax_hardy_mode;

FRACMAX_API void fracmax_hardy_defaults(fracmax_hardy_options* out);
/* TESTING fills cube records, QUASI family records, CONDITION_B both plus
   the Hardy lower bound.  opts may be NULL. */
FRACMAX_API fracmax_status fracmax_hardy_run(const fracmax_domain* d, double s, double p, fracmax_hardy_mode mode,
                                             const fracmax_hardy_options* opts, fracmax_hardy_report** out);
FRACMAX_API void fracmax_hardy_free(fracmax_hardy_report* r);
FRACMAX_API fracmax_status fracmax_hardy_get_summary(const fracmax_hardy_report* r, fracmax_hardy_summary* out);
FRACMAX_API fracmax_status fracmax_hardy_cube(const fracmax_hardy_report* r, size_t i, fracmax_cube_record* out);
FRACMAX_API fracmax_status fracmax_hardy_family(const fracmax_hardy_report* r, size_t i, fracmax_family_record* out);
FRACMAX_API size_t fracmax_hardy_cube_count(const fracmax_hardy_report* r);
FRACMAX_API size_t fracmax_hardy_family_count(const fracmax_hardy_report* r);
/* Bump-corpus Hardy lower bound on its own. */
FRACMAX_API fracmax_status fracmax_hardy_constant(const fracmax_domain* d, double s, double p, int corpus_size,
                                                  uint64_t seed, double* out);

#ifdef __cplusplus
}
#endif

#endif
