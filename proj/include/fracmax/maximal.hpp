#pragma once

#include "fracmax/geometry.hpp"
#include "fracmax/grid_function.hpp"

namespace fracmax {

/// Local Hardy-Littlewood maximal function M_G f.
///
/// At an interior cell x the value is the largest cell average of |f| over
/// the discrete balls B(x, kh) = {y : |centre(y) - centre(x)| <= kh} with
/// k = 0, 1, ... and kh < dist(x, boundary).  Such balls never leave G.
/// k = 0 is the single cell, i.e. the value |f(x)|.
GridFunction local_maximal(const GridFunction& f);

/// |B(0, (4/5) diam Q)| / |Q/2|, the bound for harnack_ratio.
/// 16/5 in 1D, 128*pi/25 in 2D.
double harnack_constant(int dim);

/// Average of u over the half cube Q/2 divided by min over Q of M_G u.
/// u is treated as piecewise constant on cells, so the average over Q/2 is
/// exact even when Q/2 cuts cells.  0/0 is reported as 1.
/// Throws std::domain_error if Q is not one of the Whitney cubes or u < 0.
double harnack_ratio(const GridFunction& u, const WhitneyDecomposition& w, const DyadicCube& q);
/// Same, reusing a precomputed maximal function mu = local_maximal(u).
double harnack_ratio(const GridFunction& u, const GridFunction& mu, const WhitneyDecomposition& w,
                     const DyadicCube& q);

/// Exact average of a cellwise constant function over an axis-aligned box.
double box_average(const GridFunction& u, const Box& box);

}  // namespace fracmax
