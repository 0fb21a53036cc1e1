#include "fracmax/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fracmax/maximal.hpp"
#include "fracmax/parallel.hpp"

namespace fracmax {

OffsetKernel::OffsetKernel(const GridDomain& g, double sigma)
    : shift_(g.cells_per_side() - 1), row_shift_(g.dim() == 1 ? 0 : shift_), span_(2 * std::size_t(g.cells_per_side()) - 1) {
  const std::size_t rows = g.dim() == 1 ? 1 : span_;
  table_.assign(span_ * rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < span_; ++c) {
      const double dx = double(c) - shift_;
      const double dy = g.dim() == 1 ? 0.0 : double(r) - shift_;
      const double d2 = dx * dx + dy * dy;
      table_[r * span_ + c] = d2 == 0.0 ? 0.0 : std::pow(d2, -0.5 * sigma);
    }
  }
}

namespace {

inline double abs_pow(double t, double p) { return p == 2.0 ? t * t : std::pow(std::abs(t), p); }

// Per-row partial sums keep the total independent of the thread count.
template <class RowSum>
double ordered_sum(std::size_t rows, RowSum row_sum) {
  std::vector<double> partial(rows, 0.0);
  parallel_for(rows, [&](std::size_t i) { partial[i] = row_sum(i); });
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

}  // namespace

double seminorm_power(const GridFunction& f, const FracParams& params) {
  const GridDomain& g = f.domain();
  const int n = g.dim();
  const double p = params.p();
  const OffsetKernel kernel(g, params.kernel_exponent(n));
  const auto& cells = g.interior_cells();
  std::vector<Coord> xy(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) xy[i] = g.coords(cells[i]);

  const double total = ordered_sum(cells.size(), [&](std::size_t a) {
    double acc = 0.0;
    const double fa = f[cells[a]];
    for (std::size_t b = 0; b < cells.size(); ++b) {
      if (a == b) continue;
      acc += abs_pow(fa - f[cells[b]], p) * kernel(xy[a], xy[b]);
    }
    return acc;
  });
  // h^(2n) * h^-(n+sp)
  return total * std::pow(g.spacing(), n - params.sp());
}

double fractional_seminorm(const GridFunction& f, const FracParams& params) {
  return std::pow(seminorm_power(f, params), 1.0 / params.p());
}

PairField pair_transform(const GridFunction& f, const FracParams& params, EvalMode mode) {
  const DomainPtr& d = f.domain_ptr();
  const double exponent = params.pair_exponent(d->dim());
  const double h = d->spacing();
  auto value = [d, exponent, h](const GridFunction& fn, CellIndex a, CellIndex b) {
    if (a == b || !d->interior(a) || !d->interior(b)) return 0.0;
    const Coord xa = d->coords(a), xb = d->coords(b);
    const double dx = xb[0] - xa[0], dy = xb[1] - xa[1];
    const double dist = h * std::sqrt(dx * dx + dy * dy);
    return std::abs(fn[a] - fn[b]) / std::pow(dist, exponent);
  };
  if (mode == EvalMode::Streaming) {
    return PairField::streaming(d, [fn = f, value](CellIndex a, CellIndex b) { return value(fn, a, b); });
  }
  PairField out(d);
  const auto& cells = d->interior_cells();
  parallel_for(cells.size(), [&](std::size_t i) {
    for (CellIndex b : cells) out.at(cells[i], b) = value(f, cells[i], b);
  });
  return out;
}

double lp_norm_pair_power(const PairField& field, double p) {
  const GridDomain& g = field.domain();
  const std::size_t m = field.side();
  const double total = ordered_sum(m, [&](std::size_t a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < m; ++b) {
      const double v = field(a, b);
      if (v != 0.0) acc += abs_pow(v, p);
    }
    return acc;
  });
  return total * std::pow(g.spacing(), 2.0 * g.dim());
}

double lp_norm_pair(const PairField& field, double p) {
  return std::pow(lp_norm_pair_power(field, p), 1.0 / p);
}

double hardy_lhs(const GridFunction& f, const FracParams& params) {
  const GridDomain& g = f.domain();
  double total = 0.0;
  for (CellIndex c : g.interior_cells()) {
    if (f[c] == 0.0) continue;
    total += abs_pow(f[c], params.p()) * std::pow(g.dist_to_boundary(c), -params.sp());
  }
  return total * std::pow(g.spacing(), g.dim());
}

double maximal_boundedness_ratio(const GridFunction& f, const FracParams& params) {
  const double base = fractional_seminorm(f, params);
  const double image = fractional_seminorm(local_maximal(f), params);
  if (base == 0.0) return image == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return image / base;
}

namespace {

void add_scaled(PairField& acc, const PairField& term, double w) {
  auto dst = acc.data();
  auto src = term.data();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += w * src[k];
}

// acc += w (T + T^T)
void add_symmetrised(PairField& acc, const PairField& term, double w) {
  const std::size_t m = acc.side();
  for (std::size_t a = 0; a < m; ++a) {
    acc.at(a, a) += 2.0 * w * term(a, a);
    for (std::size_t b = a + 1; b < m; ++b) {
      const double v = w * (term(a, b) + term(b, a));
      acc.at(a, b) += v;
      acc.at(b, a) += v;
    }
  }
}

}  // namespace

PairField domination_rhs(const PairField& sf, RadiusSet radii) {
  PairField rhs = directional_maximal(sf, 0, 0);
  {
    const PairField a = directional_maximal(sf, 1, 0, radii);  // M_10 S; M_01 S = A^T
    add_symmetrised(rhs, a, 2.0);
    const PairField b = directional_maximal(sf, 1, 1, radii);  // symmetric
    add_scaled(rhs, b, 2.0);
    add_symmetrised(rhs, directional_maximal(a, 1, 0, radii), 1.0);  // M_10 M_10, M_01 M_01
    add_symmetrised(rhs, directional_maximal(a, 0, 1, radii), 1.0);  // M_01 M_10, M_10 M_01
    add_symmetrised(rhs, directional_maximal(a, 1, 1, radii), 1.0);  // M_11 M_10, M_11 M_01
    add_symmetrised(rhs, directional_maximal(b, 1, 0, radii), 1.0);  // M_10 M_11, M_01 M_11
    add_scaled(rhs, directional_maximal(b, 1, 1, radii), 1.0);        // M_11 M_11
  }
  for (double& v : rhs.data()) v *= 2.0;
  return rhs;
}

PairField domination_rhs_direct(const PairField& sf, RadiusSet radii) {
  PairField rhs(sf.domain_ptr());
  const std::size_t m = rhs.side();
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      const PairField inner = directional_maximal(sf, k, l, radii);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const PairField t = directional_maximal(inner, i, j, radii);
          for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) rhs.at(a, b) += t(a, b) + t(b, a);
        }
      }
    }
  }
  return rhs;
}

DominationReport domination_check(const GridFunction& f, const FracParams& params, RadiusSet radii,
                                  double bucket_width) {
  if (!(bucket_width > 0.0)) throw std::invalid_argument("bucket_width must be positive");
  const GridDomain& g = f.domain();
  const GridFunction mf = local_maximal(f);
  const PairField sf = pair_transform(f, params);
  const PairField smf = pair_transform(mf, params, EvalMode::Streaming);
  const PairField rhs = domination_rhs(sf, radii);

  DominationReport report;
  report.bucket_width = bucket_width;
  const auto& cells = g.interior_cells();
  for (CellIndex a : cells) {
    for (CellIndex b : cells) {
      if (a == b) continue;
      ++report.pairs;
      const double lhs = smf(a, b);
      const double r = rhs(a, b);
      if (r < 2.0 * sf(a, b)) ++report.identity_violations;
      double ratio = 0.0;
      if (r > 0.0) ratio = lhs / r;
      else if (lhs > 0.0) ratio = std::numeric_limits<double>::infinity();
      if (!std::isfinite(ratio)) {
        report.finite = false;
        report.max_ratio = ratio;
        report.arg_x = a;
        report.arg_y = b;
        continue;
      }
      if (ratio > report.max_ratio && report.finite) {
        report.max_ratio = ratio;
        report.arg_x = a;
        report.arg_y = b;
      }
      const auto bucket = static_cast<std::size_t>(ratio / bucket_width);
      if (bucket >= report.histogram.size()) report.histogram.resize(bucket + 1, 0);
      ++report.histogram[bucket];
    }
  }
  return report;
}

}  // namespace fracmax
