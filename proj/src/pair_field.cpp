#include "fracmax/pair_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracmax/lattice.hpp"
#include "fracmax/parallel.hpp"

namespace fracmax {

PairField::PairField(DomainPtr domain)
    : domain_(std::move(domain)), values_(domain_->cell_count() * domain_->cell_count(), 0.0) {}

PairField PairField::streaming(DomainPtr domain, Evaluator eval) {
  PairField f(domain, 0);
  f.eval_ = std::move(eval);
  return f;
}

PairField::PairField(DomainPtr domain, int) : domain_(std::move(domain)) {}

PairField PairField::materialized() const {
  if (is_stored()) return *this;
  PairField out(domain_);
  const std::size_t m = side();
  parallel_for(m, [&](std::size_t a) {
    for (std::size_t b = 0; b < m; ++b) out.values_[a * m + b] = eval_(a, b);
  });
  return out;
}

PairField PairField::transposed() const {
  PairField out(domain_);
  const std::size_t m = side();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) out.values_[b * m + a] = (*this)(a, b);
  return out;
}

int window_radius(const GridDomain& g) {
  const std::int64_t span = g.cells_per_side() - 1;
  if (g.dim() == 1) return static_cast<int>(span);
  const std::int64_t target = 2 * span * span;
  std::int64_t k = isqrt(target);
  if (k * k < target) ++k;
  return static_cast<int>(k);
}

std::vector<int> radius_ladder(int max_radius, RadiusSet set) {
  std::vector<int> ladder{0};
  if (set == RadiusSet::All) {
    for (int k = 1; k <= max_radius; ++k) ladder.push_back(k);
    return ladder;
  }
  for (int k = 1; k < max_radius; k *= 2) ladder.push_back(k);
  if (max_radius > 0) ladder.push_back(max_radius);
  return ladder;
}

namespace {

struct Rect {
  int c0, c1, r0, r1;  // inclusive
};

// Maximal averages of a non-negative image (zero outside the window and
// outside `support`) at every centre of `centres`.
class SliceMaximal {
 public:
  SliceMaximal(int cols, int rows, int dim, std::vector<int> ladder)
      : cols_(cols), rows_(rows), dim_(dim), ladder_(std::move(ladder)),
        balls_(dim, ladder_.back()) {}

  void run(const std::vector<double>& img, const Rect& centres, std::vector<double>& out,
           std::vector<double>& prefix) const {
    Rect support{cols_, -1, rows_, -1};
    for (int r = centres.r0; r <= centres.r1; ++r)
      for (int c = centres.c0; c <= centres.c1; ++c)
        if (img[std::size_t(r) * cols_ + c] != 0.0) {
          support.c0 = std::min(support.c0, c);
          support.c1 = std::max(support.c1, c);
          support.r0 = std::min(support.r0, r);
          support.r1 = std::max(support.r1, r);
        }
    if (support.c1 < 0) {
      for (int r = centres.r0; r <= centres.r1; ++r)
        for (int c = centres.c0; c <= centres.c1; ++c) out[std::size_t(r) * cols_ + c] = 0.0;
      return;
    }
    prefix.assign(std::size_t(rows_) * (cols_ + 1), 0.0);
    for (int r = support.r0; r <= support.r1; ++r) {
      double* p = &prefix[std::size_t(r) * (cols_ + 1)];
      const double* src = &img[std::size_t(r) * cols_];
      for (int c = 0; c < cols_; ++c) p[c + 1] = p[c] + src[c];
    }

    for (int r = centres.r0; r <= centres.r1; ++r) {
      for (int c = centres.c0; c <= centres.c1; ++c) {
        double best = img[std::size_t(r) * cols_ + c];
        // Farthest support corner decides when a ball swallows the support.
        const std::int64_t fx = std::max(std::abs(c - support.c0), std::abs(c - support.c1));
        const std::int64_t fy = std::max(std::abs(r - support.r0), std::abs(r - support.r1));
        const std::int64_t cover2 = fx * fx + fy * fy;
        for (std::size_t li = 1; li < ladder_.size(); ++li) {
          const int k = ladder_[li];
          const int dy_lo = std::max(-k, support.r0 - r);
          const int dy_hi = std::min(k, support.r1 - r);
          double total = 0.0;
          for (int dy = dy_lo; dy <= dy_hi; ++dy) {
            const int w = balls_.half_width(k, dy);
            const int lo = std::max(c - w, support.c0);
            const int hi = std::min(c + w, support.c1);
            if (lo > hi) continue;
            const double* p = &prefix[std::size_t(r + dy) * (cols_ + 1)];
            total += p[hi + 1] - p[lo];
          }
          best = std::max(best, total / static_cast<double>(balls_.count(k)));
          if (std::int64_t(k) * k >= cover2) break;
        }
        out[std::size_t(r) * cols_ + c] = best;
      }
    }
  }

 private:
  int cols_;
  int rows_;
  int dim_;
  std::vector<int> ladder_;
  BallTable balls_;
};

}  // namespace

PairField directional_maximal(const PairField& f, int i, int j, RadiusSet radii, EvalMode mode) {
  if ((i != 0 && i != 1) || (j != 0 && j != 1)) throw std::invalid_argument("i and j must be 0 or 1");
  const GridDomain& g = f.domain();

  if (mode == EvalMode::Streaming) {
    auto source = std::make_shared<PairField>(f);
    return PairField::streaming(f.domain_ptr(), [source, i, j, radii](CellIndex a, CellIndex b) {
      return directional_maximal_at(*source, i, j, a, b, radii);
    });
  }

  PairField out(f.domain_ptr());
  const std::size_t m = out.side();
  if (i == 0 && j == 0) {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) out.at(a, b) = std::abs(f(a, b));
    return out;
  }

  const int n = g.cells_per_side();
  const int rows = static_cast<int>(g.rows());
  const SliceMaximal engine(n, rows, g.dim(), radius_ladder(window_radius(g), radii));
  const Rect whole{0, n - 1, 0, rows - 1};

  if (i != j) {
    // One argument moves, the other is fixed: slices indexed by the fixed cell.
    parallel_for(m, [&](std::size_t fixed) {
      std::vector<double> img(m), res(m), prefix;
      for (std::size_t v = 0; v < m; ++v) img[v] = std::abs(i == 1 ? f(v, fixed) : f(fixed, v));
      engine.run(img, whole, res, prefix);
      for (std::size_t v = 0; v < m; ++v) {
        if (i == 1) out.at(v, fixed) = res[v];
        else out.at(fixed, v) = res[v];
      }
    });
    return out;
  }

  // Diagonal direction: slices indexed by the offset d = y - x.
  const int span = 2 * n - 1;
  const std::size_t slices = g.dim() == 1 ? std::size_t(span) : std::size_t(span) * span;
  parallel_for(slices, [&](std::size_t s) {
    const int dx = static_cast<int>(s % span) - (n - 1);
    const int dy = g.dim() == 1 ? 0 : static_cast<int>(s / span) - (n - 1);
    const Rect valid{std::max(0, -dx), std::min(n - 1, n - 1 - dx), std::max(0, -dy),
                     std::min(rows - 1, rows - 1 - dy)};
    std::vector<double> img(m, 0.0), res(m), prefix;
    for (int r = valid.r0; r <= valid.r1; ++r)
      for (int c = valid.c0; c <= valid.c1; ++c)
        img[std::size_t(r) * n + c] = std::abs(f(g.cell({c, r}), g.cell({c + dx, r + dy})));
    engine.run(img, valid, res, prefix);
    for (int r = valid.r0; r <= valid.r1; ++r)
      for (int c = valid.c0; c <= valid.c1; ++c)
        out.at(g.cell({c, r}), g.cell({c + dx, r + dy})) = res[std::size_t(r) * n + c];
  });
  return out;
}

double directional_maximal_at(const PairField& f, int i, int j, CellIndex a, CellIndex b,
                              RadiusSet radii) {
  if ((i != 0 && i != 1) || (j != 0 && j != 1)) throw std::invalid_argument("i and j must be 0 or 1");
  const GridDomain& g = f.domain();
  if (i == 0 && j == 0) return std::abs(f(a, b));
  const std::vector<int> ladder = radius_ladder(window_radius(g), radii);
  const Coord xa = g.coords(a);
  const Coord xb = g.coords(b);
  double best = std::abs(f(a, b));
  for (std::size_t li = 1; li < ladder.size(); ++li) {
    const int k = ladder[li];
    const int reach = g.dim() == 1 ? 0 : k;
    double total = 0.0;
    std::int64_t count = 0;
    for (int zy = -reach; zy <= reach; ++zy) {
      for (int zx = -k; zx <= k; ++zx) {
        if (std::int64_t(zx) * zx + std::int64_t(zy) * zy > std::int64_t(k) * k) continue;
        ++count;
        const Coord pa{xa[0] + i * zx, xa[1] + i * zy};
        const Coord pb{xb[0] + j * zx, xb[1] + j * zy};
        if (!g.in_window(pa) || !g.in_window(pb)) continue;
        total += std::abs(f(g.cell(pa), g.cell(pb)));
      }
    }
    best = std::max(best, total / static_cast<double>(count));
  }
  return best;
}

}  // namespace fracmax
