#include "fracmax/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace fracmax {

std::int64_t isqrt(std::int64_t v) {
  if (v < 0) throw std::domain_error("isqrt of a negative number");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

BallTable::BallTable(int dim, int max_radius) : dim_(dim), max_radius_(max_radius) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
  if (max_radius < 0) throw std::invalid_argument("max_radius must be non-negative");
  const std::size_t stride = std::size_t(max_radius) + 1;
  half_width_.assign(stride * stride, -1);
  count_.assign(stride, 0);
  for (int k = 0; k <= max_radius; ++k) {
    if (dim == 1) {
      half_width_[std::size_t(k) * stride] = k;
      count_[k] = 2 * std::int64_t(k) + 1;
      continue;
    }
    std::int64_t total = 0;
    for (int dy = 0; dy <= k; ++dy) {
      const int w = static_cast<int>(isqrt(std::int64_t(k) * k - std::int64_t(dy) * dy));
      half_width_[std::size_t(k) * stride + dy] = w;
      total += (dy == 0 ? 1 : 2) * (2 * std::int64_t(w) + 1);
    }
    count_[k] = total;
  }
}

}  // namespace fracmax
