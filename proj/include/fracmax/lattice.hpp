#pragma once

#include <cstdint>
#include <vector>

namespace fracmax {

/// floor(sqrt(v)) for v >= 0, exact.
std::int64_t isqrt(std::int64_t v);

/// Discrete balls {z in Z^n : |z| <= k} for integer radii 0..max_radius.
/// In 1D the ball is the interval [-k, k].
class BallTable {
 public:
  BallTable(int dim, int max_radius);

  int dim() const { return dim_; }
  int max_radius() const { return max_radius_; }
  /// Largest dx with dx^2 + dy^2 <= k^2 (2D); k in 1D (dy must be 0).
  int half_width(int k, int dy) const {
    return half_width_[static_cast<std::size_t>(k) * (max_radius_ + 1) + (dy < 0 ? -dy : dy)];
  }
  /// Number of lattice points in the ball of radius k.
  std::int64_t count(int k) const { return count_[static_cast<std::size_t>(k)]; }

 private:
  int dim_;
  int max_radius_;
  std::vector<int> half_width_;
  std::vector<std::int64_t> count_;
};

}  // namespace fracmax
