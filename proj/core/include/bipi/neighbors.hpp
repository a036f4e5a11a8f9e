#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "bipi/geometry.hpp"
#include "bipi/kernel.hpp"
#include "bipi/particles.hpp"

namespace bipi {

struct Neighbor {
  int id = -1;
  Vec2 disp;  // x_a - x_b
  double dist = 0.0;
};

/// Cell-linked list over a subset ("universe") of particle positions with
/// cell size equal to the kernel support 2h. Holds a view of `positions`,
/// which must outlive the index and stay unchanged while it is queried.
class NeighborIndex {
 public:
  NeighborIndex() = default;

  [[nodiscard]] std::size_t universe_size() const { return ids_.size(); }
  [[nodiscard]] std::size_t bucket_count() const { return start_.empty() ? 0 : start_.size() - 1; }
  [[nodiscard]] double radius() const { return radius_; }

  /// Visit every universe particle b != self with |p - x_b| <= 2h, in fixed
  /// (cell-major, then ascending id) order. fn(id, disp = p - x_b, dist).
  template <typename Fn>
  void for_each(const Vec2& p, int self, Fn&& fn) const {
    if (ids_.empty()) return;
    const double fi = std::floor((p.x1 - origin_.x1) / cell_);
    const double fj = std::floor((p.x2 - origin_.x2) / cell_);
    const double r2max = radius_ * radius_;
    for (double dj = -1; dj <= 1; ++dj) {
      const double j = fj + dj;
      if (j < 0 || j >= static_cast<double>(ny_)) continue;
      for (double di = -1; di <= 1; ++di) {
        const double i = fi + di;
        if (i < 0 || i >= static_cast<double>(nx_)) continue;
        const auto c = static_cast<std::size_t>(static_cast<long>(j) * nx_ + static_cast<long>(i));
        for (int k = start_[c]; k < start_[c + 1]; ++k) {
          const int b = ids_[static_cast<std::size_t>(k)];
          if (b == self) continue;
          const Vec2 d = p - positions_[static_cast<std::size_t>(b)];
          const double r2 = norm2(d);
          if (r2 <= r2max) fn(b, d, std::sqrt(r2));
        }
      }
    }
  }

  friend NeighborIndex build_index(std::span<const Vec2> positions, std::span<const int> universe,
                                   const KernelSpec& spec);

 private:
  std::span<const Vec2> positions_;
  double radius_ = 0.0;
  double cell_ = 1.0;
  Vec2 origin_;
  long nx_ = 0;
  long ny_ = 0;
  std::vector<int> start_;
  std::vector<int> ids_;  // particle ids grouped by cell, ascending within a cell
};

/// O(n) counting-sort construction. An empty universe yields zero buckets.
NeighborIndex build_index(std::span<const Vec2> positions, std::span<const int> universe,
                          const KernelSpec& spec);

/// Universe = every particle.
NeighborIndex build_index(std::span<const Vec2> positions, const KernelSpec& spec);

/// Universe particles within 2h of particle `a` (self excluded), sorted by id.
std::vector<Neighbor> neighbors(const NeighborIndex& idx, std::span<const Vec2> positions, int a);

/// Universe particles within 2h of a probe point, sorted by id.
std::vector<Neighbor> neighbors(const NeighborIndex& idx, const Vec2& probe);

struct NearBoundarySelection {
  std::vector<int> packable;  // nearest-boundary distance <= k_a
  std::vector<int> selected;  // nearest-boundary distance <= k_a + 2h
};

/// Step 2a particle classes; k_a defaults to the support radius 2h.
NearBoundarySelection select_near_boundary(const ParticleSet& p, const BoundarySet& b,
                                           const KernelSpec& spec, double k_a = -1.0);

}  // namespace bipi
