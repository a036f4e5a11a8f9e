#pragma once

#include <vector>

#include "bipi/geometry.hpp"

namespace bipi {

/// Uniform bucket grid over boundary segments for "which segments lie within
/// `reach` of p" queries. Each segment is registered in every cell its
/// reach-inflated bounding box overlaps, so a query inspects one cell.
class SegmentIndex {
 public:
  SegmentIndex() = default;
  SegmentIndex(const BoundarySet& boundary, double reach);

  /// Segment ids with distance(p, segment) <= reach, ascending.
  void query(const Vec2& p, std::vector<int>& out) const;
  [[nodiscard]] std::vector<int> query(const Vec2& p) const;

  /// Nearest distance from p to the segments within reach (infinity if none).
  [[nodiscard]] double nearest_within_reach(const Vec2& p) const;

  [[nodiscard]] double reach() const { return reach_; }
  [[nodiscard]] const BoundarySet& boundary() const { return *boundary_; }

 private:
  [[nodiscard]] long cell_of(const Vec2& p) const;

  const BoundarySet* boundary_ = nullptr;
  double reach_ = 0.0;
  Vec2 origin_;
  double cell_ = 1.0;
  long nx_ = 0;
  long ny_ = 0;
  std::vector<int> start_;  // CSR offsets, size nx*ny + 1
  std::vector<int> items_;
};

}  // namespace bipi
