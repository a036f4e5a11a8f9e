#include "bipi/segment_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bipi {

SegmentIndex::SegmentIndex(const BoundarySet& boundary, double reach)
    : boundary_(&boundary), reach_(reach), cell_(reach) {
  origin_ = {boundary.bbox.min.x1 - reach, boundary.bbox.min.x2 - reach};
  nx_ = static_cast<long>(std::ceil((boundary.bbox.width() + 2.0 * reach) / cell_)) + 1;
  ny_ = static_cast<long>(std::ceil((boundary.bbox.height() + 2.0 * reach) / cell_)) + 1;

  const auto cells = static_cast<std::size_t>(nx_ * ny_);
  std::vector<std::vector<int>> buckets(cells);
  for (std::size_t s = 0; s < boundary.segments.size(); ++s) {
    const Segment& seg = boundary.segments[s];
    const double lo1 = std::min(seg.a.x1, seg.b.x1) - reach;
    const double hi1 = std::max(seg.a.x1, seg.b.x1) + reach;
    const double lo2 = std::min(seg.a.x2, seg.b.x2) - reach;
    const double hi2 = std::max(seg.a.x2, seg.b.x2) + reach;
    const long i0 = std::max(0L, static_cast<long>(std::floor((lo1 - origin_.x1) / cell_)));
    const long i1 = std::min(nx_ - 1, static_cast<long>(std::floor((hi1 - origin_.x1) / cell_)));
    const long j0 = std::max(0L, static_cast<long>(std::floor((lo2 - origin_.x2) / cell_)));
    const long j1 = std::min(ny_ - 1, static_cast<long>(std::floor((hi2 - origin_.x2) / cell_)));
    for (long j = j0; j <= j1; ++j)
      for (long i = i0; i <= i1; ++i) buckets[static_cast<std::size_t>(j * nx_ + i)].push_back(static_cast<int>(s));
  }
  start_.assign(cells + 1, 0);
  for (std::size_t c = 0; c < cells; ++c) start_[c + 1] = start_[c] + static_cast<int>(buckets[c].size());
  items_.reserve(static_cast<std::size_t>(start_.back()));
  for (const auto& b : buckets) items_.insert(items_.end(), b.begin(), b.end());
}

long SegmentIndex::cell_of(const Vec2& p) const {
  const double fi = std::floor((p.x1 - origin_.x1) / cell_);
  const double fj = std::floor((p.x2 - origin_.x2) / cell_);
  if (!(fi >= 0.0) || !(fj >= 0.0) || fi >= static_cast<double>(nx_) || fj >= static_cast<double>(ny_)) {
    return -1;
  }
  return static_cast<long>(fj) * nx_ + static_cast<long>(fi);
}

void SegmentIndex::query(const Vec2& p, std::vector<int>& out) const {
  out.clear();
  if (!boundary_) return;
  const long c = cell_of(p);
  // Outside the inflated grid means farther than `reach` from every segment.
  if (c < 0) return;
  for (int k = start_[static_cast<std::size_t>(c)]; k < start_[static_cast<std::size_t>(c) + 1]; ++k) {
    const int s = items_[static_cast<std::size_t>(k)];
    if (distance_to_segment(boundary_->segments[static_cast<std::size_t>(s)], p) <= reach_) out.push_back(s);
  }
}

std::vector<int> SegmentIndex::query(const Vec2& p) const {
  std::vector<int> out;
  query(p, out);
  return out;
}

double SegmentIndex::nearest_within_reach(const Vec2& p) const {
  double best = std::numeric_limits<double>::infinity();
  if (!boundary_) return best;
  const long c = cell_of(p);
  if (c < 0) return best;
  for (int k = start_[static_cast<std::size_t>(c)]; k < start_[static_cast<std::size_t>(c) + 1]; ++k) {
    const int s = items_[static_cast<std::size_t>(k)];
    best = std::min(best, distance_to_segment(boundary_->segments[static_cast<std::size_t>(s)], p));
  }
  return best <= reach_ ? best : std::numeric_limits<double>::infinity();
}

}  // namespace bipi
