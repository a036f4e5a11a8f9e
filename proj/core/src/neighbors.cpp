#include "bipi/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bipi/segment_index.hpp"

namespace bipi {

NeighborIndex build_index(std::span<const Vec2> positions, std::span<const int> universe,
                          const KernelSpec& spec) {
  NeighborIndex idx;
  idx.positions_ = positions;
  idx.radius_ = spec.support();
  idx.cell_ = spec.support();
  if (universe.empty()) return idx;

  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi = -lo;
  for (int id : universe) {
    const Vec2& x = positions[static_cast<std::size_t>(id)];
    lo = {std::min(lo.x1, x.x1), std::min(lo.x2, x.x2)};
    hi = {std::max(hi.x1, x.x1), std::max(hi.x2, x.x2)};
  }
  idx.origin_ = lo;
  idx.nx_ = static_cast<long>(std::floor((hi.x1 - lo.x1) / idx.cell_)) + 1;
  idx.ny_ = static_cast<long>(std::floor((hi.x2 - lo.x2) / idx.cell_)) + 1;

  const auto cells = static_cast<std::size_t>(idx.nx_ * idx.ny_);
  std::vector<std::size_t> cell_of(universe.size());
  idx.start_.assign(cells + 1, 0);
  for (std::size_t k = 0; k < universe.size(); ++k) {
    const Vec2& x = positions[static_cast<std::size_t>(universe[k])];
    const auto i = std::min(idx.nx_ - 1, static_cast<long>(std::floor((x.x1 - lo.x1) / idx.cell_)));
    const auto j = std::min(idx.ny_ - 1, static_cast<long>(std::floor((x.x2 - lo.x2) / idx.cell_)));
    cell_of[k] = static_cast<std::size_t>(j * idx.nx_ + i);
    ++idx.start_[cell_of[k] + 1];
  }
  std::partial_sum(idx.start_.begin(), idx.start_.end(), idx.start_.begin());

  // Stable placement in ascending id order keeps each bucket sorted.
  std::vector<std::size_t> order(universe.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return universe[a] < universe[b]; });
  std::vector<int> fill(idx.start_.begin(), idx.start_.end() - 1);
  idx.ids_.resize(universe.size());
  for (std::size_t k : order) {
    idx.ids_[static_cast<std::size_t>(fill[cell_of[k]]++)] = universe[k];
  }
  return idx;
}

NeighborIndex build_index(std::span<const Vec2> positions, const KernelSpec& spec) {
  std::vector<int> all(positions.size());
  std::iota(all.begin(), all.end(), 0);
  return build_index(positions, all, spec);
}

namespace {
std::vector<Neighbor> collect(const NeighborIndex& idx, const Vec2& p, int self) {
  std::vector<Neighbor> out;
  idx.for_each(p, self, [&](int b, const Vec2& d, double r) { out.push_back({b, d, r}); });
  std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
  return out;
}
}  // namespace

std::vector<Neighbor> neighbors(const NeighborIndex& idx, std::span<const Vec2> positions, int a) {
  return collect(idx, positions[static_cast<std::size_t>(a)], a);
}

std::vector<Neighbor> neighbors(const NeighborIndex& idx, const Vec2& probe) {
  return collect(idx, probe, -1);
}

NearBoundarySelection select_near_boundary(const ParticleSet& p, const BoundarySet& b,
                                           const KernelSpec& spec, double k_a) {
  if (k_a < 0.0) k_a = spec.support();
  const double reach = k_a + spec.support();
  const SegmentIndex segs(b, reach);
  NearBoundarySelection sel;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = segs.nearest_within_reach(p.position[i]);
    if (d <= reach) sel.selected.push_back(static_cast<int>(i));
    if (d <= k_a) sel.packable.push_back(static_cast<int>(i));
  }
  return sel;
}

}  // namespace bipi
