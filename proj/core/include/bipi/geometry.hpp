#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "bipi/particles.hpp"
#include "bipi/vec2.hpp"

namespace bipi {

/// Directed boundary element. The fluid lies to the left of a -> b, so the
/// inward normal is the +90 degree rotation of the unit edge direction.
struct Segment {
  Vec2 a;
  Vec2 b;
  Vec2 normal;
  double length = 0.0;
  int loop_id = 0;
  Vec2 centroid;
  int prev = -1;  // segment ending at a
  int next = -1;  // segment starting at b
  // Wall used while packing but removed for flow runs (free surfaces).
  bool packing_only = false;
};

struct Loop {
  std::vector<Vec2> vertices;  // open list; the closing edge is implied
  double signed_area = 0.0;
  [[nodiscard]] bool is_hole() const { return signed_area < 0.0; }
};

struct BBox {
  Vec2 min;
  Vec2 max;
  [[nodiscard]] double width() const { return max.x1 - min.x1; }
  [[nodiscard]] double height() const { return max.x2 - min.x2; }
};

/// Validated set of closed polygonal loops. Outer loops run counterclockwise,
/// holes clockwise. Immutable once built.
struct BoundarySet {
  std::vector<Segment> segments;
  std::vector<Loop> loops;
  BBox bbox;

  /// Copy without the packing-only segments (loops are kept for bbox/plots).
  [[nodiscard]] BoundarySet walls_only() const;
  [[nodiscard]] double total_length() const;
};

struct NearestBoundary {
  int segment = -1;
  double distance = 0.0;
  Vec2 foot;
};

/// Parse the plain-text boundary format:
///   # comment
///   loop <n>
///   <x1> <x2>      (n lines)
/// Throws GeometryError on malformed input or invalid loops.
BoundarySet parse_boundary(std::string_view text);
BoundarySet load_boundary(const std::filesystem::path& path);

/// Build and validate a boundary from vertex loops (same checks as parsing).
BoundarySet make_boundary(const std::vector<std::vector<Vec2>>& loops);

/// Serialize to the boundary text format (17 significant digits).
std::string format_boundary(const BoundarySet& b);

/// Split every edge of length L into floor(L / dx_r) + 1 equal pieces so that
/// each piece is strictly shorter than dx_r.
BoundarySet refine_segments(const BoundarySet& b, double dx_r);

/// Mark segments satisfying `pred` as packing-only.
BoundarySet mark_packing_only(BoundarySet b, const std::function<bool(const Segment&)>& pred);

/// Even-odd ray casting toward +x1. Edges own their lower endpoint, and a
/// crossing counts only strictly to the right of p.
bool contains(const BoundarySet& b, const Vec2& p);

/// Minimum point-to-segment distance; ties go to the lowest segment id.
NearestBoundary nearest_boundary(const BoundarySet& b, const Vec2& p);

/// One particle per Cartesian cell (anchored at bbox.min, size dx_r) whose
/// center lies inside the fluid region.
ParticleSet seed_grid(const BoundarySet& b, double dx_r);

double signed_area(std::span<const Vec2> loop);
Vec2 closest_point_on_segment(const Segment& s, const Vec2& p);
double distance_to_segment(const Segment& s, const Vec2& p);

/// True when closed segments [p1,p2] and [q1,q2] share at least one point.
bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2);

}  // namespace bipi
