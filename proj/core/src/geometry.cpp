#include "bipi/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "bipi/errors.hpp"

namespace bipi {
namespace {

double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); }

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x1, b.x1) <= p.x1 && p.x1 <= std::max(a.x1, b.x1) &&
         std::min(a.x2, b.x2) <= p.x2 && p.x2 <= std::max(a.x2, b.x2);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

// Winding-free point-in-polygon for a single loop (used for hole nesting only).
bool inside_loop(std::span<const Vec2> loop, const Vec2& p) {
  bool in = false;
  const std::size_t n = loop.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = loop[j];
    const Vec2& b = loop[i];
    if ((a.x2 > p.x2) != (b.x2 > p.x2)) {
      const double x = a.x1 + (p.x2 - a.x2) * (b.x1 - a.x1) / (b.x2 - a.x2);
      if (x > p.x1) in = !in;
    }
  }
  return in;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& tok, int line_no) {
  double v = 0.0;
  const char* begin = tok.data();
  const char* end = tok.data() + tok.size();
  if (!tok.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw GeometryError("line " + std::to_string(line_no) + ": invalid number '" + tok + "'");
  }
  return v;
}

void validate_loops(const std::vector<std::vector<Vec2>>& loops) {
  if (loops.empty()) throw GeometryError("boundary has no loops");

  struct Edge {
    Vec2 a, b;
    std::size_t loop, idx, n;
  };
  std::vector<Edge> edges;
  for (std::size_t l = 0; l < loops.size(); ++l) {
    const auto& v = loops[l];
    if (v.size() < 3) {
      throw GeometryError("loop " + std::to_string(l) + " has " + std::to_string(v.size()) +
                          " vertices; at least 3 required");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2& a = v[i];
      const Vec2& b = v[(i + 1) % v.size()];
      if (!is_finite(a)) throw GeometryError("non-finite vertex in loop " + std::to_string(l));
      if (a == b) {
        throw GeometryError("zero-length edge " + std::to_string(i) + " in loop " +
                            std::to_string(l));
      }
      edges.push_back({a, b, l, i, v.size()});
    }
    if (signed_area(v) == 0.0) throw GeometryError("loop " + std::to_string(l) + " has zero area");
  }

  // O(n^2) pairwise test. Adjacent edges may only share their common vertex.
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const Edge& e = edges[i];
      const Edge& f = edges[j];
      const bool same_loop = e.loop == f.loop;
      const bool f_follows_e = same_loop && (e.idx + 1) % e.n == f.idx;
      const bool e_follows_f = same_loop && (f.idx + 1) % f.n == e.idx;
      if (f_follows_e || e_follows_f) {
        const Edge& first = f_follows_e ? e : f;
        const Edge& second = f_follows_e ? f : e;
        const Vec2 d1 = first.b - first.a;
        const Vec2 d2 = second.b - second.a;
        if (cross(d1, d2) == 0.0 && dot(d1, d2) < 0.0) {
          throw GeometryError("loop " + std::to_string(e.loop) + " folds back on itself at vertex " +
                              std::to_string(second.idx));
        }
        continue;
      }
      if (segments_intersect(e.a, e.b, f.a, f.b)) {
        throw GeometryError("self-intersecting boundary: loop " + std::to_string(e.loop) +
                            " edge " + std::to_string(e.idx) + " meets loop " +
                            std::to_string(f.loop) + " edge " + std::to_string(f.idx));
      }
    }
  }

  for (std::size_t l = 0; l < loops.size(); ++l) {
    if (signed_area(loops[l]) > 0.0) continue;
    bool nested = false;
    for (std::size_t m = 0; m < loops.size() && !nested; ++m) {
      if (m != l && signed_area(loops[m]) > 0.0 && inside_loop(loops[m], loops[l].front())) {
        nested = true;
      }
    }
    if (!nested) {
      throw GeometryError("clockwise loop " + std::to_string(l) +
                          " is not inside any counterclockwise loop");
    }
  }
}

BoundarySet build(const std::vector<std::vector<Vec2>>& loops,
                  const std::vector<std::vector<char>>* packing_only = nullptr) {
  BoundarySet out;
  out.bbox.min = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  out.bbox.max = -out.bbox.min;
  for (std::size_t l = 0; l < loops.size(); ++l) {
    const auto& v = loops[l];
    Loop loop;
    loop.vertices = v;
    loop.signed_area = signed_area(v);
    out.loops.push_back(loop);

    const int first = static_cast<int>(out.segments.size());
    const int n = static_cast<int>(v.size());
    for (int i = 0; i < n; ++i) {
      Segment s;
      s.a = v[i];
      s.b = v[(i + 1) % n];
      const Vec2 d = s.b - s.a;
      s.length = norm(d);
      s.normal = perp_left(d / s.length);
      s.centroid = (s.a + s.b) * 0.5;
      s.loop_id = static_cast<int>(l);
      s.prev = first + (i + n - 1) % n;
      s.next = first + (i + 1) % n;
      if (packing_only) s.packing_only = (*packing_only)[l][i] != 0;
      out.segments.push_back(s);

      out.bbox.min.x1 = std::min(out.bbox.min.x1, v[i].x1);
      out.bbox.min.x2 = std::min(out.bbox.min.x2, v[i].x2);
      out.bbox.max.x1 = std::max(out.bbox.max.x1, v[i].x1);
      out.bbox.max.x2 = std::max(out.bbox.max.x2, v[i].x2);
    }
  }
  return out;
}

}  // namespace

double signed_area(std::span<const Vec2> loop) {
  double a = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(loop[i], loop[(i + 1) % n]);
  return 0.5 * a;
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const int o1 = sign(orient(p1, p2, q1));
  const int o2 = sign(orient(p1, p2, q2));
  const int o3 = sign(orient(q1, q2, p1));
  const int o4 = sign(orient(q1, q2, p2));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

Vec2 closest_point_on_segment(const Segment& s, const Vec2& p) {
  const Vec2 d = s.b - s.a;
  double t = dot(p - s.a, d) / norm2(d);
  t = std::clamp(t, 0.0, 1.0);
  return s.a + d * t;
}

double distance_to_segment(const Segment& s, const Vec2& p) {
  return norm(p - closest_point_on_segment(s, p));
}

BoundarySet BoundarySet::walls_only() const {
  BoundarySet out;
  out.loops = loops;
  out.bbox = bbox;
  std::vector<int> remap(segments.size(), -1);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].packing_only) continue;
    remap[i] = static_cast<int>(out.segments.size());
    out.segments.push_back(segments[i]);
  }
  for (auto& s : out.segments) {
    s.prev = s.prev >= 0 ? remap[s.prev] : -1;
    s.next = s.next >= 0 ? remap[s.next] : -1;
  }
  return out;
}

double BoundarySet::total_length() const {
  double L = 0.0;
  for (const auto& s : segments) L += s.length;
  return L;
}

BoundarySet make_boundary(const std::vector<std::vector<Vec2>>& loops) {
  validate_loops(loops);
  return build(loops);
}

BoundarySet parse_boundary(std::string_view text) {
  std::vector<std::vector<Vec2>> loops;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  std::size_t pending = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);

    if (pending == 0) {
      if (tok.size() != 2 || tok[0] != "loop") {
        throw GeometryError("line " + std::to_string(line_no) + ": expected 'loop <n>'");
      }
      const double n = parse_number(tok[1], line_no);
      if (n < 0 || n != std::floor(n)) {
        throw GeometryError("line " + std::to_string(line_no) + ": vertex count must be a non-negative integer");
      }
      pending = static_cast<std::size_t>(n);
      loops.emplace_back();
      if (pending < 3) {
        throw GeometryError("line " + std::to_string(line_no) + ": loop with " +
                            std::to_string(pending) + " vertices; at least 3 required");
      }
      continue;
    }
    if (tok.size() != 2) {
      throw GeometryError("line " + std::to_string(line_no) + ": expected '<x1> <x2>'");
    }
    loops.back().push_back({parse_number(tok[0], line_no), parse_number(tok[1], line_no)});
    --pending;
  }
  if (pending != 0) {
    throw GeometryError("unexpected end of input: " + std::to_string(pending) + " vertices missing");
  }
  return make_boundary(loops);
}

BoundarySet load_boundary(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw GeometryError("cannot open boundary file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_boundary(ss.str());
}

std::string format_boundary(const BoundarySet& b) {
  std::string out;
  char buf[96];
  for (const auto& loop : b.loops) {
    out += "loop " + std::to_string(loop.vertices.size()) + "\n";
    for (const auto& v : loop.vertices) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x1, v.x2);
      out += buf;
    }
  }
  return out;
}

BoundarySet refine_segments(const BoundarySet& b, double dx_r) {
  if (!(dx_r > 0.0)) throw GeometryError("refine_segments: dx_r must be positive");
  std::vector<std::vector<Vec2>> loops;
  std::vector<std::vector<char>> flags;
  for (std::size_t l = 0; l < b.loops.size(); ++l) {
    loops.emplace_back();
    flags.emplace_back();
    for (const auto& s : b.segments) {
      if (s.loop_id != static_cast<int>(l)) continue;
      const auto k = static_cast<int>(std::floor(s.length / dx_r)) + 1;
      const Vec2 d = s.b - s.a;
      for (int i = 0; i < k; ++i) {
        loops.back().push_back(i == 0 ? s.a : s.a + d * (static_cast<double>(i) / k));
        flags.back().push_back(s.packing_only ? 1 : 0);
      }
    }
  }
  BoundarySet out = build(loops, &flags);
  // Subsegments keep the parent's normal exactly rather than a recomputed one.
  std::size_t idx = 0;
  for (const auto& s : b.segments) {
    const auto k = static_cast<std::size_t>(std::floor(s.length / dx_r)) + 1;
    for (std::size_t i = 0; i < k; ++i) out.segments[idx++].normal = s.normal;
  }
  return out;
}

BoundarySet mark_packing_only(BoundarySet b, const std::function<bool(const Segment&)>& pred) {
  for (auto& s : b.segments) s.packing_only = pred(s);
  return b;
}

bool contains(const BoundarySet& b, const Vec2& p) {
  if (p.x1 < b.bbox.min.x1 || p.x1 > b.bbox.max.x1 || p.x2 < b.bbox.min.x2 ||
      p.x2 > b.bbox.max.x2) {
    return false;
  }
  bool in = false;
  for (const auto& loop : b.loops) {
    const auto& v = loop.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Vec2& a = v[j];
      const Vec2& c = v[i];
      if ((a.x2 > p.x2) != (c.x2 > p.x2)) {
        const double x = a.x1 + (p.x2 - a.x2) * (c.x1 - a.x1) / (c.x2 - a.x2);
        if (x > p.x1) in = !in;
      }
    }
  }
  return in;
}

NearestBoundary nearest_boundary(const BoundarySet& b, const Vec2& p) {
  NearestBoundary best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < b.segments.size(); ++i) {
    const Vec2 foot = closest_point_on_segment(b.segments[i], p);
    const double d = norm(p - foot);
    if (d < best.distance) {
      best = {static_cast<int>(i), d, foot};
    }
  }
  return best;
}

ParticleSet seed_grid(const BoundarySet& b, double dx_r) {
  if (!(dx_r > 0.0)) throw GeometryError("seed_grid: dx_r must be positive");
  if (!(b.bbox.width() > 0.0) || !(b.bbox.height() > 0.0)) {
    throw GeometryError("seed_grid: empty bounding box");
  }
  ParticleSet set;
  set.dx = dx_r;
  const auto nx = static_cast<long>(std::ceil(b.bbox.width() / dx_r));
  const auto ny = static_cast<long>(std::ceil(b.bbox.height() / dx_r));
  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < nx; ++i) {
      const Vec2 c{b.bbox.min.x1 + (static_cast<double>(i) + 0.5) * dx_r,
                   b.bbox.min.x2 + (static_cast<double>(j) + 0.5) * dx_r};
      if (contains(b, c)) set.add(c);
    }
  }
  if (set.empty()) {
    throw GeometryError("seed_grid: no cell centers inside the geometry (dx_r too large?)");
  }
  return set;
}

}  // namespace bipi
