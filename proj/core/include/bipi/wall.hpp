#pragma once

#include <vector>

#include "bipi/geometry.hpp"
#include "bipi/kernel.hpp"
#include "bipi/quadrature.hpp"
#include "bipi/segment_index.hpp"

namespace bipi {

/// Per-segment boundary integral  grad_gamma_as = int_s W(x - x') n_s dS'
/// over the part of s inside the support disk, by adaptive Gauss-Legendre
/// along the segment (split at the foot of the perpendicular).
Vec2 grad_gamma_segment(const Vec2& x, const Segment& s, const KernelSpec& spec,
                        const quad::AdaptiveOptions& opt = {});

/// Wall renormalization factor gamma(x) = int_{Omega cap support} W dV.
/// Points on the boundary are accepted; points outside throw GeometryError.
double gamma(const Vec2& x, const BoundarySet& b, const KernelSpec& spec);

/// gamma at distance d >= 0 from an infinite straight wall, from the kernel's
/// 1D marginal. Independent of the boundary-integral route used by gamma().
double gamma_halfplane(double d, const KernelSpec& spec);

struct WallTerm {
  int segment = -1;
  Vec2 grad_gamma;
};

struct WallSample {
  double gamma = 1.0;
  double nearest = 0.0;  // distance to the closest segment in reach (inf if none)
  std::vector<WallTerm> terms;
};

/// Reusable evaluator of gamma and the per-segment gradients for particles.
/// Only segments within the kernel support contribute; a point with none in
/// reach gets gamma = 1 and no terms. Holds a reference to `boundary`.
class WallEvaluator {
 public:
  WallEvaluator(const BoundarySet& boundary, const KernelSpec& spec,
                quad::AdaptiveOptions opt = {});

  void evaluate(const Vec2& x, WallSample& out) const;
  [[nodiscard]] WallSample evaluate(const Vec2& x) const;

  [[nodiscard]] const SegmentIndex& index() const { return index_; }
  [[nodiscard]] const BoundarySet& boundary() const { return *boundary_; }
  [[nodiscard]] const KernelSpec& spec() const { return spec_; }

 private:
  const BoundarySet* boundary_;
  KernelSpec spec_;
  quad::AdaptiveOptions opt_;
  SegmentIndex index_;
};

}  // namespace bipi
