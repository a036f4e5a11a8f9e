#pragma once

#include <cstdint>
#include <vector>

#include "bipi/vec2.hpp"

namespace bipi {

/// Uniform-resolution particle cloud with the per-particle packing fields.
///
/// Struct-of-arrays so that position spans can be handed to the neighbor
/// index without copying. Every particle carries volume dx * dx.
struct ParticleSet {
  double dx = 0.0;

  std::vector<Vec2> position;
  std::vector<Vec2> seed;  // position at the end of seeding; TPD reference
  std::vector<double> gamma;
  std::vector<double> conc;
  std::vector<Vec2> grad_c;
  std::vector<std::uint8_t> packable;
  std::vector<std::uint8_t> selected;
  std::vector<std::uint8_t> frozen;

  [[nodiscard]] std::size_t size() const { return position.size(); }
  [[nodiscard]] bool empty() const { return position.empty(); }
  [[nodiscard]] double volume() const { return dx * dx; }

  void add(const Vec2& p) {
    position.push_back(p);
    seed.push_back(p);
    gamma.push_back(1.0);
    conc.push_back(0.0);
    grad_c.push_back({});
    packable.push_back(0);
    selected.push_back(0);
    frozen.push_back(0);
  }
};

}  // namespace bipi
