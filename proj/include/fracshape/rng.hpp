#pragma once
/// Deterministic random number helper for verification grids and property
/// tests. Wraps std::mt19937_64 but converts draws to doubles with an explicit
/// bit transform so that streams are identical across standard libraries.

#include <cstdint>
#include <random>

#include "fracshape/vec2.hpp"

namespace fracshape {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  Vec2 point_in_box(const Vec2& lo, const Vec2& hi) {
    return {uniform(lo.x, hi.x), uniform(lo.y, hi.y)};
  }

  std::uint64_t next_u64() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

}  // namespace fracshape
