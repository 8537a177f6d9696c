#pragma once
/// Minimal 2D double-precision vector used throughout the library.

#include <cmath>

namespace fracshape {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double a) const { return {a * x, a * y}; }
  constexpr Vec2 operator/(double a) const { return {x / a, y / a}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  Vec2& operator*=(double a) {
    x *= a;
    y *= a;
    return *this;
  }
};

constexpr Vec2 operator*(double a, const Vec2& v) { return {a * v.x, a * v.y}; }

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/// z-component of the 3D cross product of the embedded vectors.
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }

constexpr double norm_sq(const Vec2& v) { return v.x * v.x + v.y * v.y; }

/// Rotate by +90 degrees (counterclockwise).
constexpr Vec2 perp(const Vec2& v) { return {-v.y, v.x}; }

inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

inline Vec2 normalized(const Vec2& v) {
  const double n = norm(v);
  return n > 0.0 ? v / n : Vec2{0.0, 0.0};
}

inline Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

}  // namespace fracshape
