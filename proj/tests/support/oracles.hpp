#pragma once
/// Shared closed-form references and domain builders for the test suite.
///
/// Everything here is independent of the library's numerics: disk solutions
/// come from the known closed form for the half-Laplacian on a ball, ellipses
/// are built by direct Fourier projection of the exact polar radius, and the
/// scalar fields carry exact gradients so quadrature error is the only error.

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "fracshape/assembly.hpp"
#include "fracshape/geometry.hpp"
#include "fracshape/kernel.hpp"
#include "fracshape/solver.hpp"

namespace fracshape::testing {

inline double rel_err(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

inline BoundaryCurve make_disk(double radius = 1.0, const Vec2& center = {0, 0}) {
  FourierRadius rho;
  rho.a0 = radius;
  return BoundaryCurve(center, rho);
}

/// Ellipse with semi-axes a, b as a star-shaped curve: the exact polar radius
/// ab / sqrt(b^2 cos^2 t + a^2 sin^2 t) projected onto `order` Fourier modes
/// by the periodic trapezoid rule (spectrally accurate for this analytic,
/// even function, so the projection error is far below test tolerances).
inline BoundaryCurve make_ellipse(double a, double b, int order = 10) {
  const int n = 4096;
  std::vector<double> samples(n);
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * M_PI * k / n;
    const double c = std::cos(t), s = std::sin(t);
    samples[k] = a * b / std::sqrt(b * b * c * c + a * a * s * s);
  }
  FourierRadius rho;
  rho.a0 = 0.0;
  for (double v : samples) rho.a0 += v;
  rho.a0 /= n;
  rho.cos_coeffs.assign(order, 0.0);
  rho.sin_coeffs.assign(order, 0.0);
  for (int m = 1; m <= order; ++m) {
    double ac = 0.0, as = 0.0;
    for (int k = 0; k < n; ++k) {
      const double t = 2.0 * M_PI * k / n;
      ac += samples[k] * std::cos(m * t);
      as += samples[k] * std::sin(m * t);
    }
    rho.cos_coeffs[m - 1] = 2.0 * ac / n;
    rho.sin_coeffs[m - 1] = 2.0 * as / n;
  }
  return BoundaryCurve({0.0, 0.0}, rho);
}

/// Closed-form solution of (-Delta)^{1/2} u = 1 on the disk of radius R:
/// u(x) = (2/pi) sqrt(R^2 - |x|^2), extended by zero.
inline double disk_solution(double radius, const Vec2& x) {
  const double q = radius * radius - norm_sq(x);
  return q > 0.0 ? (2.0 / M_PI) * std::sqrt(q) : 0.0;
}

/// The disk solution as a ScalarField for the pointwise operator, with the
/// exact gradient and the boundary crossings declared as ray breakpoints.
inline ScalarField disk_solution_field(double radius = 1.0) {
  ScalarField f;
  f.value = [radius](const Vec2& x) { return disk_solution(radius, x); };
  f.gradient = [radius](const Vec2& x) -> Vec2 {
    const double q = radius * radius - norm_sq(x);
    if (q <= 0.0) return {0.0, 0.0};
    const double factor = -2.0 / (M_PI * std::sqrt(q));
    return factor * x;
  };
  f.support_radius = radius;
  f.ray_breakpoints = [radius](const Vec2& x, const Vec2& e) {
    // |x + t e| = radius  =>  t^2 + 2 t (x.e) + |x|^2 - radius^2 = 0
    const double b = dot(x, e);
    const double c = norm_sq(x) - radius * radius;
    const double disc = b * b - c;
    std::vector<double> cuts;
    if (disc > 0.0) {
      const double root = std::sqrt(disc);
      cuts.push_back(-b - root);
      cuts.push_back(-b + root);
    }
    return cuts;
  };
  return f;
}

inline ScalarField gaussian_field() {
  ScalarField f;
  f.value = [](const Vec2& x) { return std::exp(-norm_sq(x)); };
  f.gradient = [](const Vec2& x) -> Vec2 {
    return (-2.0 * std::exp(-norm_sq(x))) * x;
  };
  f.support_radius = 6.0;  // exp(-36) is below double precision
  return f;
}

inline SourceField unit_source() {
  return [](const Vec2&) { return 1.0; };
}

/// Relative L2 error of the solution against a reference field, measured on
/// the assembly quadrature grid of the solution's own configuration.
template <typename Ref>
double l2_relative_error(const SolutionField& sol, Ref&& reference) {
  const DomainQuadrature grid = domain_quadrature(sol.curve(), sol.quad);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const double u = sol.evaluate(grid.points[i]);
    const double r = reference(grid.points[i]);
    num += grid.weights[i] * (u - r) * (u - r);
    den += grid.weights[i] * r * r;
  }
  return std::sqrt(num / den);
}

/// Fresh scratch directory under the system temp root; cleared on entry.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fracshape::testing
