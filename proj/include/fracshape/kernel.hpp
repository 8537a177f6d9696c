#pragma once
/// Half-Laplacian kernel mathematics: normalization and shape-derivative
/// constants, the pointwise singular-integral operator, and the half-space
/// Poisson extension.

#include <functional>
#include <vector>

#include "fracshape/vec2.hpp"

namespace fracshape {

/// The closed constants of the planar (n = 2, s = 1/2) theory.
struct KernelConstants {
  double c1;       ///< kernel normalization 1/(2 pi)
  double i0;       ///< value of the profile integral, equal to pi^2
  double phi_inf;  ///< limit of the profile primitive, exactly 1
  double c0;       ///< shape-derivative constant -c1 * i0 * phi_inf / 4
};

/// Kernel normalization for (-Delta)^{1/2} in the plane: 1/(2 pi). The value
/// is guarded by a Gaussian Fourier-symbol oracle in the test suite.
double constant_c1();

/// Numerical value of int_0^inf ln z / ((z - 1) sqrt z) dz, computed by
/// adaptive quadrature after the substitution z = t^2 and folding t -> 1/t
/// (estimated error <= 1e-8). Equals pi^2. Throws
/// NumericalError(QuadratureNotConverged) if the tolerance cannot be met.
double constant_i0();

/// phi(xi) = int_0^xi dz/(1+z^2)^{3/2} = xi / sqrt(1 + xi^2); accepts
/// xi = +infinity and returns 1.
double phi(double xi);

/// Shape-derivative constant -c1 * i0 * phi(inf) / 4 = -pi/8.
double constant_c0();

KernelConstants kernel_constants();

/// A scalar field with enough structure for the singular integral: point
/// values, an exact gradient, a support radius (about the origin) beyond
/// which the field is negligible, and — optionally — the radial positions of
/// non-smooth points along an arbitrary ray (used to split the radial
/// quadrature at kinks such as a boundary crossing).
struct ScalarField {
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> gradient;
  double support_radius = 1.0;
  std::function<std::vector<double>(const Vec2& x, const Vec2& e)> ray_breakpoints;
};

/// Quadrature configuration for frac_laplacian_pointwise. The node layout is
/// a deterministic function of this configuration and of the field's
/// breakpoint geometry only (never of its values), so the operator is exactly
/// linear in the field for a fixed configuration.
struct PointwiseQuad {
  int n_theta = 64;        ///< trapezoid angles about x (even, for pair cancellation)
  int n_rho = 32;          ///< Gauss-Legendre nodes per radial segment
  double gamma = 2.0;      ///< radial grading exponent toward rho = 0 and kinks
  double cutoff_factor = 10.0;  ///< far cutoff = factor * (support radius + |x|)
  bool verify = false;     ///< re-run at doubled sizes and compare
  double verify_tol = 1e-4;
};

/// Regularized singular integral
///   c1 * int (f(x) - f(y) + grad f(x).(y-x) 1_{|y-x|<=R}) / |x-y|^3 dy
/// in polar coordinates about x, with per-ray graded Gauss-Legendre radial
/// rules split at the field's ray breakpoints, and the analytic monopole tail
/// f(x) * 2 pi / R beyond the cutoff R. With verify set, throws
/// NumericalError(QuadratureNotConverged) when doubling the rule moves the
/// value by more than verify_tol * max(1, |value|).
double frac_laplacian_pointwise(const ScalarField& f, const Vec2& x,
                                const PointwiseQuad& quad = {});

/// Boundary-plane field sampled on a uniform rectangular grid, with an
/// optional constant far value outside the window.
struct PlaneGrid {
  Vec2 lo, hi;                 ///< window corners, lo < hi componentwise
  int nx = 2, ny = 2;          ///< samples per axis (>= 2)
  std::vector<double> values;  ///< row-major: values[j*nx + i] at (x_i, y_j)
  double far_value = 0.0;      ///< field value outside the window

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
};

/// Half-space Poisson extension
///   W(x, z) = (z / 2 pi) int w(t) (|x - t|^2 + z^2)^{-3/2} dt
/// evaluated by per-cell tensor Gauss-Legendre quadrature on the bilinear
/// interpolant over the window, plus the exact rectangle solid-angle formula
/// for the constant far field. Quadrature nodes and weights live in the
/// t-plane and do not depend on (x, z), so W is an exact finite sum of
/// harmonic kernels.
double poisson_extension(const PlaneGrid& w, const Vec2& x, double z);

/// Solid angle subtended at (x, z), z > 0, by the rectangle [lo, hi] x {0};
/// the full plane subtends 2 pi. Exposed for the far-field normalization test.
double rectangle_solid_angle(const Vec2& lo, const Vec2& hi, const Vec2& x,
                             double z);

}  // namespace fracshape
