#pragma once
/// Galerkin assembly for the half-Laplacian energy: the square-root-weighted
/// Chebyshev-Fourier trial basis on the radial pullback of the domain, the
/// singular double-integral stiffness matrix, the exterior ("killing") kernel,
/// and the load vector.

#include <Eigen/Dense>
#include <functional>

#include "fracshape/geometry.hpp"

namespace fracshape {

using SourceField = std::function<double(const Vec2&)>;

/// Trial space phi_{mode,j}(x) = (1 - |xi|^2)^{1/2} T_j(2|xi|^2 - 1) * ang,
/// where xi = (x - center)/rho(theta) is the radial pullback of the domain
/// onto the unit disk, T_j is the degree-j Chebyshev polynomial, and ang runs
/// over {1, cos m theta, sin m theta} for m = 1..k_ang. Every function
/// vanishes on the boundary with square-root-of-distance behavior and the
/// space contains the exact disk solution.
class WeightedBasis {
public:
  WeightedBasis(BoundaryCurve curve, int k_rad, int k_ang);

  int k_rad() const { return k_rad_; }
  int k_ang() const { return k_ang_; }
  int size() const { return (k_rad_ + 1) * (2 * k_ang_ + 1); }
  const BoundaryCurve& curve() const { return curve_; }

  /// Coefficient layout: contiguous radial blocks per angular mode.
  /// mode = 0 is the angular constant; mode = 2m-1 is cos(m theta); mode = 2m
  /// is sin(m theta). index = mode * (k_rad + 1) + j.
  int index(int mode, int j) const { return mode * (k_rad_ + 1) + j; }

  /// Evaluates every basis function at x into out (resized to size()).
  /// All entries are exactly 0 for x outside the closed domain.
  void eval_all(const Vec2& x, Eigen::VectorXd& out) const;

  /// Sum of coeffs against the basis at x; 0 outside the closed domain.
  double evaluate(const Eigen::VectorXd& coeffs, const Vec2& x) const;

private:
  BoundaryCurve curve_;
  int k_rad_;
  int k_ang_;
};

/// Product quadrature sizes for the assembly double integral. The outer rule
/// covers the domain in star-polar coordinates (trapezoid in angle, radial
/// Gauss-Legendre graded toward the center and the boundary); the inner rule
/// is polar about each outer node (trapezoid in angle, radial rule graded
/// toward both endpoints). gamma is the grading exponent.
struct QuadratureConfig {
  int n_outer_theta = 64;
  int n_outer_rho = 32;
  int n_inner_theta = 32;
  int n_inner_rho = 24;
  double gamma = 2.0;
};

struct GalerkinSystem {
  WeightedBasis basis;
  Eigen::MatrixXd stiffness;
  Eigen::VectorXd load;
  QuadratureConfig quad;
  /// Relative Frobenius asymmetry of the accumulated matrix before it is
  /// symmetrized (the rank-one accumulation makes this a pure roundoff check).
  double symmetry_defect = 0.0;
};

/// Exterior kernel K(x) = int_{complement} |x - y|^{-3} dy for an interior
/// point x, reduced to int_0^{2pi} dtheta / R(x, theta) with R the ray
/// distance to the boundary; trapezoid in theta. Propagates NoIntersection.
double exterior_kernel(const BoundaryCurve& curve, const Vec2& x, int n_theta);

/// Assembles stiffness A and load b:
///   A_IJ = (c1/2) sum_x sum_y w_x w_y (phi_I(x)-phi_I(y))(phi_J(x)-phi_J(y))
///            / |x-y|^3  +  c1 sum_x w_x phi_I(x) phi_J(x) K(x),
///   b_I  = sum_x w_x f(x) phi_I(x),
/// with the inner quadrature in polar coordinates about each outer node. The
/// reduction is chunked in a fixed order so results are bit-identical for any
/// thread count. Throws ValidationError(InvalidConfig) for out-of-range
/// quadrature sizes and NumericalError(AssemblyFailed) on non-finite entries.
GalerkinSystem assemble(const WeightedBasis& basis, const SourceField& f,
                        const QuadratureConfig& quad = {});

/// Nodes and weights of the outer (domain) quadrature grid used by assemble;
/// exposed so energy and diagnostic integrals use the identical grid.
struct DomainQuadrature {
  std::vector<Vec2> points;
  std::vector<double> weights;
};
DomainQuadrature domain_quadrature(const BoundaryCurve& curve,
                                   const QuadratureConfig& quad);

}  // namespace fracshape
