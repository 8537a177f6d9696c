#pragma once
/// Direct solve of the assembled Galerkin system and point evaluation of the
/// resulting solution field.

#include <string>

#include "fracshape/assembly.hpp"

namespace fracshape {

struct SolverOptions {
  int k_rad = 6;
  int k_ang = 4;
  QuadratureConfig quad;
};

/// The solved field u on one domain: basis + coefficients + diagnostics.
/// Immutable after construction; safe to share across threads.
struct SolutionField {
  WeightedBasis basis;
  Eigen::VectorXd coeffs;
  Eigen::VectorXd load;       ///< assembled load vector (kept for the energy)
  QuadratureConfig quad;
  std::string source;         ///< human-readable description of f
  double solve_residual = 0;  ///< |A c - b| / |b|
  double symmetry_defect = 0;

  const BoundaryCurve& curve() const { return basis.curve(); }
  double evaluate(const Vec2& x) const { return basis.evaluate(coeffs, x); }
};

/// Assemble and Cholesky-solve the Dirichlet system on `curve` with source f.
/// Throws NumericalError(NotPositiveDefinite) if the factorization fails and
/// propagates assembly errors.
SolutionField solve_dirichlet(const BoundaryCurve& curve, const SourceField& f,
                              const SolverOptions& opts = {},
                              const std::string& source_desc = "f");

/// Point evaluation: the basis sum inside the domain, exactly 0 outside.
double evaluate_solution(const SolutionField& sol, const Vec2& x);

}  // namespace fracshape
