#include "fracshape/solver.hpp"

#include <Eigen/Cholesky>

#include "fracshape/errors.hpp"

namespace fracshape {

SolutionField solve_dirichlet(const BoundaryCurve& curve, const SourceField& f,
                              const SolverOptions& opts,
                              const std::string& source_desc) {
  WeightedBasis basis(curve, opts.k_rad, opts.k_ang);
  GalerkinSystem system = assemble(basis, f, opts.quad);
  const Eigen::LLT<Eigen::MatrixXd> llt(system.stiffness);
  if (llt.info() != Eigen::Success)
    throw NumericalError(ErrorCode::NotPositiveDefinite,
                         "stiffness matrix is not positive definite");
  Eigen::VectorXd coeffs = llt.solve(system.load);
  const double residual = (system.stiffness * coeffs - system.load).norm() /
                          std::max(system.load.norm(), 1e-300);
  return {std::move(system.basis), std::move(coeffs),  std::move(system.load),
          system.quad,             source_desc,        residual,
          system.symmetry_defect};
}

double evaluate_solution(const SolutionField& sol, const Vec2& x) {
  return sol.evaluate(x);
}

}  // namespace fracshape
