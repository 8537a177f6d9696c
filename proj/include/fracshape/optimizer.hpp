#pragma once
/// Volume-constrained shape gradient descent toward the disk: the projected
/// normal velocity from the trace profile, a backtracking line search on the
/// energy, and an exact area rescale after every step.

#include <optional>
#include <vector>

#include "fracshape/shape.hpp"

namespace fracshape {

/// Zero-mean normal velocity V(s) = psi0(s)^2 - lambda at the profile nodes,
/// with lambda = (int psi0^2 ds)/L so that int V ds = 0 (first-order volume
/// preservation). Moving the boundary by t V n changes the energy by
/// t * c0 * (int psi0^4 - lambda int psi0^2) <= 0, reported as predicted_dj.
struct DescentDirection {
  std::vector<double> v;  ///< at the profile's s_nodes
  double lambda = 0.0;
  double predicted_dj = 0.0;  ///< per unit step, always <= 0
  double v_inf = 0.0;         ///< max |V|
};

DescentDirection descent_direction(const TraceProfile& profile,
                                   const BoundaryCurve& curve);

struct OptimizeParams {
  int max_iters = 40;
  double step0 = 0.5;
  /// Convergence: stop when the predicted per-unit-step decrease is smaller
  /// than tol_dj in magnitude.
  double tol_dj = 1e-4;
  /// Optional early stop on the Serrin residual (0 disables).
  double tol_serrin = 0.0;
  int fourier_order = 8;  ///< radius modes kept after each step
  double min_ray_normal = 0.2;
  double armijo_c = 0.1;
  int max_halvings = 20;
  SolverOptions solver;
  TraceOptions trace;
};

struct OptimizationRecord {
  int iteration = 0;
  double j = 0.0;
  double serrin = 0.0;
  double roundness = 0.0;
  double step = 0.0;          ///< accepted step (0 on the final record)
  double predicted_dj = 0.0;  ///< per unit step at this iterate
  double area = 0.0;
};

struct OptimizationResult {
  std::vector<OptimizationRecord> history;
  BoundaryCurve curve;                ///< final (unit-area) domain
  std::optional<SolutionField> solution;  ///< solve on the final domain
  std::optional<TraceProfile> profile;
  bool converged = false;
};

/// std(|p(theta) - centroid|)/mean about the area centroid; 0 for a disk.
double roundness(const BoundaryCurve& curve);

/// Multiplicative radius rescale to unit area (center fixed).
BoundaryCurve rescale_to_unit_area(const BoundaryCurve& curve);

/// Gradient descent loop: solve -> trace -> direction -> radius perturbation
/// delta rho = t V / (e_r . n) truncated to fourier_order modes -> Armijo
/// backtracking with exact rescale per trial. Throws
/// NumericalError(LineSearchFailed) when backtracking exhausts its budget
/// while a decrease well above tol_dj was still predicted, and
/// NumericalError(StarShapeLost) when e_r . n drops below min_ray_normal.
OptimizationResult optimize(const BoundaryCurve& curve0,
                            const OptimizeParams& params = {},
                            const SourceField& f = nullptr);

}  // namespace fracshape
