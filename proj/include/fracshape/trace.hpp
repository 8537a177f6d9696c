#pragma once
/// Extraction of the fractional normal derivative psi0(s): the coefficient of
/// sqrt(r) in the inward expansion of the solution at the boundary, fitted by
/// least squares along inward normals.

#include <vector>

#include "fracshape/solver.hpp"

namespace fracshape {

struct TraceOptions {
  int n_nodes = 128;    ///< boundary nodes, uniform in arc length
  double r_min = 0.0;   ///< inner window edge; 0 = 1e-3 * diameter
  double r_max = 0.0;   ///< outer window edge; 0 = 0.05 * diameter
  int n_samples = 12;   ///< geometric radii per node
  int model_order = 3;  ///< fitted terms from {sqrt r, r, r^{3/2}, r^2}
};

/// psi0 attached to uniform arc-length nodes; interpolation between nodes is
/// periodic-linear.
struct TraceProfile {
  std::vector<double> s_nodes;
  std::vector<double> psi0;
  std::vector<double> fit_residuals;  ///< per-node RMS misfit
  double r_min = 0.0, r_max = 0.0;
  double length = 0.0;  ///< curve length, for periodic interpolation

  double psi0_at(double s) const;
  double mean() const;
  double stddev() const;
};

/// Samples u(p(s) - r n(s)) on a geometric radial grid inside the tubular
/// band and fits a sqrt(r) + b r + c r^{3/2} (+ d r^2) per node; psi0 = a.
/// Throws ValidationError(OutOfBand) if the window leaves the band and
/// NumericalError(IllConditionedFit) if the design matrix condition exceeds
/// 1e12.
TraceProfile extract_psi0(const SolutionField& sol, const TraceOptions& opts = {});

/// std(psi0)/mean(psi0): the dimensionless violation of the constant-trace
/// overdetermined condition (0 on a disk). Throws
/// NumericalError(DegenerateProfile) if the mean is not positive.
double serrin_residual(const TraceProfile& profile);

}  // namespace fracshape
