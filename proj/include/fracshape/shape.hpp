#pragma once
/// Shape calculus: the energy J, the analytic boundary-integral shape
/// derivative, the finite-difference shape derivative along transported
/// domains, and the volume derivative.

#include "fracshape/trace.hpp"

namespace fracshape {

/// J = -(1/2) int f u over the domain, evaluated on the assembly quadrature
/// grid (identically the load-coefficient pairing -(1/2) b . c).
double energy(const SolutionField& sol);

/// Boundary formula c0 * int psi0(s)^2 (zeta(p(s)) . n(s)) ds, trapezoid over
/// the profile's uniform arc-length nodes.
double shape_derivative_analytic(const TraceProfile& profile,
                                 const FlowField& zeta,
                                 const BoundaryCurve& curve);

/// Central difference (J(transport(+h)) - J(transport(-h)))/(2h) with full
/// re-solves; with richardson set, combines steps h and h/2 as
/// (4 D_{h/2} - D_h)/3. Propagates StarShapeLost from the transport.
double shape_derivative_fd(const BoundaryCurve& curve, const SourceField& f,
                           const FlowField& zeta, double h,
                           const SolverOptions& opts = {}, int flow_steps = 16,
                           bool richardson = false);

/// d|Omega_t|/dt at t = 0: trapezoid of zeta . n over arc length.
double volume_derivative(const BoundaryCurve& curve, const FlowField& zeta,
                         int n_nodes = 512);

}  // namespace fracshape
