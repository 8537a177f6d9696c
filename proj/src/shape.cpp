#include "fracshape/shape.hpp"

#include <cmath>

#include "fracshape/kernel.hpp"

namespace fracshape {

double energy(const SolutionField& sol) {
  return -0.5 * sol.load.dot(sol.coeffs);
}

double shape_derivative_analytic(const TraceProfile& profile,
                                 const FlowField& zeta,
                                 const BoundaryCurve& curve) {
  const int n = static_cast<int>(profile.s_nodes.size());
  const double ds = profile.length / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = profile.s_nodes[i];
    const Vec2 p = curve.point(s);
    const Vec2 normal = curve.outward_normal(s);
    sum += profile.psi0[i] * profile.psi0[i] * dot(zeta(p), normal) * ds;
  }
  return constant_c0() * sum;
}

namespace {

double central_difference(const BoundaryCurve& curve, const SourceField& f,
                          const FlowField& zeta, double h,
                          const SolverOptions& opts, int flow_steps) {
  const FlowField back = zeta.negated();
  const TransportResult plus = flow_transport(curve, zeta, h, flow_steps);
  const TransportResult minus = flow_transport(curve, back, h, flow_steps);
  const double j_plus = energy(solve_dirichlet(plus.curve, f, opts));
  const double j_minus = energy(solve_dirichlet(minus.curve, f, opts));
  return (j_plus - j_minus) / (2.0 * h);
}

}  // namespace

double shape_derivative_fd(const BoundaryCurve& curve, const SourceField& f,
                           const FlowField& zeta, double h,
                           const SolverOptions& opts, int flow_steps,
                           bool richardson) {
  const double coarse = central_difference(curve, f, zeta, h, opts, flow_steps);
  if (!richardson) return coarse;
  const double fine =
      central_difference(curve, f, zeta, 0.5 * h, opts, flow_steps);
  return (4.0 * fine - coarse) / 3.0;
}

double volume_derivative(const BoundaryCurve& curve, const FlowField& zeta,
                         int n_nodes) {
  const double ds = curve.length() / n_nodes;
  double sum = 0.0;
  for (int i = 0; i < n_nodes; ++i) {
    const double s = curve.length() * i / n_nodes;
    sum += dot(zeta(curve.point(s)), curve.outward_normal(s)) * ds;
  }
  return sum;
}

}  // namespace fracshape
