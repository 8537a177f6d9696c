#pragma once
/// Moving-plane diagnostics: the critical reflection position along a
/// direction, the reflected-cap difference w = u - R u, and growth probes of
/// w along rays from the critical contact.

#include <string>
#include <vector>

#include "fracshape/solver.hpp"

namespace fracshape {

enum class ContactConfig { InternalTangency, Orthogonal, Simultaneous };

const char* contact_config_name(ContactConfig config);

struct CriticalPosition {
  double lambda0 = 0.0;  ///< first-contact abscissa (min of x . e on the boundary)
  double lambda = 0.0;   ///< critical abscissa
  ContactConfig config = ContactConfig::Simultaneous;
  Vec2 contact_point;    ///< deepest contact of the reflected arc
  double contact_gap = 0.0;        ///< boundary clearance at the contact (<= 0 inside)
  double crossing_normal_dot = 0;  ///< min |n . e| over the plane-boundary crossings
};

/// Sweep the plane {x . e = lambda} upward from first contact and bisect for
/// the largest lambda at which the reflected cap arc still lies inside the
/// domain (tolerance 1e-6 * diameter, n_scan sample points on the arc).
/// Classification thresholds: |n . e| < 1e-3 at a crossing marks the
/// orthogonal configuration; a touching point farther than 5% of the diameter
/// from the plane marks internal tangency; both (as on any reflection-
/// symmetric domain) mark Simultaneous.
CriticalPosition critical_position(const BoundaryCurve& curve, const Vec2& e,
                                   int n_scan = 512);

struct SymmetryReport {
  Vec2 e;
  double lambda = 0.0;
  double w_min = 0.0;
  Vec2 w_min_location;
  double w_max_abs = 0.0;
  double max_u = 0.0;         ///< scale for tolerances
  double negative_fraction = 0.0;  ///< cap samples with w < -tol
  double tol = 0.0;
  int grid = 0;
  int cap_samples = 0;
};

/// Sample w(x) = u(x) - u(x + 2(lambda - x.e)e) on a grid over the reflected
/// cap {x . e > lambda} (both the point and its mirror inside the domain) and
/// report the minimum and the fraction below -tol (default tol = 1e-3 max u).
/// Throws NumericalError(EmptyCap) if the cap has no interior samples.
SymmetryReport reflection_difference(const SolutionField& sol, double lambda,
                                     const Vec2& e, int grid = 160,
                                     double tol = 0.0);

struct GrowthProbe {
  bool degenerate = false;  ///< w vanished along the ray; no fit performed
  double slope = 0.0;       ///< log-log least-squares exponent
  double slope_stderr = 0.0;
  double intercept = 0.0;
  std::vector<double> t;
  std::vector<double> w;
};

/// Fit w(start + t dir) ~ C t^slope over a geometric t-grid in
/// [t_min, t_max]; reports the log-log slope with its standard error. Refuses
/// (degenerate flag) when max |w| <= 1e-9 max u, and throws
/// NumericalError(SignChange) when w changes sign along the ray.
GrowthProbe growth_probe(const SolutionField& sol, double lambda, const Vec2& e,
                         const Vec2& start, const Vec2& dir, double t_min,
                         double t_max, int n_samples = 16);

}  // namespace fracshape
