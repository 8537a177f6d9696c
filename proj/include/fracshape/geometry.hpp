#pragma once
/// Star-shaped smooth planar domains and their differential geometry.
///
/// A domain is represented by a truncated Fourier radius function about a
/// center point: rho(theta) = a0 + sum_k (a_k cos k θ + b_k sin k θ). The curve
/// is oriented counterclockwise; n is the outward unit normal; the signed
/// tubular coordinate r is positive inside the domain, with x = p(s) - r n(s).
/// Sign conventions: a counterclockwise circle of radius R has curvature
/// +1/R, and with r > 0 inside, the tubular area element is (1 - kappa r) dr ds.

#include <functional>
#include <optional>
#include <vector>

#include "fracshape/vec2.hpp"

namespace fracshape {

/// Truncated Fourier series for the radius function and its derivatives.
struct FourierRadius {
  double a0 = 1.0;
  std::vector<double> cos_coeffs;  // a_k, k = 1..K
  std::vector<double> sin_coeffs;  // b_k, k = 1..K

  int order() const;
  double value(double theta) const;
  double deriv(double theta) const;
  double deriv2(double theta) const;
};

/// Tubular coordinates of a point near the boundary: arc length s along the
/// curve and signed distance r (positive inside).
struct TubularPoint {
  double s = 0.0;
  double r = 0.0;
};

class BoundaryCurve {
public:
  /// Builds the cached tables (positions, speeds, cumulative arc length).
  /// Throws ValidationError if rho is not strictly positive on a dense grid.
  BoundaryCurve(const Vec2& center, FourierRadius radius, int sample_count = 2048);

  const Vec2& center() const { return center_; }
  const FourierRadius& radius() const { return radius_; }
  int sample_count() const { return sample_count_; }

  // --- angular parametrization -------------------------------------------
  double radius_at(double theta) const { return radius_.value(theta); }
  Vec2 point_at_angle(double theta) const;
  Vec2 tangent_at_angle(double theta) const;
  Vec2 outward_normal_at_angle(double theta) const;
  double speed_at_angle(double theta) const;  // |dx/dtheta|
  double curvature_at_angle(double theta) const;

  // --- arc-length parametrization ----------------------------------------
  double length() const { return length_; }
  double angle_from_arclength(double s) const;
  double arclength_from_angle(double theta) const;
  Vec2 point(double s) const;
  Vec2 tangent(double s) const;
  Vec2 outward_normal(double s) const;
  double curvature(double s) const;

  // --- global quantities ---------------------------------------------------
  double area() const { return area_; }
  double diameter() const { return diameter_; }
  double max_abs_curvature() const { return max_abs_curvature_; }
  Vec2 bbox_lo() const { return bbox_lo_; }
  Vec2 bbox_hi() const { return bbox_hi_; }

  // --- point queries -------------------------------------------------------
  /// True if x is inside the domain (boundary exclusive up to tol, which
  /// loosens (>0) or tightens (<0) the radial comparison).
  bool contains(const Vec2& x, double tol = 0.0) const;

  /// Nearest-boundary projection -> (s, r), r > 0 inside.
  /// Throws NumericalError(AmbiguousProjection) when the projection is not
  /// unique (focal region |r| >= 1/max|kappa|, or competing minima).
  TubularPoint signed_distance(const Vec2& x) const;

  /// Distance from the interior point x to the boundary along direction
  /// (cos theta, sin theta). Throws NumericalError(NoIntersection) if no
  /// crossing is bracketed (star-shapedness violated).
  double ray_distance(const Vec2& x, double direction) const;

  /// Tubular area-element factor at (s, r): 1 - kappa(s) r, positive in the
  /// band |r| < 1/|kappa(s)|. Throws ValidationError(OutOfBand) outside.
  double tubular_jacobian(double s, double r) const;

  /// x = p(s) - r n(s).
  Vec2 reconstruct(const TubularPoint& tp) const;

private:
  Vec2 center_;
  FourierRadius radius_;
  int sample_count_;

  // cached tables at theta_k = 2 pi k / sample_count
  std::vector<Vec2> points_;
  std::vector<double> arclength_;  // s at theta_k (arclength_[0] = 0)
  double length_ = 0.0;
  double area_ = 0.0;
  double diameter_ = 0.0;
  double max_abs_curvature_ = 0.0;
  Vec2 bbox_lo_, bbox_hi_;
};

/// Velocity field zeta(x) driving domain transport. Each kind is defined on
/// the whole plane.
class FlowField {
public:
  struct Mode {
    int m = 0;
    double amp_cos = 0.0;
    double amp_sin = 0.0;
  };

  static FlowField translation(const Vec2& c);
  /// zeta(x) = x (dilation about the origin).
  static FlowField dilation();
  /// Radial field g(phi) e_r(phi) about `center` with g a Fourier sum over
  /// `modes`, linearly tapered to zero inside |x - center| < taper_radius so
  /// the field stays Lipschitz at the center.
  static FlowField normal_perturbation(const Vec2& center, std::vector<Mode> modes,
                                       double taper_radius);
  static FlowField sampled(std::function<Vec2(const Vec2&)> fn);

  Vec2 operator()(const Vec2& x) const { return eval_(x); }

  /// Divergence of the field (analytic for translation/dilation, central
  /// differences otherwise).
  double divergence(const Vec2& x) const;

  /// Negated field (for reversibility checks and central differences).
  FlowField negated() const;

private:
  FlowField() = default;
  std::function<Vec2(const Vec2&)> eval_;
  std::optional<double> const_divergence_;
};

struct TransportResult {
  BoundaryCurve curve;
  double fit_residual = 0.0;  // max |rho_sample - refit| over transported samples
};

/// Advance every boundary sample (and the star center) along dx/dt = zeta(x)
/// with classical RK4, then re-fit a Fourier radius of the same order.
/// Throws NumericalError(StarShapeLost) if the transported polygon is no
/// longer star-shaped about the transported center.
TransportResult flow_transport(const BoundaryCurve& curve, const FlowField& zeta,
                               double t, int steps);

/// Jacobian j(t, x) = exp(int_0^t div zeta(phi_s(x)) ds) of the flow map,
/// co-integrated with the trajectory by RK4.
double flow_jacobian(const FlowField& zeta, const Vec2& x, double t, int steps);

}  // namespace fracshape
