#include "fracshape/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "fracshape/errors.hpp"
#include "fracshape/quadrature.hpp"

namespace fracshape {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// FourierRadius
// ---------------------------------------------------------------------------

int FourierRadius::order() const {
  return static_cast<int>(std::max(cos_coeffs.size(), sin_coeffs.size()));
}

double FourierRadius::value(double theta) const {
  double v = a0;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k)
    v += cos_coeffs[k] * std::cos((k + 1) * theta);
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k)
    v += sin_coeffs[k] * std::sin((k + 1) * theta);
  return v;
}

double FourierRadius::deriv(double theta) const {
  double v = 0.0;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k)
    v -= cos_coeffs[k] * (k + 1) * std::sin((k + 1) * theta);
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k)
    v += sin_coeffs[k] * (k + 1) * std::cos((k + 1) * theta);
  return v;
}

double FourierRadius::deriv2(double theta) const {
  double v = 0.0;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k)
    v -= cos_coeffs[k] * (k + 1) * (k + 1) * std::cos((k + 1) * theta);
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k)
    v -= sin_coeffs[k] * (k + 1) * (k + 1) * std::sin((k + 1) * theta);
  return v;
}

// ---------------------------------------------------------------------------
// BoundaryCurve
// ---------------------------------------------------------------------------

BoundaryCurve::BoundaryCurve(const Vec2& center, FourierRadius radius,
                             int sample_count)
    : center_(center), radius_(std::move(radius)), sample_count_(sample_count) {
  if (sample_count_ < 16)
    throw ValidationError(ErrorCode::InvalidCurve, "sample_count must be >= 16");
  if (sample_count_ < 8 * (radius_.order() + 1))
    sample_count_ = 8 * (radius_.order() + 1);

  // Positivity of the radius function on a dense grid.
  const int n_check = std::max(4 * sample_count_, 4096);
  for (int k = 0; k < n_check; ++k) {
    if (!(radius_.value(kTwoPi * k / n_check) > 0.0))
      throw ValidationError(ErrorCode::InvalidCurve,
                            "radius function is not strictly positive");
  }

  const int n = sample_count_;
  points_.resize(n + 1);
  arclength_.resize(n + 1);
  const QuadRule& gl5 = gauss_legendre(5);
  double s = 0.0;
  bbox_lo_ = bbox_hi_ = point_at_angle(0.0);
  for (int k = 0; k <= n; ++k) {
    const double theta = kTwoPi * k / n;
    points_[k] = point_at_angle(theta);
    arclength_[k] = s;
    if (k < n) {
      // arc length over [theta_k, theta_{k+1}] by 5-point Gauss-Legendre
      const double t0 = theta, t1 = kTwoPi * (k + 1) / n;
      const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
      double panel = 0.0;
      for (std::size_t q = 0; q < gl5.size(); ++q)
        panel += half * gl5.w[q] * speed_at_angle(mid + half * gl5.x[q]);
      s += panel;
    }
    bbox_lo_.x = std::min(bbox_lo_.x, points_[k].x);
    bbox_lo_.y = std::min(bbox_lo_.y, points_[k].y);
    bbox_hi_.x = std::max(bbox_hi_.x, points_[k].x);
    bbox_hi_.y = std::max(bbox_hi_.y, points_[k].y);
  }
  length_ = s;

  // Area by the shoelace integral (1/2) oint (x dy - y dx) with analytic
  // derivatives, trapezoid over the sample grid (exact for trig polynomials).
  double area = 0.0;
  for (int k = 0; k < n; ++k) {
    const double theta = kTwoPi * k / n;
    const double rho = radius_.value(theta), drho = radius_.deriv(theta);
    const Vec2 u = unit_vector(theta);
    const Vec2 x = center_ + rho * u;
    const Vec2 dx = drho * u + rho * perp(u);
    area += 0.5 * cross(x, dx);
  }
  area_ = area * kTwoPi / n;

  for (int k = 0; k < n; ++k)
    max_abs_curvature_ =
        std::max(max_abs_curvature_, std::abs(curvature_at_angle(kTwoPi * k / n)));

  // Diameter estimate from a coarse subsample (used only for scale-setting).
  const int stride = std::max(1, n / 256);
  double diam_sq = 0.0;
  for (int i = 0; i < n; i += stride)
    for (int j = i + stride; j < n; j += stride)
      diam_sq = std::max(diam_sq, norm_sq(points_[i] - points_[j]));
  diameter_ = std::sqrt(diam_sq);
}

Vec2 BoundaryCurve::point_at_angle(double theta) const {
  return center_ + radius_.value(theta) * unit_vector(theta);
}

Vec2 BoundaryCurve::tangent_at_angle(double theta) const {
  const Vec2 u = unit_vector(theta);
  const Vec2 dx = radius_.deriv(theta) * u + radius_.value(theta) * perp(u);
  return normalized(dx);
}

Vec2 BoundaryCurve::outward_normal_at_angle(double theta) const {
  const Vec2 tau = tangent_at_angle(theta);
  return {tau.y, -tau.x};  // counterclockwise curve: outward = tangent rotated -90
}

double BoundaryCurve::speed_at_angle(double theta) const {
  const double rho = radius_.value(theta), drho = radius_.deriv(theta);
  return std::sqrt(rho * rho + drho * drho);
}

double BoundaryCurve::curvature_at_angle(double theta) const {
  const double rho = radius_.value(theta);
  const double d1 = radius_.deriv(theta);
  const double d2 = radius_.deriv2(theta);
  const double denom = std::pow(rho * rho + d1 * d1, 1.5);
  return (rho * rho + 2.0 * d1 * d1 - rho * d2) / denom;
}

double BoundaryCurve::angle_from_arclength(double s) const {
  double target = std::fmod(s, length_);
  if (target < 0.0) target += length_;
  const auto it = std::upper_bound(arclength_.begin(), arclength_.end(), target);
  int k = static_cast<int>(it - arclength_.begin()) - 1;
  k = std::clamp(k, 0, sample_count_ - 1);
  const double h = kTwoPi / sample_count_;
  double theta = k * h + h * (target - arclength_[k]) /
                             std::max(arclength_[k + 1] - arclength_[k], 1e-300);
  // Newton refinement on s(theta) = target.
  for (int iter = 0; iter < 8; ++iter) {
    const double g = arclength_from_angle(theta) - target;
    const double dg = speed_at_angle(theta);
    const double step = g / dg;
    theta -= step;
    if (std::abs(step) < 1e-14) break;
  }
  return wrap_angle(theta);
}

double BoundaryCurve::arclength_from_angle(double theta) const {
  const double t = wrap_angle(theta);
  const double h = kTwoPi / sample_count_;
  int k = std::clamp(static_cast<int>(t / h), 0, sample_count_ - 1);
  double s = arclength_[k];
  const double t0 = k * h;
  if (t > t0) {
    const QuadRule& gl5 = gauss_legendre(5);
    const double mid = 0.5 * (t0 + t), half = 0.5 * (t - t0);
    for (std::size_t q = 0; q < gl5.size(); ++q)
      s += half * gl5.w[q] * speed_at_angle(mid + half * gl5.x[q]);
  }
  return s;
}

Vec2 BoundaryCurve::point(double s) const {
  return point_at_angle(angle_from_arclength(s));
}

Vec2 BoundaryCurve::tangent(double s) const {
  return tangent_at_angle(angle_from_arclength(s));
}

Vec2 BoundaryCurve::outward_normal(double s) const {
  return outward_normal_at_angle(angle_from_arclength(s));
}

double BoundaryCurve::curvature(double s) const {
  return curvature_at_angle(angle_from_arclength(s));
}

bool BoundaryCurve::contains(const Vec2& x, double tol) const {
  const Vec2 v = x - center_;
  const double q = norm(v);
  if (q == 0.0) return true;
  const double phi = std::atan2(v.y, v.x);
  return q < radius_.value(phi) + tol;
}

TubularPoint BoundaryCurve::signed_distance(const Vec2& x) const {
  const int n = sample_count_;
  const double scale = diameter_;
  // Sampled squared distances to seed Newton and detect competing minima.
  std::vector<double> dist_sq(n);
  int best = 0;
  for (int k = 0; k < n; ++k) {
    dist_sq[k] = norm_sq(points_[k] - x);
    if (dist_sq[k] < dist_sq[best]) best = k;
  }
  const double d_best = std::sqrt(dist_sq[best]);
  double d_max = 0.0;
  for (int k = 0; k < n; ++k) d_max = std::max(d_max, dist_sq[k]);
  if (std::sqrt(d_max) - d_best < 1e-9 * scale)
    throw NumericalError(ErrorCode::AmbiguousProjection,
                         "boundary is equidistant from the query point");
  // Another local minimum at projection-tolerance depth => ambiguous.
  for (int k = 0; k < n; ++k) {
    const int prev = (k + n - 1) % n, next = (k + 1) % n;
    if (dist_sq[k] <= dist_sq[prev] && dist_sq[k] <= dist_sq[next]) {
      int sep = std::abs(k - best);
      sep = std::min(sep, n - sep);
      if (sep > 8 && std::sqrt(dist_sq[k]) - d_best < 1e-8 * scale)
        throw NumericalError(ErrorCode::AmbiguousProjection,
                             "multiple nearest-boundary candidates");
    }
  }

  // Newton on g(theta) = (x - p(theta)) . x'(theta) = 0.
  double theta = kTwoPi * best / n;
  bool converged = false;
  for (int iter = 0; iter < 50; ++iter) {
    const double rho = radius_.value(theta), d1 = radius_.deriv(theta),
                 d2 = radius_.deriv2(theta);
    const Vec2 u = unit_vector(theta), up = perp(u);
    const Vec2 p = center_ + rho * u;
    const Vec2 xp = d1 * u + rho * up;                       // dp/dtheta
    const Vec2 xpp = (d2 - rho) * u + 2.0 * d1 * up;         // d2p/dtheta2
    const Vec2 diff = x - p;
    const double g = dot(diff, xp);
    const double dg = -norm_sq(xp) + dot(diff, xpp);
    if (dg == 0.0) break;
    const double step = g / dg;
    theta -= step;
    if (std::abs(step) < 1e-13) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NumericalError(ErrorCode::AmbiguousProjection,
                         "projection Newton iteration did not converge");
  theta = wrap_angle(theta);
  const Vec2 p = point_at_angle(theta);
  const Vec2 nrm = outward_normal_at_angle(theta);
  const double r = dot(p - x, nrm);
  if (std::abs(std::abs(r) - norm(x - p)) > 1e-9 * scale)
    throw NumericalError(ErrorCode::AmbiguousProjection,
                         "projection is not along the boundary normal");
  if (max_abs_curvature_ > 0.0 &&
      std::abs(r) >= (1.0 - 1e-9) / max_abs_curvature_)
    throw NumericalError(ErrorCode::AmbiguousProjection,
                         "point lies in the focal region of the boundary");
  return {arclength_from_angle(theta), r};
}

double BoundaryCurve::ray_distance(const Vec2& x, double direction) const {
  const Vec2 e = unit_vector(direction);
  auto miss = [&](double t) {
    // signed radial miss distance: |x + t e - c| - rho(angle)
    const Vec2 v = x + t * e - center_;
    const double q = norm(v);
    const double phi = std::atan2(v.y, v.x);
    return q - radius_.value(phi);
  };
  if (miss(0.0) >= 0.0)
    throw ValidationError(ErrorCode::InvalidCurve,
                          "ray_distance requires a strictly interior point");
  // Bracket the crossing by marching outward.
  double rho_min = radius_.a0;
  for (int k = 0; k < 64; ++k)
    rho_min = std::min(rho_min, radius_.value(kTwoPi * k / 64));
  const double step = std::max(rho_min / 2.0, 1e-6 * diameter_);
  double t_lo = 0.0, t_hi = 0.0;
  bool bracketed = false;
  for (double t = step; t <= 4.0 * diameter_ + step; t += step) {
    if (miss(t) >= 0.0) {
      t_lo = t - step;
      t_hi = t;
      bracketed = true;
      break;
    }
  }
  if (!bracketed)
    throw NumericalError(ErrorCode::NoIntersection,
                         "ray does not cross the boundary (star shape violated)");
  // Safeguarded Newton within the bracket.
  double t = 0.5 * (t_lo + t_hi);
  for (int iter = 0; iter < 100; ++iter) {
    const Vec2 v = x + t * e - center_;
    const double q = norm(v);
    const double phi = std::atan2(v.y, v.x);
    const double f = q - radius_.value(phi);
    if (f > 0.0)
      t_hi = t;
    else
      t_lo = t;
    const double dphi_dt = cross(v, e) / (q * q);
    const double df = dot(v, e) / q - radius_.deriv(phi) * dphi_dt;
    double t_next = (df != 0.0) ? t - f / df : 0.5 * (t_lo + t_hi);
    if (!(t_next > t_lo && t_next < t_hi)) t_next = 0.5 * (t_lo + t_hi);
    if (std::abs(t_next - t) < 1e-14 * (1.0 + t)) {
      t = t_next;
      break;
    }
    t = t_next;
  }
  return t;
}

double BoundaryCurve::tubular_jacobian(double s, double r) const {
  const double kappa = curvature(s);
  if (kappa != 0.0 && std::abs(r) >= 1.0 / std::abs(kappa))
    throw ValidationError(ErrorCode::OutOfBand,
                          "|r| exceeds the tubular band width 1/|kappa|");
  // Area element for x = p(s) - r n(s) with r > 0 inside and kappa = +1/R on
  // a counterclockwise circle: dn/ds = kappa tau gives dx/ds = (1 - kappa r) tau.
  return 1.0 - kappa * r;
}

Vec2 BoundaryCurve::reconstruct(const TubularPoint& tp) const {
  return point(tp.s) - tp.r * outward_normal(tp.s);
}

// ---------------------------------------------------------------------------
// FlowField
// ---------------------------------------------------------------------------

FlowField FlowField::translation(const Vec2& c) {
  FlowField f;
  f.eval_ = [c](const Vec2&) { return c; };
  f.const_divergence_ = 0.0;
  return f;
}

FlowField FlowField::dilation() {
  FlowField f;
  f.eval_ = [](const Vec2& x) { return x; };
  f.const_divergence_ = 2.0;
  return f;
}

FlowField FlowField::normal_perturbation(const Vec2& center,
                                         std::vector<Mode> modes,
                                         double taper_radius) {
  FlowField f;
  f.eval_ = [center, modes = std::move(modes), taper_radius](const Vec2& x) {
    const Vec2 v = x - center;
    const double q = norm(v);
    if (q == 0.0) return Vec2{0.0, 0.0};
    const double phi = std::atan2(v.y, v.x);
    double g = 0.0;
    for (const auto& mode : modes)
      g += mode.amp_cos * std::cos(mode.m * phi) +
           mode.amp_sin * std::sin(mode.m * phi);
    const double taper =
        taper_radius > 0.0 ? std::min(1.0, q / taper_radius) : 1.0;
    return (g * taper / q) * v;
  };
  return f;
}

FlowField FlowField::sampled(std::function<Vec2(const Vec2&)> fn) {
  FlowField f;
  f.eval_ = std::move(fn);
  return f;
}

double FlowField::divergence(const Vec2& x) const {
  if (const_divergence_) return *const_divergence_;
  const double h = 1e-5 * (1.0 + norm(x));
  const Vec2 dx = eval_({x.x + h, x.y}) - eval_({x.x - h, x.y});
  const Vec2 dy = eval_({x.x, x.y + h}) - eval_({x.x, x.y - h});
  return (dx.x + dy.y) / (2.0 * h);
}

FlowField FlowField::negated() const {
  FlowField f;
  const auto inner = eval_;
  f.eval_ = [inner](const Vec2& x) { return -inner(x); };
  if (const_divergence_) f.const_divergence_ = -*const_divergence_;
  return f;
}

// ---------------------------------------------------------------------------
// Transport
// ---------------------------------------------------------------------------

namespace {

Vec2 rk4_advance(const FlowField& zeta, Vec2 x, double t, int steps) {
  const double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    const Vec2 k1 = zeta(x);
    const Vec2 k2 = zeta(x + 0.5 * h * k1);
    const Vec2 k3 = zeta(x + 0.5 * h * k2);
    const Vec2 k4 = zeta(x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

}  // namespace

TransportResult flow_transport(const BoundaryCurve& curve, const FlowField& zeta,
                               double t, int steps) {
  if (steps < 1)
    throw ValidationError(ErrorCode::InvalidConfig, "steps must be >= 1");
  const int K = curve.radius().order();
  const int m = std::max(256, 16 * (K + 1));
  // Advance boundary samples and the star center under the same flow (keeps
  // translations exactly representable).
  const Vec2 new_center = rk4_advance(zeta, curve.center(), t, steps);
  std::vector<double> phi(m), rho(m);
  double winding = 0.0, prev_phi = 0.0;
  for (int i = 0; i < m; ++i) {
    const Vec2 y =
        rk4_advance(zeta, curve.point_at_angle(kTwoPi * i / m), t, steps);
    const Vec2 v = y - new_center;
    rho[i] = norm(v);
    if (rho[i] <= 0.0)
      throw NumericalError(ErrorCode::StarShapeLost,
                           "transported boundary touches the center");
    phi[i] = std::atan2(v.y, v.x);
    if (i > 0) {
      double d = phi[i] - prev_phi;
      while (d > M_PI) d -= kTwoPi;
      while (d < -M_PI) d += kTwoPi;
      winding += d;
    }
    prev_phi = phi[i];
  }
  {
    double d = phi[0] - prev_phi;
    while (d > M_PI) d -= kTwoPi;
    while (d < -M_PI) d += kTwoPi;
    winding += d;
  }
  if (std::abs(winding - kTwoPi) > 1e-6)
    throw NumericalError(ErrorCode::StarShapeLost,
                         "transported boundary winds incorrectly about center");

  // Least-squares Fourier re-fit of the transported radius, same order K.
  const int ncols = 2 * K + 1;
  Eigen::MatrixXd design(m, ncols);
  Eigen::VectorXd target(m);
  for (int i = 0; i < m; ++i) {
    design(i, 0) = 1.0;
    for (int k = 1; k <= K; ++k) {
      design(i, 2 * k - 1) = std::cos(k * phi[i]);
      design(i, 2 * k) = std::sin(k * phi[i]);
    }
    target(i) = rho[i];
  }
  const Eigen::VectorXd coeffs =
      design.colPivHouseholderQr().solve(target);
  double residual = 0.0;
  for (int i = 0; i < m; ++i)
    residual = std::max(residual,
                        std::abs((design.row(i) * coeffs)(0, 0) - target(i)));

  FourierRadius refit;
  refit.a0 = coeffs(0);
  refit.cos_coeffs.resize(K);
  refit.sin_coeffs.resize(K);
  for (int k = 1; k <= K; ++k) {
    refit.cos_coeffs[k - 1] = coeffs(2 * k - 1);
    refit.sin_coeffs[k - 1] = coeffs(2 * k);
  }
  try {
    return {BoundaryCurve(new_center, std::move(refit), curve.sample_count()),
            residual};
  } catch (const ValidationError&) {
    throw NumericalError(ErrorCode::StarShapeLost,
                         "re-fit radius is not strictly positive");
  }
}

double flow_jacobian(const FlowField& zeta, const Vec2& x, double t, int steps) {
  // Co-integrate z = log j along the trajectory: dz/dt = div zeta(x(t)).
  const double h = t / steps;
  Vec2 p = x;
  double z = 0.0;
  for (int i = 0; i < steps; ++i) {
    const Vec2 k1 = zeta(p);
    const double d1 = zeta.divergence(p);
    const Vec2 p2 = p + 0.5 * h * k1;
    const Vec2 k2 = zeta(p2);
    const double d2 = zeta.divergence(p2);
    const Vec2 p3 = p + 0.5 * h * k2;
    const Vec2 k3 = zeta(p3);
    const double d3 = zeta.divergence(p3);
    const Vec2 p4 = p + h * k3;
    const Vec2 k4 = zeta(p4);
    const double d4 = zeta.divergence(p4);
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    z += (h / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
  }
  return std::exp(z);
}

}  // namespace fracshape
