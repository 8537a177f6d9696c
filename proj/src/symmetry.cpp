#include "fracshape/symmetry.hpp"

#include <algorithm>
#include <cmath>

#include "fracshape/errors.hpp"

namespace fracshape {

const char* contact_config_name(ContactConfig config) {
  switch (config) {
    case ContactConfig::InternalTangency:
      return "internal_tangency";
    case ContactConfig::Orthogonal:
      return "orthogonal";
    case ContactConfig::Simultaneous:
      return "simultaneous";
  }
  return "unknown";
}

namespace {

Vec2 reflect(const Vec2& x, double lambda, const Vec2& e) {
  return x + (2.0 * (lambda - dot(x, e))) * e;
}

/// Excess radial coordinate of x: positive iff x lies outside the domain.
double radial_excess(const BoundaryCurve& curve, const Vec2& x) {
  const Vec2 v = x - curve.center();
  const double q = norm(v);
  if (q == 0.0) return -curve.radius_at(0.0);
  return q - curve.radius_at(std::atan2(v.y, v.x));
}

}  // namespace

CriticalPosition critical_position(const BoundaryCurve& curve, const Vec2& e_in,
                                   int n_scan) {
  if (!(norm(e_in) > 0.0))
    throw ValidationError(ErrorCode::InvalidConfig, "zero direction");
  if (n_scan < 16)
    throw ValidationError(ErrorCode::InvalidConfig, "n_scan must be >= 16");
  const Vec2 e = normalized(e_in);
  const double diam = curve.diameter();
  const int n_dense = curve.sample_count();

  // abscissa range of the boundary along e, with parabolic refinement of the
  // first contact
  double lo_val = 0.0, hi_val = 0.0;
  int lo_idx = 0;
  for (int i = 0; i < n_dense; ++i) {
    const double a = dot(curve.point_at_angle(2.0 * M_PI * i / n_dense), e);
    if (i == 0 || a < lo_val) {
      lo_val = a;
      lo_idx = i;
    }
    hi_val = (i == 0) ? a : std::max(hi_val, a);
  }
  {
    const double h = 2.0 * M_PI / n_dense;
    const double theta = 2.0 * M_PI * lo_idx / n_dense;
    const double am = dot(curve.point_at_angle(theta - h), e);
    const double ap = dot(curve.point_at_angle(theta + h), e);
    const double denom = am - 2.0 * lo_val + ap;
    if (denom > 0.0)
      lo_val -= (am - ap) * (am - ap) / (8.0 * denom);
  }

  // Predicate: the reflected cap arc stays inside the domain.
  const double inside_tol = 1e-9 * diam;
  const auto arc_inside = [&](double lambda) {
    for (int i = 0; i < n_scan; ++i) {
      const Vec2 p = curve.point_at_angle(2.0 * M_PI * i / n_scan);
      if (dot(p, e) >= lambda) continue;
      if (!curve.contains(reflect(p, lambda, e), inside_tol)) return false;
    }
    return true;
  };

  double lo = lo_val, hi = hi_val;
  for (int iter = 0; iter < 80 && hi - lo > 1e-6 * diam; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (arc_inside(mid) ? lo : hi) = mid;
  }

  CriticalPosition result;
  result.lambda0 = lo_val;
  result.lambda = lo;

  // Contact analysis at the critical position: deepest reflected-arc points.
  double max_gap = -diam;
  Vec2 contact{};
  bool tangency = false;
  for (int i = 0; i < n_scan; ++i) {
    const Vec2 p = curve.point_at_angle(2.0 * M_PI * i / n_scan);
    if (dot(p, e) >= result.lambda) continue;
    const Vec2 mirrored = reflect(p, result.lambda, e);
    const double gap = radial_excess(curve, mirrored);
    if (gap > max_gap) {
      max_gap = gap;
      contact = mirrored;
    }
  }
  for (int i = 0; i < n_scan; ++i) {
    const Vec2 p = curve.point_at_angle(2.0 * M_PI * i / n_scan);
    if (dot(p, e) >= result.lambda) continue;
    const Vec2 mirrored = reflect(p, result.lambda, e);
    if (radial_excess(curve, mirrored) >= max_gap - 1e-6 * diam &&
        dot(mirrored, e) - result.lambda > 0.05 * diam)
      tangency = true;
  }
  result.contact_point = contact;
  result.contact_gap = max_gap;

  // Crossings of the plane with the boundary, and the normal there.
  double min_normal_dot = 1.0;
  for (int i = 0; i < n_dense; ++i) {
    const double t0 = 2.0 * M_PI * i / n_dense;
    const double t1 = 2.0 * M_PI * (i + 1) / n_dense;
    const double g0 = dot(curve.point_at_angle(t0), e) - result.lambda;
    const double g1 = dot(curve.point_at_angle(t1), e) - result.lambda;
    if (g0 == 0.0 || g0 * g1 >= 0.0) continue;
    double a = t0, b = t1;
    for (int k = 0; k < 60; ++k) {
      const double m = 0.5 * (a + b);
      const double gm = dot(curve.point_at_angle(m), e) - result.lambda;
      ((g0 < 0.0) == (gm < 0.0) ? a : b) = m;
    }
    const double dot_ne =
        std::abs(dot(curve.outward_normal_at_angle(0.5 * (a + b)), e));
    min_normal_dot = std::min(min_normal_dot, dot_ne);
  }
  result.crossing_normal_dot = min_normal_dot;
  const bool orthogonal = min_normal_dot < 1e-3;

  if (tangency && !orthogonal)
    result.config = ContactConfig::InternalTangency;
  else if (orthogonal && !tangency)
    result.config = ContactConfig::Orthogonal;
  else
    result.config = ContactConfig::Simultaneous;
  return result;
}

SymmetryReport reflection_difference(const SolutionField& sol, double lambda,
                                     const Vec2& e_in, int grid, double tol) {
  if (grid < 8)
    throw ValidationError(ErrorCode::InvalidConfig, "grid must be >= 8");
  const Vec2 e = normalized(e_in);
  const BoundaryCurve& curve = sol.curve();
  const double strict = -1e-9 * curve.diameter();
  const Vec2 lo = curve.bbox_lo(), hi = curve.bbox_hi();

  SymmetryReport report;
  report.e = e;
  report.lambda = lambda;
  report.grid = grid;

  double max_u = 0.0, w_min = 0.0, w_max_abs = 0.0;
  Vec2 w_min_at{};
  int cap_count = 0;
  std::vector<double> w_values;
  w_values.reserve(static_cast<std::size_t>(grid) * 4);
  bool have_min = false;
  for (int j = 0; j < grid; ++j) {
    for (int i = 0; i < grid; ++i) {
      const Vec2 x{lo.x + (hi.x - lo.x) * (i + 0.5) / grid,
                   lo.y + (hi.y - lo.y) * (j + 0.5) / grid};
      if (!curve.contains(x, strict)) continue;
      max_u = std::max(max_u, std::abs(sol.evaluate(x)));
      if (dot(x, e) <= lambda) continue;
      const Vec2 mirrored = reflect(x, lambda, e);
      if (!curve.contains(mirrored, strict)) continue;
      const double w = sol.evaluate(x) - sol.evaluate(mirrored);
      ++cap_count;
      w_values.push_back(w);
      w_max_abs = std::max(w_max_abs, std::abs(w));
      if (!have_min || w < w_min) {
        have_min = true;
        w_min = w;
        w_min_at = x;
      }
    }
  }
  if (cap_count == 0)
    throw NumericalError(ErrorCode::EmptyCap,
                         "no interior samples in the reflected cap");
  report.max_u = max_u;
  report.tol = tol > 0.0 ? tol : 1e-3 * max_u;
  report.w_min = w_min;
  report.w_min_location = w_min_at;
  report.w_max_abs = w_max_abs;
  report.cap_samples = cap_count;
  int negatives = 0;
  for (double w : w_values)
    if (w < -report.tol) ++negatives;
  report.negative_fraction = static_cast<double>(negatives) / cap_count;
  return report;
}

GrowthProbe growth_probe(const SolutionField& sol, double lambda,
                         const Vec2& e_in, const Vec2& start, const Vec2& dir_in,
                         double t_min, double t_max, int n_samples) {
  if (!(t_min > 0.0) || !(t_max > t_min) || n_samples < 4)
    throw ValidationError(ErrorCode::InvalidConfig, "bad probe window");
  const Vec2 e = normalized(e_in);
  const Vec2 dir = normalized(dir_in);

  GrowthProbe probe;
  probe.t.resize(n_samples);
  probe.w.resize(n_samples);
  double scale = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double t =
        t_min * std::pow(t_max / t_min, static_cast<double>(i) / (n_samples - 1));
    const Vec2 x = start + t * dir;
    const double u = sol.evaluate(x);
    probe.t[i] = t;
    probe.w[i] = u - sol.evaluate(reflect(x, lambda, e));
    scale = std::max(scale, std::abs(u));
  }
  double w_lo = probe.w[0], w_hi = probe.w[0];
  for (double w : probe.w) {
    w_lo = std::min(w_lo, w);
    w_hi = std::max(w_hi, w);
  }
  const double floor = 1e-9 * std::max(scale, 1e-300);
  if (std::max(std::abs(w_lo), std::abs(w_hi)) <= floor) {
    probe.degenerate = true;
    return probe;
  }
  if (w_lo < -floor && w_hi > floor)
    throw NumericalError(ErrorCode::SignChange,
                         "reflected difference changes sign along the ray");

  // log-log least squares
  const int n = n_samples;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    lx[i] = std::log(probe.t[i]);
    ly[i] = std::log(std::abs(probe.w[i]));
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double denom = n * sxx - sx * sx;
  probe.slope = (n * sxy - sx * sy) / denom;
  probe.intercept = (sy - probe.slope * sx) / n;
  double ss_res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ly[i] - (probe.intercept + probe.slope * lx[i]);
    ss_res += r * r;
  }
  const double var_x = sxx - sx * sx / n;
  probe.slope_stderr =
      n > 2 ? std::sqrt(ss_res / (n - 2) / std::max(var_x, 1e-300)) : 0.0;
  return probe;
}

}  // namespace fracshape
