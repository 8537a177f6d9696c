#include "fracshape/optimizer.hpp"

#include <cmath>

#include "fracshape/errors.hpp"
#include "fracshape/kernel.hpp"

namespace fracshape {

DescentDirection descent_direction(const TraceProfile& profile,
                                   const BoundaryCurve& curve) {
  (void)curve;
  const int n = static_cast<int>(profile.psi0.size());
  if (n == 0)
    throw ValidationError(ErrorCode::InvalidConfig, "empty trace profile");
  if (!(profile.mean() > 0.0))
    throw NumericalError(ErrorCode::DegenerateProfile,
                         "trace profile mean is not positive");
  DescentDirection dir;
  dir.v.resize(n);
  double mean2 = 0.0, mean4 = 0.0;
  for (double p : profile.psi0) {
    const double p2 = p * p;
    mean2 += p2;
    mean4 += p2 * p2;
  }
  mean2 /= n;
  mean4 /= n;
  dir.lambda = mean2;
  for (int i = 0; i < n; ++i) {
    dir.v[i] = profile.psi0[i] * profile.psi0[i] - dir.lambda;
    dir.v_inf = std::max(dir.v_inf, std::abs(dir.v[i]));
  }
  dir.predicted_dj = constant_c0() * profile.length * (mean4 - mean2 * mean2);
  return dir;
}

double roundness(const BoundaryCurve& curve) {
  const int n = curve.sample_count();
  // area centroid: center + (1/A) oint rho^3/3 e_r dphi
  Vec2 first_moment{0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    const double phi = 2.0 * M_PI * i / n;
    const double rho = curve.radius_at(phi);
    first_moment += (rho * rho * rho / 3.0) * unit_vector(phi);
  }
  const Vec2 centroid =
      curve.center() + (2.0 * M_PI / n / curve.area()) * first_moment;
  double mean = 0.0;
  std::vector<double> dist(n);
  for (int i = 0; i < n; ++i) {
    dist[i] = norm(curve.point_at_angle(2.0 * M_PI * i / n) - centroid);
    mean += dist[i];
  }
  mean /= n;
  double var = 0.0;
  for (double d : dist) var += (d - mean) * (d - mean);
  return std::sqrt(var / n) / mean;
}

BoundaryCurve rescale_to_unit_area(const BoundaryCurve& curve) {
  const double scale = 1.0 / std::sqrt(curve.area());
  FourierRadius radius = curve.radius();
  radius.a0 *= scale;
  for (double& c : radius.cos_coeffs) c *= scale;
  for (double& c : radius.sin_coeffs) c *= scale;
  return BoundaryCurve(curve.center(), std::move(radius), curve.sample_count());
}

namespace {

double interp_periodic(const std::vector<double>& values, double length,
                       double s) {
  const int n = static_cast<int>(values.size());
  const double ds = length / n;
  const double u = s / ds;
  double frac = u - std::floor(u);
  int i = static_cast<int>(std::floor(u)) % n;
  if (i < 0) i += n;
  return (1.0 - frac) * values[i] + frac * values[(i + 1) % n];
}

/// rho_new = trunc_K(rho) + proj_K(t V / (e_r . n)), rescaled to unit area.
BoundaryCurve apply_step(const BoundaryCurve& curve, const TraceProfile& profile,
                         const std::vector<double>& v, double t, int order) {
  const int m = std::max(256, 16 * (order + 1));
  std::vector<double> delta(m);
  for (int i = 0; i < m; ++i) {
    const double theta = 2.0 * M_PI * i / m;
    const double s = curve.arclength_from_angle(theta);
    const double rho = curve.radius_at(theta);
    const double drho = curve.radius().deriv(theta);
    const double ray_normal = rho / std::sqrt(rho * rho + drho * drho);
    delta[i] = t * interp_periodic(v, profile.length, s) / ray_normal;
  }
  FourierRadius radius;
  radius.a0 = curve.radius().a0;
  radius.cos_coeffs.assign(order, 0.0);
  radius.sin_coeffs.assign(order, 0.0);
  for (int k = 1; k <= order; ++k) {
    if (k <= static_cast<int>(curve.radius().cos_coeffs.size()))
      radius.cos_coeffs[k - 1] = curve.radius().cos_coeffs[k - 1];
    if (k <= static_cast<int>(curve.radius().sin_coeffs.size()))
      radius.sin_coeffs[k - 1] = curve.radius().sin_coeffs[k - 1];
  }
  double a0 = 0.0;
  for (double d : delta) a0 += d;
  radius.a0 += a0 / m;
  for (int k = 1; k <= order; ++k) {
    double ak = 0.0, bk = 0.0;
    for (int i = 0; i < m; ++i) {
      const double theta = 2.0 * M_PI * i / m;
      ak += delta[i] * std::cos(k * theta);
      bk += delta[i] * std::sin(k * theta);
    }
    radius.cos_coeffs[k - 1] += 2.0 * ak / m;
    radius.sin_coeffs[k - 1] += 2.0 * bk / m;
  }
  return rescale_to_unit_area(
      BoundaryCurve(curve.center(), std::move(radius), curve.sample_count()));
}

}  // namespace

OptimizationResult optimize(const BoundaryCurve& curve0,
                            const OptimizeParams& params, const SourceField& f) {
  const SourceField source = f ? f : SourceField([](const Vec2&) { return 1.0; });
  BoundaryCurve curve = rescale_to_unit_area(curve0);
  std::optional<SolutionField> sol;
  OptimizationResult result{{}, curve, std::nullopt, std::nullopt, false};

  for (int iter = 0;; ++iter) {
    if (!sol) sol = solve_dirichlet(curve, source, params.solver);
    const double j = energy(*sol);
    TraceProfile profile = extract_psi0(*sol, params.trace);
    const double serrin = serrin_residual(profile);
    const DescentDirection dir = descent_direction(profile, curve);

    result.history.push_back({iter, j, serrin, roundness(curve), 0.0,
                              dir.predicted_dj, curve.area()});
    result.curve = curve;
    result.solution = sol;
    result.profile = profile;

    if (std::abs(dir.predicted_dj) < params.tol_dj ||
        (params.tol_serrin > 0.0 && serrin < params.tol_serrin)) {
      result.converged = true;
      break;
    }
    if (iter >= params.max_iters) break;

    // Near-tangential rays make the normal-to-radial conversion unstable.
    double min_ray_normal = 1.0;
    for (int i = 0; i < 256; ++i) {
      const double theta = 2.0 * M_PI * i / 256;
      const double rho = curve.radius_at(theta);
      const double drho = curve.radius().deriv(theta);
      min_ray_normal =
          std::min(min_ray_normal, rho / std::sqrt(rho * rho + drho * drho));
    }
    if (min_ray_normal <= params.min_ray_normal)
      throw NumericalError(ErrorCode::StarShapeLost,
                           "boundary rays are nearly tangential");

    bool accepted = false;
    double t = params.step0;
    for (int halving = 0; halving <= params.max_halvings; ++halving) {
      bool valid = true;
      BoundaryCurve trial = curve;
      try {
        trial = apply_step(curve, profile, dir.v, t, params.fourier_order);
      } catch (const ValidationError&) {
        valid = false;  // radius lost positivity; shrink the step
      }
      if (valid) {
        SolutionField trial_sol = solve_dirichlet(trial, source, params.solver);
        const double trial_j = energy(trial_sol);
        if (trial_j <= j + params.armijo_c * t * dir.predicted_dj) {
          result.history.back().step = t;
          curve = std::move(trial);
          sol = std::move(trial_sol);
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) {
      // Exhausted backtracking at the solver noise floor counts as
      // convergence; well above it, it is a genuine failure.
      if (std::abs(dir.predicted_dj) <= 10.0 * params.tol_dj) {
        result.converged = true;
        break;
      }
      throw NumericalError(ErrorCode::LineSearchFailed,
                           "no energy decrease after 20 halvings");
    }
  }
  return result;
}

}  // namespace fracshape
