#include "fracshape/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracshape/errors.hpp"
#include "fracshape/quadrature.hpp"

namespace fracshape {

double constant_c1() { return 1.0 / (2.0 * M_PI); }

namespace {

/// Stable integrand of the folded profile integral. Substituting z = t^2 in
/// int_0^inf ln z/((z-1) sqrt z) dz gives 4 int_0^inf ln t/(t^2-1) dt;
/// folding [1, inf) onto (0, 1] by t -> 1/t doubles the finite part, so the
/// value equals 8 int_0^1 (-ln t)/(1 - t^2) dt. The final substitution
/// t = exp(-u) trades the logarithmic endpoint for an analytic integrand
/// u e^{-u}/(1 - e^{-2u}) with exponential decay, on which the adaptive
/// rule's error estimate is reliable.
double profile_integrand(double u) {
  if (u < 1e-300) return 0.5;
  return std::exp(-u) * u / -std::expm1(-2.0 * u);
}

double compute_i0() {
  // exp(-2u) underflows the integrand's tail well before u = 40; the
  // truncated remainder is below 1e-15.
  const AdaptiveResult r =
      integrate_adaptive(profile_integrand, 0.0, 40.0, 1e-12, 1e-14, 4000);
  if (r.error > 1e-10)
    throw NumericalError(ErrorCode::QuadratureNotConverged,
                         "profile integral error estimate too large");
  return 8.0 * r.value;
}

}  // namespace

double constant_i0() {
  static const double value = compute_i0();
  return value;
}

double phi(double xi) {
  if (std::isinf(xi)) return 1.0;
  if (xi < 0.0)
    throw ValidationError(ErrorCode::InvalidConfig, "phi requires xi >= 0");
  return xi / std::sqrt(1.0 + xi * xi);
}

double constant_c0() {
  static const double value =
      -constant_c1() * constant_i0() *
      phi(std::numeric_limits<double>::infinity()) / 4.0;
  return value;
}

KernelConstants kernel_constants() {
  return {constant_c1(), constant_i0(),
          phi(std::numeric_limits<double>::infinity()), constant_c0()};
}

// ---------------------------------------------------------------------------
// Pointwise singular integral
// ---------------------------------------------------------------------------

namespace {

double pointwise_core(const ScalarField& f, const Vec2& x, int n_theta,
                      int n_rho, double gamma, double r_cut) {
  const double fx = f.value(x);
  const Vec2 gx = f.gradient(x);
  double sum = 0.0;
  for (int k = 0; k < n_theta; ++k) {
    const double theta = 2.0 * M_PI * k / n_theta;
    const Vec2 e = unit_vector(theta);
    const double ge = dot(gx, e);

    std::vector<double> cuts;
    if (f.ray_breakpoints) {
      for (double b : f.ray_breakpoints(x, e))
        if (b > 0.0 && b < r_cut) cuts.push_back(b);
      std::sort(cuts.begin(), cuts.end());
    }
    cuts.push_back(r_cut);

    double ray = 0.0;
    double a = 0.0;
    for (std::size_t seg = 0; seg < cuts.size(); ++seg) {
      const double b = cuts[seg];
      const bool kink_left = seg > 0;
      const bool kink_right = seg + 1 < cuts.size();
      // Grade toward rho = 0 on the first segment and toward every interior
      // kink; the far end of the last segment is smooth.
      const QuadRule rule =
          graded_rule(a, b, n_rho, seg == 0 ? gamma : (kink_left ? gamma : 1.0),
                      kink_right ? gamma : 1.0);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const double rho = rule.x[q];
        // Regularized integrand (f(x) - f(y) + rho grad f(x).e) / rho^2;
        // the gradient term cancels between antipodal rays but keeps each
        // individual ray integrable at rho -> 0.
        const double val = (fx - f.value(x + rho * e) + rho * ge) / (rho * rho);
        ray += rule.w[q] * val;
      }
      a = b;
    }
    sum += ray * (2.0 * M_PI / n_theta);
  }
  // Monopole tail beyond the cutoff (f vanishes there): int_{rho>R} fx/rho^2.
  sum += fx * 2.0 * M_PI / r_cut;
  return constant_c1() * sum;
}

}  // namespace

double frac_laplacian_pointwise(const ScalarField& f, const Vec2& x,
                                const PointwiseQuad& quad) {
  if (quad.n_theta < 4 || quad.n_theta % 2 != 0)
    throw ValidationError(ErrorCode::InvalidConfig,
                          "n_theta must be even and >= 4");
  if (quad.n_rho < 4)
    throw ValidationError(ErrorCode::InvalidConfig, "n_rho must be >= 4");
  if (quad.gamma < 1.0 || quad.gamma > 4.0)
    throw ValidationError(ErrorCode::InvalidConfig, "gamma must lie in [1, 4]");
  const double r_cut = quad.cutoff_factor * (f.support_radius + norm(x));
  const double value =
      pointwise_core(f, x, quad.n_theta, quad.n_rho, quad.gamma, r_cut);
  if (quad.verify) {
    const double refined =
        pointwise_core(f, x, 2 * quad.n_theta, 2 * quad.n_rho, quad.gamma, r_cut);
    if (std::abs(refined - value) >
        quad.verify_tol * std::max(1.0, std::abs(refined)))
      throw NumericalError(ErrorCode::QuadratureNotConverged,
                           "doubling the quadrature moved the value");
  }
  return value;
}

// ---------------------------------------------------------------------------
// Half-space Poisson extension
// ---------------------------------------------------------------------------

namespace {

double solid_angle_term(double u, double v, double z) {
  return std::atan2(u * v, z * std::sqrt(u * u + v * v + z * z));
}

}  // namespace

double rectangle_solid_angle(const Vec2& lo, const Vec2& hi, const Vec2& x,
                             double z) {
  const double u0 = lo.x - x.x, u1 = hi.x - x.x;
  const double v0 = lo.y - x.y, v1 = hi.y - x.y;
  return solid_angle_term(u1, v1, z) - solid_angle_term(u0, v1, z) -
         solid_angle_term(u1, v0, z) + solid_angle_term(u0, v0, z);
}

double poisson_extension(const PlaneGrid& w, const Vec2& x, double z) {
  if (w.nx < 2 || w.ny < 2 ||
      w.values.size() != static_cast<std::size_t>(w.nx) * w.ny)
    throw ValidationError(ErrorCode::InvalidConfig,
                          "plane grid needs nx, ny >= 2 and nx*ny values");
  if (!(z > 0.0))
    throw ValidationError(ErrorCode::InvalidConfig,
                          "poisson_extension requires z > 0");
  const double dx = (w.hi.x - w.lo.x) / (w.nx - 1);
  const double dy = (w.hi.y - w.lo.y) / (w.ny - 1);
  const QuadRule& gl = gauss_legendre(4);
  double sum = 0.0;
  for (int j = 0; j + 1 < w.ny; ++j) {
    for (int i = 0; i + 1 < w.nx; ++i) {
      const double x0 = w.lo.x + i * dx, y0 = w.lo.y + j * dy;
      const double w00 = w.at(i, j), w10 = w.at(i + 1, j);
      const double w01 = w.at(i, j + 1), w11 = w.at(i + 1, j + 1);
      for (std::size_t qa = 0; qa < gl.size(); ++qa) {
        const double a = 0.5 * (gl.x[qa] + 1.0);  // in (0,1)
        const double tx = x0 + a * dx;
        for (std::size_t qb = 0; qb < gl.size(); ++qb) {
          const double b = 0.5 * (gl.x[qb] + 1.0);
          const double ty = y0 + b * dy;
          const double wv = (1.0 - a) * ((1.0 - b) * w00 + b * w01) +
                            a * ((1.0 - b) * w10 + b * w11);
          const double du = x.x - tx, dv = x.y - ty;
          const double r2 = du * du + dv * dv + z * z;
          const double kernel = z / (r2 * std::sqrt(r2));
          sum += 0.25 * gl.w[qa] * gl.w[qb] * dx * dy * wv * kernel;
        }
      }
    }
  }
  double result = sum / (2.0 * M_PI);
  if (w.far_value != 0.0)
    result +=
        w.far_value * (1.0 - rectangle_solid_angle(w.lo, w.hi, x, z) / (2.0 * M_PI));
  return result;
}

}  // namespace fracshape
