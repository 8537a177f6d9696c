#include "fracshape/trace.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "fracshape/errors.hpp"

namespace fracshape {

double TraceProfile::psi0_at(double s) const {
  const int n = static_cast<int>(s_nodes.size());
  const double ds = length / n;
  double u = s / ds;
  double frac = u - std::floor(u);
  int i = static_cast<int>(std::floor(u)) % n;
  if (i < 0) i += n;
  const int j = (i + 1) % n;
  return (1.0 - frac) * psi0[i] + frac * psi0[j];
}

double TraceProfile::mean() const {
  double m = 0.0;
  for (double v : psi0) m += v;
  return m / static_cast<double>(psi0.size());
}

double TraceProfile::stddev() const {
  const double m = mean();
  double var = 0.0;
  for (double v : psi0) var += (v - m) * (v - m);
  return std::sqrt(var / static_cast<double>(psi0.size()));
}

TraceProfile extract_psi0(const SolutionField& sol, const TraceOptions& opts) {
  if (opts.n_nodes < 4 || opts.n_samples < opts.model_order + 1 ||
      opts.model_order < 1 || opts.model_order > 4)
    throw ValidationError(ErrorCode::InvalidConfig,
                          "trace options out of range");
  const BoundaryCurve& curve = sol.curve();
  const double diam = curve.diameter();
  const double r_min = opts.r_min > 0.0 ? opts.r_min : 1e-3 * diam;
  const double r_max = opts.r_max > 0.0 ? opts.r_max : 0.05 * diam;
  if (!(r_min > 0.0) || !(r_max > r_min))
    throw ValidationError(ErrorCode::InvalidConfig,
                          "trace window must satisfy 0 < r_min < r_max");
  if (curve.max_abs_curvature() > 0.0 &&
      r_max >= 1.0 / curve.max_abs_curvature())
    throw ValidationError(ErrorCode::OutOfBand,
                          "trace window exceeds the tubular band");

  const int n = opts.n_nodes, m = opts.n_samples, p = opts.model_order;
  const double ratio = r_max / r_min;

  TraceProfile profile;
  profile.s_nodes.resize(n);
  profile.psi0.resize(n);
  profile.fit_residuals.resize(n);
  profile.r_min = r_min;
  profile.r_max = r_max;
  profile.length = curve.length();

  Eigen::MatrixXd design(m, p);
  Eigen::VectorXd rhs(m);
  std::vector<double> radii(m);
  for (int j = 0; j < m; ++j)
    radii[j] = r_min * std::pow(ratio, static_cast<double>(j) / (m - 1));
  for (int j = 0; j < m; ++j) {
    const double r = radii[j];
    const double sqrt_r = std::sqrt(r);
    double powers[4] = {sqrt_r, r, r * sqrt_r, r * r};
    for (int k = 0; k < p; ++k) design(j, k) = powers[k];
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cond = svd.singularValues()(0) /
                      svd.singularValues()(svd.singularValues().size() - 1);
  if (!(cond < 1e12))
    throw NumericalError(ErrorCode::IllConditionedFit,
                         "trace design matrix condition exceeds 1e12");

  for (int i = 0; i < n; ++i) {
    const double s = curve.length() * i / n;
    const Vec2 point = curve.point(s);
    const Vec2 normal = curve.outward_normal(s);
    for (int j = 0; j < m; ++j) rhs(j) = sol.evaluate(point - radii[j] * normal);
    const Eigen::VectorXd fit = svd.solve(rhs);
    profile.s_nodes[i] = s;
    profile.psi0[i] = fit(0);
    profile.fit_residuals[i] =
        (design * fit - rhs).norm() / std::sqrt(static_cast<double>(m));
  }
  return profile;
}

double serrin_residual(const TraceProfile& profile) {
  if (profile.psi0.empty())
    throw ValidationError(ErrorCode::InvalidConfig, "empty trace profile");
  const double m = profile.mean();
  if (!(m > 0.0))
    throw NumericalError(ErrorCode::DegenerateProfile,
                         "trace profile mean is not positive");
  return profile.stddev() / m;
}

}  // namespace fracshape
