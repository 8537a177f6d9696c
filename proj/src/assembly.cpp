#include "fracshape/assembly.hpp"

#include <cmath>
#include <vector>

#include "fracshape/errors.hpp"
#include "fracshape/kernel.hpp"
#include "fracshape/parallel.hpp"
#include "fracshape/quadrature.hpp"

namespace fracshape {

WeightedBasis::WeightedBasis(BoundaryCurve curve, int k_rad, int k_ang)
    : curve_(std::move(curve)), k_rad_(k_rad), k_ang_(k_ang) {
  if (k_rad_ < 0 || k_ang_ < 0)
    throw ValidationError(ErrorCode::InvalidConfig,
                          "basis orders must be nonnegative");
}

void WeightedBasis::eval_all(const Vec2& x, Eigen::VectorXd& out) const {
  out.resize(size());
  const Vec2 v = x - curve_.center();
  const double q2 = norm_sq(v);
  double theta = 0.0, xi = 0.0;
  if (q2 > 0.0) {
    theta = std::atan2(v.y, v.x);
    xi = std::sqrt(q2) / curve_.radius_at(theta);
  }
  if (xi >= 1.0) {
    out.setZero();
    return;
  }
  const double weight = std::sqrt(1.0 - xi * xi);
  const double t = 2.0 * xi * xi - 1.0;

  // radial factors: weight * T_j(t) by the Chebyshev recurrence
  double tj_prev = 1.0, tj = t;
  std::vector<double> radial(static_cast<std::size_t>(k_rad_) + 1);
  for (int j = 0; j <= k_rad_; ++j) {
    if (j == 0)
      radial[j] = weight;
    else if (j == 1)
      radial[j] = weight * t;
    else {
      const double tj_next = 2.0 * t * tj - tj_prev;
      tj_prev = tj;
      tj = tj_next;
      radial[j] = weight * tj;
    }
  }
  // angular factors via the rotation recurrence
  const double c1 = std::cos(theta), s1 = std::sin(theta);
  double cm = 1.0, sm = 0.0;  // cos(m theta), sin(m theta) at m = 0
  for (int mode = 0; mode <= 2 * k_ang_; ++mode) {
    double ang;
    if (mode == 0) {
      ang = 1.0;
    } else {
      if (mode % 2 == 1) {  // advance to the next m on the cos entry
        const double cn = cm * c1 - sm * s1;
        const double sn = sm * c1 + cm * s1;
        cm = cn;
        sm = sn;
        ang = cm;
      } else {
        ang = sm;
      }
    }
    for (int j = 0; j <= k_rad_; ++j)
      out[index(mode, j)] = radial[j] * ang;
  }
}

double WeightedBasis::evaluate(const Eigen::VectorXd& coeffs,
                               const Vec2& x) const {
  Eigen::VectorXd vals;
  eval_all(x, vals);
  return coeffs.dot(vals);
}

double exterior_kernel(const BoundaryCurve& curve, const Vec2& x, int n_theta) {
  if (n_theta < 4)
    throw ValidationError(ErrorCode::InvalidConfig, "n_theta must be >= 4");
  double sum = 0.0;
  for (int k = 0; k < n_theta; ++k)
    sum += 1.0 / curve.ray_distance(x, 2.0 * M_PI * k / n_theta);
  return sum * 2.0 * M_PI / n_theta;
}

DomainQuadrature domain_quadrature(const BoundaryCurve& curve,
                                   const QuadratureConfig& quad) {
  DomainQuadrature grid;
  const QuadRule angles = periodic_trapezoid(quad.n_outer_theta);
  const QuadRule radial =
      graded_rule(0.0, 1.0, quad.n_outer_rho, quad.gamma, quad.gamma);
  grid.points.reserve(angles.size() * radial.size());
  grid.weights.reserve(angles.size() * radial.size());
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const double phi = angles.x[a];
    const double rho = curve.radius_at(phi);
    const Vec2 dir = unit_vector(phi);
    for (std::size_t r = 0; r < radial.size(); ++r) {
      const double q = radial.x[r];
      grid.points.push_back(curve.center() + (q * rho) * dir);
      grid.weights.push_back(angles.w[a] * radial.w[r] * q * rho * rho);
    }
  }
  return grid;
}

namespace {

void validate(const QuadratureConfig& quad) {
  if (quad.n_outer_theta < 4 || quad.n_outer_rho < 4 ||
      quad.n_inner_theta < 4 || quad.n_inner_rho < 4)
    throw ValidationError(ErrorCode::InvalidConfig,
                          "quadrature sizes must be >= 4");
  if (quad.gamma < 1.0 || quad.gamma > 4.0)
    throw ValidationError(ErrorCode::InvalidConfig,
                          "grading exponent must lie in [1, 4]");
}

}  // namespace

GalerkinSystem assemble(const WeightedBasis& basis, const SourceField& f,
                        const QuadratureConfig& quad) {
  validate(quad);
  const BoundaryCurve& curve = basis.curve();
  const int n = basis.size();
  const double c1 = constant_c1();
  const DomainQuadrature outer = domain_quadrature(curve, quad);
  const int n_nodes = static_cast<int>(outer.points.size());
  const QuadRule inner_angles = periodic_trapezoid(quad.n_inner_theta);
  const int n_ext = 2 * quad.n_inner_theta;

  // Fixed chunk partition, independent of the thread count, so the reduction
  // order (and hence every bit of the result) is reproducible.
  const int n_chunks = std::min(64, n_nodes);
  std::vector<Eigen::MatrixXd> a_part(n_chunks);
  std::vector<Eigen::VectorXd> b_part(n_chunks);

  parallel_chunks(n_chunks, [&](int chunk) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd bx(n), by(n), diff(n);
    const int lo = static_cast<int>(static_cast<long long>(n_nodes) * chunk / n_chunks);
    const int hi =
        static_cast<int>(static_cast<long long>(n_nodes) * (chunk + 1) / n_chunks);
    for (int node = lo; node < hi; ++node) {
      const Vec2 x = outer.points[node];
      const double wx = outer.weights[node];
      basis.eval_all(x, bx);

      // killing term + load
      const double k_ext = exterior_kernel(curve, x, n_ext);
      a.noalias() += (c1 * wx * k_ext) * bx * bx.transpose();
      b.noalias() += (wx * f(x)) * bx;

      // interior double integral, polar about x
      for (std::size_t ia = 0; ia < inner_angles.size(); ++ia) {
        const double alpha = inner_angles.x[ia];
        const double big_r = curve.ray_distance(x, alpha);
        const Vec2 dir = unit_vector(alpha);
        const QuadRule radial =
            graded_rule(0.0, big_r, quad.n_inner_rho, quad.gamma, quad.gamma);
        for (std::size_t ir = 0; ir < radial.size(); ++ir) {
          const double r = radial.x[ir];
          basis.eval_all(x + r * dir, by);
          diff = bx - by;
          const double w = 0.5 * c1 * wx * inner_angles.w[ia] * radial.w[ir] /
                           (r * r);
          if (!std::isfinite(w))
            throw NumericalError(ErrorCode::AssemblyFailed,
                                 "non-finite quadrature weight");
          a.noalias() += w * diff * diff.transpose();
        }
      }
    }
    a_part[chunk] = std::move(a);
    b_part[chunk] = std::move(b);
  });

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (int chunk = 0; chunk < n_chunks; ++chunk) {
    a += a_part[chunk];
    b += b_part[chunk];
  }
  if (!a.allFinite() || !b.allFinite())
    throw NumericalError(ErrorCode::AssemblyFailed,
                         "non-finite entries in the assembled system");

  const double defect = (a - a.transpose()).norm() / std::max(a.norm(), 1e-300);
  Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  return {basis, std::move(sym), std::move(b), quad, defect};
}

}  // namespace fracshape
