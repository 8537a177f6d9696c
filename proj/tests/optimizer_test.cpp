#include <cmath>

#include "doctest.h"
#include "fracshape/errors.hpp"
#include "fracshape/kernel.hpp"
#include "fracshape/optimizer.hpp"
#include "support/oracles.hpp"

using namespace fracshape;
using namespace fracshape::testing;

namespace {

BoundaryCurve wobble_curve(double amp) {
  FourierRadius rho;
  rho.a0 = 1.0;
  rho.cos_coeffs = {0.0, 0.0, amp};
  return BoundaryCurve({0.0, 0.0}, rho);
}

}  // namespace

TEST_CASE("descent direction vanishes on a constant profile") {
  TraceProfile flat;
  flat.s_nodes = {0.0, 1.75, 3.5, 5.25};
  flat.psi0 = {2.0, 2.0, 2.0, 2.0};
  flat.length = 7.0;
  const DescentDirection dir = descent_direction(flat, make_disk());
  CHECK(dir.v_inf == 0.0);
  CHECK(dir.predicted_dj == 0.0);
  CHECK(dir.lambda == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("descent direction is zero-mean with nonpositive predicted decrease") {
  const SolutionField sol =
      solve_dirichlet(make_ellipse(1.3, 1.0), unit_source(), {}, "one");
  const TraceProfile profile = extract_psi0(sol);
  const DescentDirection dir = descent_direction(profile, sol.curve());
  double sum = 0.0, sum_sq = 0.0;
  for (double v : dir.v) {
    sum += v;
    sum_sq += v * v;
  }
  const std::size_t n = dir.v.size();
  CHECK(std::abs(sum / static_cast<double>(n)) < 1e-10 * dir.v_inf);
  CHECK(dir.predicted_dj <= 0.0);
  // First-variation identity: with int V = 0 the predicted decrease per unit
  // step is c0 * int V^2 ds.
  const double expected =
      constant_c0() * profile.length * sum_sq / static_cast<double>(n);
  CHECK(dir.predicted_dj == doctest::Approx(expected).epsilon(1e-10));
  CHECK(dir.v_inf > 0.01);  // a 1.3-aspect ellipse is genuinely non-critical
}

TEST_CASE("roundness separates disks from ellipses") {
  CHECK(roundness(make_disk()) < 1e-10);
  CHECK(roundness(make_disk(0.75, {0.3, -0.4})) < 1e-9);
  CHECK(roundness(make_ellipse(1.3, 1.0)) > 0.05);
}

TEST_CASE("rescale to unit area is exact, multiplicative, and idempotent") {
  const BoundaryCurve ellipse = make_ellipse(1.3, 1.0);
  const BoundaryCurve scaled = rescale_to_unit_area(ellipse);
  CHECK(scaled.area() == doctest::Approx(1.0).epsilon(1e-12));
  const double factor = scaled.radius().a0 / ellipse.radius().a0;
  for (std::size_t k = 0; k < ellipse.radius().cos_coeffs.size(); ++k)
    CHECK(scaled.radius().cos_coeffs[k] ==
          doctest::Approx(factor * ellipse.radius().cos_coeffs[k]).epsilon(1e-13));
  const BoundaryCurve twice = rescale_to_unit_area(scaled);
  CHECK(std::abs(twice.radius().a0 - scaled.radius().a0) < 1e-13);
}

TEST_CASE("the unit-area disk is a fixed point of the descent") {
  const double r = 1.0 / std::sqrt(M_PI);
  OptimizeParams params;
  params.tol_dj = 1e-3;
  const OptimizationResult result = optimize(make_disk(r), params);
  CHECK(result.converged);
  CHECK(result.history.size() == 1);
  CHECK(result.history.back().step == 0.0);
  CHECK(std::abs(result.curve.radius().a0 - r) < 1e-9);
  CHECK(result.solution.has_value());
  CHECK(result.profile.has_value());
}

TEST_CASE("descent from a wobbled disk reaches the round minimizer") {
  const OptimizationResult result = optimize(wobble_curve(0.15), {});
  REQUIRE(result.converged);
  REQUIRE(result.history.size() >= 2);

  const double j_target = -2.0 / (3.0 * std::pow(M_PI, 1.5));
  const OptimizationRecord& final = result.history.back();
  CHECK(std::abs(final.j - j_target) < 0.005 * std::abs(j_target));
  CHECK(final.roundness < 0.02);
  CHECK(final.serrin < 0.02);
  CHECK(final.step == 0.0);

  for (std::size_t i = 0; i < result.history.size(); ++i) {
    const OptimizationRecord& rec = result.history[i];
    CHECK(rec.area == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rec.predicted_dj <= 0.0);
    if (i + 1 < result.history.size()) {
      const OptimizationRecord& next = result.history[i + 1];
      CHECK(rec.step > 0.0);
      // The accepted step satisfied the backtracking decrease condition.
      CHECK(next.j <= rec.j + 0.1 * rec.step * rec.predicted_dj + 1e-14);
      CHECK(next.j <= rec.j + 1e-9);
    }
  }
}

TEST_CASE("serrin tolerance stops the descent early") {
  OptimizeParams params;
  params.tol_serrin = 0.02;
  const OptimizationResult result =
      optimize(make_ellipse(1.3, 1.0), params);
  CHECK(result.converged);
  CHECK(result.history.size() >= 2);
  CHECK(result.history.size() <= 6);
  CHECK(result.history.back().serrin < 0.02);
  for (std::size_t i = 0; i + 1 < result.history.size(); ++i)
    CHECK(result.history[i].serrin >= 0.02);
}

TEST_CASE("an exhausted line search on a clearly non-optimal domain fails loudly") {
  OptimizeParams params;
  params.step0 = 100.0;
  params.max_halvings = 0;
  params.solver.k_rad = 4;
  params.solver.k_ang = 3;
  params.solver.quad = {32, 16, 16, 12, 2.0};
  CHECK_THROWS_AS(optimize(wobble_curve(0.15), params), NumericalError);
}

TEST_CASE("nearly tangential boundary rays are rejected") {
  FourierRadius rho;
  rho.a0 = 1.0;
  rho.cos_coeffs.assign(12, 0.0);
  rho.cos_coeffs[11] = 0.45;
  const BoundaryCurve spiky({0.0, 0.0}, rho);
  OptimizeParams params;
  params.solver.k_rad = 3;
  params.solver.k_ang = 2;
  params.solver.quad = {32, 16, 16, 12, 2.0};
  // The window must stay inside the curvature band (1/max|kappa| ~ 4.7e-3
  // here) so that the ray-alignment guard, not the band check, rejects.
  params.trace.r_min = 2e-4;
  params.trace.r_max = 2e-3;
  params.trace.n_samples = 8;
  params.tol_dj = 1e-12;
  CHECK_THROWS_AS(optimize(spiky, params), NumericalError);
}
