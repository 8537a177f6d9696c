#include <cmath>

#include "doctest.h"
#include "fracshape/errors.hpp"
#include "fracshape/symmetry.hpp"
#include "support/oracles.hpp"

using namespace fracshape;
using namespace fracshape::testing;

namespace {

const SolutionField& disk_solution_default() {
  static const SolutionField sol =
      solve_dirichlet(make_disk(), unit_source(), {}, "one");
  return sol;
}

FourierRadius rotated_radius(const FourierRadius& rho, double alpha) {
  FourierRadius out;
  out.a0 = rho.a0;
  out.cos_coeffs.resize(rho.cos_coeffs.size());
  out.sin_coeffs.resize(rho.sin_coeffs.size());
  for (std::size_t i = 0; i < rho.cos_coeffs.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    const double a = rho.cos_coeffs[i];
    const double b = i < rho.sin_coeffs.size() ? rho.sin_coeffs[i] : 0.0;
    out.cos_coeffs[i] = a * std::cos(k * alpha) - b * std::sin(k * alpha);
    out.sin_coeffs[i] = a * std::sin(k * alpha) + b * std::cos(k * alpha);
  }
  return out;
}

}  // namespace

TEST_CASE("critical plane of the unit disk is the symmetry plane") {
  const CriticalPosition cp = critical_position(make_disk(), {1.0, 0.0});
  CHECK(std::abs(cp.lambda0 + 1.0) < 1e-6);
  CHECK(std::abs(cp.lambda) < 1e-5);
  CHECK(cp.config == ContactConfig::Simultaneous);
}

TEST_CASE("critical plane of an axis-aligned ellipse") {
  const CriticalPosition cp = critical_position(make_ellipse(1.3, 1.0), {1.0, 0.0});
  CHECK(std::abs(cp.lambda0 + 1.3) < 1e-4);
  CHECK(std::abs(cp.lambda) < 1e-5);
  CHECK(cp.crossing_normal_dot < 1e-3);
  CHECK(cp.config == ContactConfig::Simultaneous);
}

TEST_CASE("critical abscissa of a translated disk is the center coordinate") {
  const BoundaryCurve moved = make_disk(1.0, {0.3, -0.4});
  const struct {
    Vec2 e;
    double expected;
  } cases[] = {{{1.0, 0.0}, 0.3},
               {{0.0, 1.0}, -0.4},
               {{-1.0, 0.0}, -0.3},
               {{0.0, -1.0}, 0.4}};
  for (const auto& c : cases) {
    const CriticalPosition cp = critical_position(moved, c.e);
    CHECK(std::abs(cp.lambda - c.expected) < 1e-5);
  }
}

TEST_CASE("critical abscissa is covariant under rotation") {
  FourierRadius rho;
  rho.a0 = 1.0;
  rho.cos_coeffs = {0.05, 0.12};
  rho.sin_coeffs = {-0.08, 0.03};
  const BoundaryCurve curve({0.0, 0.0}, rho);
  const double alpha = 0.7;
  const BoundaryCurve turned({0.0, 0.0}, rotated_radius(rho, alpha));
  for (const Vec2& e : {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}, Vec2{0.8, 0.6}}) {
    const double lam = critical_position(curve, e).lambda;
    const double lam_turned = critical_position(turned, rotate(e, alpha)).lambda;
    CHECK(std::abs(lam - lam_turned) < 1e-5);
  }
}

TEST_CASE("reflection difference vanishes at the symmetric position") {
  const SymmetryReport report =
      reflection_difference(disk_solution_default(), 0.0, {1.0, 0.0});
  CHECK(report.w_max_abs < 1e-6);
  CHECK(report.negative_fraction == 0.0);
  CHECK(report.cap_samples > 1000);
}

TEST_CASE("reflection difference is one-signed at a subcritical position") {
  const SymmetryReport right =
      reflection_difference(disk_solution_default(), -0.5, {1.0, 0.0});
  CHECK(right.w_min >= -1e-6);
  CHECK(right.negative_fraction == 0.0);
  CHECK(right.w_max_abs > 1e-3);  // strictly positive in the cap interior

  // The mirrored configuration sees the same field from the other side: its
  // most negative value matches the first cap's largest positive one.
  const SymmetryReport left =
      reflection_difference(disk_solution_default(), 0.5, {-1.0, 0.0});
  CHECK(left.w_min < 0.0);
  CHECK(std::abs(left.w_min + right.w_max_abs) < 0.05 * right.w_max_abs);
  CHECK(left.negative_fraction > 0.5);
}

TEST_CASE("an empty reflected cap is reported as such") {
  CHECK_THROWS_AS(
      reflection_difference(disk_solution_default(), -1.02, {1.0, 0.0}),
      NumericalError);
  CHECK_THROWS_AS(
      reflection_difference(disk_solution_default(), 1.2, {1.0, 0.0}),
      NumericalError);
}

TEST_CASE("growth probe recovers the square-root boundary exponent") {
  const GrowthProbe probe =
      growth_probe(disk_solution_default(), -0.5, {1.0, 0.0}, {1.0, 0.0},
                   {-1.0, 0.0}, 1e-3, 0.1);
  REQUIRE_FALSE(probe.degenerate);
  CHECK(probe.slope > 0.4);
  CHECK(probe.slope < 0.6);
  CHECK(probe.slope_stderr < 0.05);
  CHECK(probe.t.size() == 16);
  CHECK(probe.w.size() == 16);
}

TEST_CASE("growth probe flags a vanishing difference as degenerate") {
  const GrowthProbe probe =
      growth_probe(disk_solution_default(), 0.0, {1.0, 0.0}, {1.0, 0.0},
                   {-1.0, 0.0}, 1e-3, 0.3);
  CHECK(probe.degenerate);
}

TEST_CASE("growth probe refuses a ray on which the difference changes sign") {
  CHECK_THROWS_AS(growth_probe(disk_solution_default(), -0.5, {1.0, 0.0},
                               {1.0, 0.0}, {-1.0, 0.0}, 0.1, 1.9),
                  NumericalError);
}

TEST_CASE("symmetry inputs are validated") {
  CHECK_THROWS_AS(critical_position(make_disk(), {0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(critical_position(make_disk(), {1.0, 0.0}, 8), ValidationError);
  CHECK_THROWS_AS(
      reflection_difference(disk_solution_default(), -0.5, {1.0, 0.0}, 4),
      ValidationError);
  CHECK_THROWS_AS(growth_probe(disk_solution_default(), -0.5, {1.0, 0.0},
                               {1.0, 0.0}, {-1.0, 0.0}, 0.1, 0.05),
                  ValidationError);
}
