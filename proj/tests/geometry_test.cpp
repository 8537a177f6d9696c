#include <cmath>

#include "doctest.h"
#include "fracshape/errors.hpp"
#include "fracshape/geometry.hpp"
#include "support/oracles.hpp"

using namespace fracshape;
using namespace fracshape::testing;

namespace {

BoundaryCurve wavy_curve() {
  FourierRadius rho;
  rho.a0 = 1.0;
  rho.cos_coeffs = {0.0, 0.1};          // 0.1 cos 2t
  rho.sin_coeffs = {0.0, 0.0, 0.05};    // 0.05 sin 3t
  return BoundaryCurve({0.0, 0.0}, rho);
}

}  // namespace

TEST_CASE("radius function and point evaluation") {
  const BoundaryCurve disk = make_disk();
  CHECK(disk.point_at_angle(0.0).x == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(disk.point_at_angle(0.0).y == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(disk.point_at_angle(M_PI / 2).x == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(disk.point_at_angle(M_PI / 2).y == doctest::Approx(1.0).epsilon(1e-14));

  FourierRadius rho;
  rho.cos_coeffs = {0.0, 0.1};  // 1 + 0.1 cos 2t
  const BoundaryCurve oval({0.0, 0.0}, rho);
  CHECK(oval.point_at_angle(0.0).x == doctest::Approx(1.1).epsilon(1e-14));
  CHECK(oval.radius_at(M_PI / 2) == doctest::Approx(0.9).epsilon(1e-14));
}

TEST_CASE("construction rejects a radius that is not strictly positive") {
  FourierRadius rho;
  rho.a0 = 0.1;
  rho.cos_coeffs = {0.5};
  CHECK_THROWS_AS(BoundaryCurve({0.0, 0.0}, rho), ValidationError);
}

TEST_CASE("curvature of circles and a finite-difference oracle") {
  const BoundaryCurve big = make_disk(2.0);
  for (double s : {0.0, 1.0, 5.0, 11.0})
    CHECK(big.curvature(s) == doctest::Approx(0.5).epsilon(1e-10));
  const BoundaryCurve disk = make_disk();
  CHECK(disk.curvature(2.0) == doctest::Approx(1.0).epsilon(1e-10));

  // kappa = d(tangent angle)/ds, via central differences in theta.
  FourierRadius rho;
  rho.cos_coeffs = {0.0, 0.1};
  const BoundaryCurve oval({0.0, 0.0}, rho);
  for (double theta : {0.0, 0.7, 2.1}) {
    const double h = 1e-5;
    const Vec2 tp = oval.tangent_at_angle(theta + h);
    const Vec2 tm = oval.tangent_at_angle(theta - h);
    const double dphi =
        std::asin(cross(tm, tp));  // angle between nearby unit tangents
    const double fd = dphi / (2.0 * h) / oval.speed_at_angle(theta);
    CHECK(oval.curvature_at_angle(theta) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("frenet relations in the angular parametrization") {
  const BoundaryCurve curve = wavy_curve();
  const double h = 1e-5;
  for (double theta : {0.3, 1.2, 2.8, 4.4, 5.9}) {
    const double speed = curve.speed_at_angle(theta);
    const double kappa = curve.curvature_at_angle(theta);
    const Vec2 n = curve.outward_normal_at_angle(theta);
    const Vec2 tau = curve.tangent_at_angle(theta);
    // d tau / ds = -kappa n and d n / ds = kappa tau
    const Vec2 dtau = (curve.tangent_at_angle(theta + h) -
                       curve.tangent_at_angle(theta - h)) /
                      (2.0 * h * speed);
    const Vec2 dn = (curve.outward_normal_at_angle(theta + h) -
                     curve.outward_normal_at_angle(theta - h)) /
                    (2.0 * h * speed);
    CHECK(norm(dtau + kappa * n) < 1e-6);
    CHECK(norm(dn - kappa * tau) < 1e-6);
  }
}

TEST_CASE("signed distance on the disk") {
  const BoundaryCurve disk = make_disk();
  const TubularPoint inside = disk.signed_distance({0.9, 0.0});
  CHECK(inside.r == doctest::Approx(0.1).epsilon(1e-9));
  const double s_wrapped = std::min(inside.s, disk.length() - inside.s);
  CHECK(s_wrapped < 1e-6);

  const TubularPoint outside = disk.signed_distance({1.2, 0.0});
  CHECK(outside.r == doctest::Approx(-0.2).epsilon(1e-9));

  CHECK_THROWS_AS(disk.signed_distance({0.0, 0.0}), NumericalError);
}

TEST_CASE("tubular round trip: reconstruct then project") {
  const BoundaryCurve curve = wavy_curve();
  for (double s : {0.2, 1.7, 3.3, 5.1}) {
    for (double r : {0.05, -0.05, 0.2}) {
      const Vec2 x = curve.reconstruct({s, r});
      const TubularPoint tp = curve.signed_distance(x);
      CHECK(std::abs(tp.r - r) < 1e-9);
      const double ds = std::abs(tp.s - s);
      CHECK(std::min(ds, curve.length() - ds) < 1e-7);
    }
  }
}

TEST_CASE("ray distances on the disk") {
  const BoundaryCurve disk = make_disk();
  for (double theta : {0.0, 1.0, 2.5, 4.0})
    CHECK(disk.ray_distance({0.0, 0.0}, theta) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(disk.ray_distance({0.5, 0.0}, 0.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(disk.ray_distance({0.5, 0.0}, M_PI) == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("areas: disk, unit-area disk, ellipse") {
  CHECK(make_disk().area() == doctest::Approx(M_PI).epsilon(1e-10));
  CHECK(make_disk(1.0 / std::sqrt(M_PI)).area() == doctest::Approx(1.0).epsilon(1e-10));
  const BoundaryCurve ell = make_ellipse(1.2, 0.8, 12);
  CHECK(ell.area() == doctest::Approx(M_PI * 1.2 * 0.8).epsilon(1e-8));
  CHECK(ell.diameter() == doctest::Approx(2.4).epsilon(1e-5));
}

TEST_CASE("containment") {
  const BoundaryCurve disk = make_disk();
  CHECK(disk.contains({0.5, 0.3}));
  CHECK(!disk.contains({1.5, 0.0}));
  CHECK(!disk.contains({0.8, 0.8}));
}

TEST_CASE("tubular jacobian and the band-area oracle") {
  const BoundaryCurve disk = make_disk();
  CHECK(disk.tubular_jacobian(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  // r > 0 lies inside, where circumferences shrink: factor 1 - kappa r.
  CHECK(disk.tubular_jacobian(1.0, 0.3) == doctest::Approx(0.7).epsilon(1e-9));
  CHECK_THROWS_AS(disk.tubular_jacobian(0.0, 1.5), ValidationError);

  // Area of the band {0 < r < 0.1}: the tubular integral of the jacobian
  // against an independent lattice count of the annulus 0.9 < |x| < 1.
  const double depth = 0.1;
  double integral = 0.0;
  const int n_s = 256, n_r = 64;
  for (int i = 0; i < n_s; ++i) {
    const double s = disk.length() * i / n_s;
    for (int j = 0; j < n_r; ++j) {
      const double r = depth * (j + 0.5) / n_r;
      integral += disk.tubular_jacobian(s, r) * (disk.length() / n_s) * (depth / n_r);
    }
  }
  const int n_grid = 2048;
  const double h = 2.2 / n_grid;
  long long cells = 0;
  for (int i = 0; i < n_grid; ++i) {
    for (int j = 0; j < n_grid; ++j) {
      const Vec2 x{-1.1 + (i + 0.5) * h, -1.1 + (j + 0.5) * h};
      const double q = norm(x);
      if (q > 1.0 - depth && q < 1.0) ++cells;
    }
  }
  const double counted = static_cast<double>(cells) * h * h;
  CHECK(rel_err(integral, counted) < 1e-3);
}

TEST_CASE("flow transport: translation is exact") {
  const BoundaryCurve curve = wavy_curve();
  const TransportResult moved =
      flow_transport(curve, FlowField::translation({0.3, -0.2}), 2.0, 8);
  CHECK(moved.fit_residual < 1e-12);
  CHECK(moved.curve.center().x == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(moved.curve.center().y == doctest::Approx(-0.4).epsilon(1e-12));
  const FourierRadius& before = curve.radius();
  const FourierRadius& after = moved.curve.radius();
  CHECK(std::abs(after.a0 - before.a0) < 1e-12);
  for (std::size_t k = 0; k < before.cos_coeffs.size(); ++k)
    CHECK(std::abs(after.cos_coeffs[k] - before.cos_coeffs[k]) < 1e-12);
}

TEST_CASE("flow transport: dilation scales circles exponentially") {
  const BoundaryCurve circle = make_disk(0.8);
  const double t = 0.3;
  const TransportResult grown =
      flow_transport(circle, FlowField::dilation(), t, 16);
  CHECK(grown.curve.radius().a0 == doctest::Approx(0.8 * std::exp(t)).epsilon(1e-8));
  CHECK(grown.curve.area() ==
        doctest::Approx(circle.area() * std::exp(2.0 * t)).epsilon(1e-6));
}

TEST_CASE("flow transport: reversibility") {
  const BoundaryCurve curve = wavy_curve();
  const FlowField zeta = FlowField::normal_perturbation(
      {0.0, 0.0}, {FlowField::Mode{2, 0.3, 0.0}}, 0.1);
  const TransportResult there = flow_transport(curve, zeta, 0.05, 32);
  const TransportResult back = flow_transport(there.curve, zeta.negated(), 0.05, 32);
  CHECK(std::abs(back.curve.radius().a0 - curve.radius().a0) < 1e-8);
  for (std::size_t k = 0; k < curve.radius().cos_coeffs.size(); ++k)
    CHECK(std::abs(back.curve.radius().cos_coeffs[k] -
                   curve.radius().cos_coeffs[k]) < 1e-8);
}

TEST_CASE("flow transport: losing star-shapedness is reported") {
  // A strong inward radial field collapses two opposite sectors of the
  // boundary onto the taper plateau near the center. The truncated Fourier
  // re-fit of the resulting near-zero radius bands undershoots zero, which the
  // transport must report instead of returning an invalid curve.
  const BoundaryCurve ellipse = make_ellipse(1.2, 0.8);
  const FlowField violent = FlowField::normal_perturbation(
      {0.0, 0.0}, {FlowField::Mode{2, 2.0, 0.0}}, 0.1);
  CHECK_THROWS_AS(flow_transport(ellipse, violent, 1.5, 32), NumericalError);
}

TEST_CASE("flow jacobian") {
  CHECK(flow_jacobian(FlowField::translation({1.0, 2.0}), {0.3, 0.4}, 0.7, 8) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(flow_jacobian(FlowField::dilation(), {0.3, 0.4}, 0.5, 16) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-9));
}
