#include "fracshape/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "fracshape/errors.hpp"
#include "fracshape/io.hpp"
#include "fracshape/kernel.hpp"
#include "fracshape/optimizer.hpp"
#include "fracshape/parallel.hpp"
#include "fracshape/quadrature.hpp"
#include "fracshape/rng.hpp"
#include "fracshape/shape.hpp"
#include "fracshape/symmetry.hpp"

namespace fracshape {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

BoundaryCurve make_disk(double radius, const Vec2& center = {0.0, 0.0}) {
  FourierRadius rho;
  rho.a0 = radius;
  return BoundaryCurve(center, std::move(rho));
}

/// Fourier fit (trapezoid projection) of the polar radius of the ellipse
/// x^2/a^2 + y^2/b^2 = 1 about the origin.
BoundaryCurve make_ellipse(double a, double b, int order = 10) {
  const int n = 4096;
  const auto rho = [&](double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return a * b / std::hypot(b * c, a * s);
  };
  FourierRadius fit;
  fit.a0 = 0.0;
  fit.cos_coeffs.assign(order, 0.0);
  fit.sin_coeffs.assign(order, 0.0);
  for (int i = 0; i < n; ++i) {
    const double theta = 2.0 * kPi * i / n;
    const double r = rho(theta);
    fit.a0 += r / n;
    for (int k = 1; k <= order; ++k) {
      fit.cos_coeffs[k - 1] += 2.0 * r * std::cos(k * theta) / n;
      fit.sin_coeffs[k - 1] += 2.0 * r * std::sin(k * theta) / n;
    }
  }
  return BoundaryCurve({0.0, 0.0}, std::move(fit));
}

SourceField unit_source() {
  return [](const Vec2&) { return 1.0; };
}

/// Closed-form solution of the unit-strength problem on the disk of radius R.
double disk_solution(double radius, const Vec2& x) {
  const double r2 = norm_sq(x);
  const double rr = radius * radius;
  return r2 >= rr ? 0.0 : (2.0 / kPi) * std::sqrt(rr - r2);
}

/// J for the unit-area disk.
double unit_area_disk_energy() { return -2.0 / (3.0 * std::pow(kPi, 1.5)); }

ScalarField disk_scalar_field() {
  ScalarField f;
  f.value = [](const Vec2& p) { return disk_solution(1.0, p); };
  f.gradient = [](const Vec2& p) {
    const double r2 = norm_sq(p);
    if (r2 >= 1.0) return Vec2{0.0, 0.0};
    return (-2.0 / (kPi * std::sqrt(1.0 - r2))) * p;
  };
  f.support_radius = 1.0;
  f.ray_breakpoints = [](const Vec2& x, const Vec2& e) {
    const double b = dot(x, e);
    const double c = norm_sq(x) - 1.0;
    if (c >= 0.0) return std::vector<double>{};
    const double disc = b * b - c;
    return std::vector<double>{-b + std::sqrt(disc)};
  };
  return f;
}

ScalarField gaussian_scalar_field() {
  ScalarField f;
  f.value = [](const Vec2& p) { return std::exp(-norm_sq(p)); };
  f.gradient = [](const Vec2& p) {
    return (-2.0 * std::exp(-norm_sq(p))) * p;
  };
  f.support_radius = 6.0;  // exp(-36) is far below double noise
  f.ray_breakpoints = nullptr;
  return f;
}

/// Lattice cell-center count of the area of the inward tubular band
/// 0 < r < depth. Membership is tested against the polar tables of the
/// boundary and of its inward parallel curve (valid while depth stays below
/// the minimum radius of curvature, which the caller guarantees).
double band_area_grid(const BoundaryCurve& curve, double depth, int n_grid) {
  const int m = 16384;
  std::vector<double> phi_table(m), rad_table(m);
  for (int i = 0; i < m; ++i) {
    const double theta = 2.0 * kPi * i / m;
    const Vec2 p =
        curve.point_at_angle(theta) - depth * curve.outward_normal_at_angle(theta);
    const Vec2 d = p - curve.center();
    phi_table[i] = std::atan2(d.y, d.x);
    rad_table[i] = norm(d);
  }
  // unwrap phi to an increasing sequence starting in [0, 2 pi)
  double offset = 0.0;
  for (int i = 1; i < m; ++i) {
    while (phi_table[i] + offset < phi_table[i - 1]) offset += 2.0 * kPi;
    phi_table[i] += offset;
    offset = 0.0;
  }
  const auto inner_radius = [&](double phi) {
    // rotate phi into [phi_table[0], phi_table[0] + 2 pi)
    double p = phi;
    while (p < phi_table[0]) p += 2.0 * kPi;
    while (p >= phi_table[0] + 2.0 * kPi) p -= 2.0 * kPi;
    const auto it = std::upper_bound(phi_table.begin(), phi_table.end(), p);
    const int hi = static_cast<int>(it - phi_table.begin()) % m;
    const int lo = (hi + m - 1) % m;
    double p_lo = phi_table[lo], p_hi = phi_table[hi];
    if (p_hi < p_lo) p_hi += 2.0 * kPi;
    if (p < p_lo) p += 2.0 * kPi;
    const double t = (p_hi > p_lo) ? (p - p_lo) / (p_hi - p_lo) : 0.0;
    return rad_table[lo] + t * (rad_table[hi] - rad_table[lo]);
  };
  const Vec2 lo = curve.bbox_lo(), hi = curve.bbox_hi();
  const double margin = 0.01 * curve.diameter();
  const Vec2 glo{lo.x - margin, lo.y - margin}, ghi{hi.x + margin, hi.y + margin};
  const double hx = (ghi.x - glo.x) / n_grid, hy = (ghi.y - glo.y) / n_grid;
  long long count = 0;
  for (int j = 0; j < n_grid; ++j) {
    const double y = glo.y + hy * (j + 0.5);
    for (int i = 0; i < n_grid; ++i) {
      const Vec2 p{glo.x + hx * (i + 0.5), y};
      const Vec2 d = p - curve.center();
      const double q = norm(d);
      const double phi = std::atan2(d.y, d.x);
      if (q >= curve.radius_at(phi)) continue;  // outside the domain
      if (q < inner_radius(phi)) continue;      // deeper than the band
      ++count;
    }
  }
  return static_cast<double>(count) * hx * hy;
}

/// Trapezoid (arc length) x Gauss-Legendre (depth) integral of the tubular
/// area element over the band 0 < r < depth.
double band_area_jacobian(const BoundaryCurve& curve, double depth) {
  const int n_s = 1024;
  const QuadRule r_rule = gauss_legendre_on(16, 0.0, depth);
  double total = 0.0;
  for (int i = 0; i < n_s; ++i) {
    const double s = curve.length() * i / n_s;
    double col = 0.0;
    for (std::size_t k = 0; k < r_rule.size(); ++k)
      col += r_rule.w[k] * curve.tubular_jacobian(s, r_rule.x[k]);
    total += col * curve.length() / n_s;
  }
  return total;
}

bool files_identical(const std::string& p1, const std::string& p2) {
  std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
  if (!f1 || !f2) return false;
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  return s1.str() == s2.str();
}

/// Heavy intermediates shared between checks, built on first use.
struct Shared {
  SourceField one = unit_source();
  std::optional<SolutionField> disk_sol_, disk2_sol_, ellipse_sol_;
  std::optional<TraceProfile> disk_tr_, ellipse_tr_;
  std::optional<BoundaryCurve> ellipse_;
  std::optional<OptimizationResult> opt_ellipse_, opt_wobble_;

  const SolutionField& disk_sol() {
    if (!disk_sol_) disk_sol_ = solve_dirichlet(make_disk(1.0), one, {}, "one");
    return *disk_sol_;
  }
  const SolutionField& disk2_sol() {
    if (!disk2_sol_) disk2_sol_ = solve_dirichlet(make_disk(2.0), one, {}, "one");
    return *disk2_sol_;
  }
  const BoundaryCurve& ellipse() {
    if (!ellipse_) {
      const double b = std::sqrt(1.0 / (1.2 * kPi));
      ellipse_ = make_ellipse(1.2 * b, b);
    }
    return *ellipse_;
  }
  const SolutionField& ellipse_sol() {
    if (!ellipse_sol_) ellipse_sol_ = solve_dirichlet(ellipse(), one, {}, "one");
    return *ellipse_sol_;
  }
  const TraceProfile& disk_tr() {
    if (!disk_tr_) disk_tr_ = extract_psi0(disk_sol());
    return *disk_tr_;
  }
  const TraceProfile& ellipse_tr() {
    if (!ellipse_tr_) ellipse_tr_ = extract_psi0(ellipse_sol());
    return *ellipse_tr_;
  }
  const OptimizationResult& opt_ellipse() {
    if (!opt_ellipse_) {
      const double b = std::sqrt(1.0 / (1.3 * kPi));
      opt_ellipse_ = optimize(make_ellipse(1.3 * b, b));
    }
    return *opt_ellipse_;
  }
  const OptimizationResult& opt_wobble() {
    if (!opt_wobble_) {
      FourierRadius rho;
      rho.a0 = 1.0;
      rho.cos_coeffs = {0.0, 0.0, 0.15};
      opt_wobble_ = optimize(rescale_to_unit_area(BoundaryCurve({0.0, 0.0}, std::move(rho))));
    }
    return *opt_wobble_;
  }
};

void check_optimizer_run(const OptimizationResult& res, std::string& detail,
                         bool& pass) {
  const double j_target = unit_area_disk_energy();
  const double j_final = res.history.back().j;
  const double j_rel = std::abs(j_final - j_target) / std::abs(j_target);
  const double round = roundness(res.curve);
  const double serrin =
      res.profile ? serrin_residual(*res.profile) : 1.0;
  bool monotone = true;
  for (std::size_t i = 1; i < res.history.size(); ++i)
    if (res.history[i].j > res.history[i - 1].j + 1e-9 * std::abs(res.history[i - 1].j))
      monotone = false;
  pass = pass && j_rel <= 5e-3 && round <= 2e-2 && serrin <= 2e-2 && monotone &&
         res.converged;
  detail += " J_rel=" + num(j_rel) + " roundness=" + num(round) +
            " serrin=" + num(serrin) + (monotone ? "" : " NON-MONOTONE") +
            (res.converged ? "" : " NOT-CONVERGED");
}

}  // namespace

bool AcceptanceReport::all_pass() const {
  for (const auto& c : criteria)
    if (!c.pass) return false;
  return true;
}

AcceptanceReport run_acceptance(const AcceptanceOptions& opts) {
  std::ostream& log = opts.log ? *opts.log : std::cout;
  ensure_directory(opts.out_dir);
  const auto path = [&](const std::string& name) {
    return opts.out_dir + "/" + name;
  };

  AcceptanceReport report;
  Shared sh;
  const auto run = [&](int id, const std::string& name,
                       const std::function<void(bool&, std::string&)>& body) {
    bool pass = true;
    std::string detail;
    try {
      body(pass, detail);
    } catch (const std::exception& e) {
      pass = false;
      detail += std::string(" exception: ") + e.what();
    }
    report.criteria.push_back({id, name, pass, detail});
    char head[64];
    std::snprintf(head, sizeof(head), "[%2d/12] %s  %-24s", id,
                  pass ? "PASS" : "FAIL", name.c_str());
    log << head << detail << "\n" << std::flush;
  };

  // 1. Solve on the unit disk and compare with the closed form; pre-validate
  //    the oracle through the pointwise operator.
  run(1, "disk solution", [&](bool& pass, std::string& detail) {
    const SolutionField& sol = sh.disk_sol();
    const DomainQuadrature grid = domain_quadrature(sol.curve(), sol.quad);
    double num2 = 0.0, den2 = 0.0;
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      const double ue = disk_solution(1.0, grid.points[i]);
      const double diff = sol.evaluate(grid.points[i]) - ue;
      num2 += grid.weights[i] * diff * diff;
      den2 += grid.weights[i] * ue * ue;
    }
    const double rel_l2 = std::sqrt(num2 / den2);
    const double u0_err = std::abs(sol.evaluate({0.0, 0.0}) - 2.0 / kPi);
    const ScalarField field = disk_scalar_field();
    const Vec2 probes[5] = {
        {0.0, 0.0}, {0.3, 0.2}, {-0.4, 0.1}, {0.2, -0.5}, {-0.3, -0.35}};
    double op_dev = 0.0;
    for (const Vec2& p : probes)
      op_dev = std::max(op_dev,
                        std::abs(frac_laplacian_pointwise(field, p) - 1.0));
    pass = rel_l2 <= 1e-3 && u0_err <= 1e-3 && op_dev <= 1e-2;
    detail = " rel_l2=" + num(rel_l2) + " u0_err=" + num(u0_err) +
             " op_dev=" + num(op_dev);
    write_solution_csv(path("disk_solution.csv"), sol, 33);
  });

  // 2. Operator constants against their closed forms and the Gaussian oracle.
  run(2, "operator constants", [&](bool& pass, std::string& detail) {
    const KernelConstants kc = kernel_constants();
    const double i0_err = std::abs(kc.i0 - kPi * kPi);
    const bool phi_ok = phi(std::numeric_limits<double>::infinity()) == 1.0;
    const double c0_err = std::abs(kc.c0 + kPi / 8.0);
    PointwiseQuad pq;
    pq.n_rho = 64;
    const double gauss =
        frac_laplacian_pointwise(gaussian_scalar_field(), {0.0, 0.0}, pq);
    const double c1_rel = std::abs(gauss - std::sqrt(kPi)) / std::sqrt(kPi);
    pass = i0_err <= 1e-8 && phi_ok && c1_rel <= 1e-4 && c0_err <= 1e-8;
    detail = " i0_err=" + num(i0_err) + " c1_rel=" + num(c1_rel) +
             " c0_err=" + num(c0_err) + (phi_ok ? "" : " phi(inf)!=1");
    std::string json = "{\"C1\": " + format_double(kc.c1) +
                       ", \"I0\": " + format_double(kc.i0) +
                       ", \"phi_inf\": " + format_double(kc.phi_inf) +
                       ", \"C0\": " + format_double(kc.c0) + "}\n";
    write_text_file(path("constants.json"), json);
  });

  // 3. Boundary trace on disks of radius 1 and 2.
  run(3, "boundary trace", [&](bool& pass, std::string& detail) {
    const TraceProfile& tr = sh.disk_tr();
    const double target = 2.0 * std::sqrt(2.0) / kPi;
    double node_dev = 0.0;
    for (double v : tr.psi0)
      node_dev = std::max(node_dev, std::abs(v - target) / target);
    const double spread = tr.stddev() / tr.mean();
    const TraceProfile tr2 = extract_psi0(sh.disk2_sol());
    const double scale_dev =
        std::abs(tr2.mean() / tr.mean() - std::sqrt(2.0)) / std::sqrt(2.0);
    pass = node_dev <= 1e-2 && spread <= 1e-2 && scale_dev <= 2e-2;
    detail = " node_dev=" + num(node_dev) + " std/mean=" + num(spread) +
             " scale_dev=" + num(scale_dev);
    write_trace_csv(path("disk_trace.csv"), tr);
    write_trace_svg(path("disk_trace.svg"), tr);
  });

  // 4. Energy values and cubic homogeneity under dilation.
  run(4, "energy values", [&](bool& pass, std::string& detail) {
    const double j1 = energy(sh.disk_sol());
    const double j1_err = std::abs(j1 + 2.0 / 3.0);
    const SolutionField sol_ua = solve_dirichlet(
        make_disk(1.0 / std::sqrt(kPi)), sh.one, {}, "one");
    const double ja_err = std::abs(energy(sol_ua) - unit_area_disk_energy());
    const double j2 = energy(sh.disk2_sol());
    const SolutionField sol_h =
        solve_dirichlet(make_disk(0.5), sh.one, {}, "one");
    const double jh = energy(sol_h);
    const double up_dev = std::abs(j2 - 8.0 * j1) / std::abs(8.0 * j1);
    const double down_dev = std::abs(jh - 0.125 * j1) / std::abs(0.125 * j1);
    pass = j1_err <= 5e-3 && ja_err <= 5e-3 && up_dev <= 1e-2 && down_dev <= 1e-2;
    detail = " J1_err=" + num(j1_err) + " Juarea_err=" + num(ja_err) +
             " scale2_dev=" + num(up_dev) + " scale0.5_dev=" + num(down_dev);
  });

  // 5. Dilation identity dJ[x] = 3 J on the disk and an aspect-1.2 ellipse.
  run(5, "dilation identity", [&](bool& pass, std::string& detail) {
    const double j_disk = energy(sh.disk_sol());
    const double dj_disk = shape_derivative_analytic(
        sh.disk_tr(), FlowField::dilation(), sh.disk_sol().curve());
    const double disk_dev = std::abs(dj_disk - 3.0 * j_disk) / std::abs(3.0 * j_disk);
    const double j_e = energy(sh.ellipse_sol());
    const double dj_e = shape_derivative_analytic(
        sh.ellipse_tr(), FlowField::dilation(), sh.ellipse());
    const double e_dev = std::abs(dj_e - 3.0 * j_e) / std::abs(3.0 * j_e);
    pass = disk_dev <= 2e-2 && e_dev <= 2e-2;
    detail = " disk_dev=" + num(disk_dev) + " ellipse_dev=" + num(e_dev);
    write_trace_csv(path("ellipse_trace.csv"), sh.ellipse_tr());
  });

  // 6. Translation invariance: the weighted normal average of psi0^2 vanishes.
  run(6, "translation identity", [&](bool& pass, std::string& detail) {
    const double j_e = energy(sh.ellipse_sol());
    const double dj = shape_derivative_analytic(
        sh.ellipse_tr(), FlowField::translation({1.0, 0.0}), sh.ellipse());
    const double rel = std::abs(dj) / std::abs(j_e);
    pass = rel <= 1e-2;
    detail = " |dJ|/|J|=" + num(rel);
  });

  // 7. Harmonic extension: constant data reproduces 1; discrete harmonicity.
  run(7, "harmonic extension", [&](bool& pass, std::string& detail) {
    Rng rng(opts.seed);
    PlaneGrid ones;
    ones.lo = {-3.0, -3.0};
    ones.hi = {3.0, 3.0};
    ones.nx = ones.ny = 121;
    ones.values.assign(static_cast<std::size_t>(ones.nx) * ones.ny, 1.0);
    ones.far_value = 1.0;
    double const_dev = 0.0;
    for (int k = 0; k < 10; ++k) {
      const Vec2 x = rng.point_in_box({-1.0, -1.0}, {1.0, 1.0});
      const double z = rng.uniform(0.3, 1.5);
      const_dev = std::max(const_dev, std::abs(poisson_extension(ones, x, z) - 1.0));
    }
    PlaneGrid gauss;
    gauss.lo = {-4.0, -4.0};
    gauss.hi = {4.0, 4.0};
    gauss.nx = gauss.ny = 161;
    gauss.values.resize(static_cast<std::size_t>(gauss.nx) * gauss.ny);
    for (int j = 0; j < gauss.ny; ++j)
      for (int i = 0; i < gauss.nx; ++i) {
        const double tx = gauss.lo.x + (gauss.hi.x - gauss.lo.x) * i / (gauss.nx - 1);
        const double ty = gauss.lo.y + (gauss.hi.y - gauss.lo.y) * j / (gauss.ny - 1);
        gauss.values[static_cast<std::size_t>(j) * gauss.nx + i] =
            std::exp(-0.5 * (tx * tx + ty * ty));
      }
    gauss.far_value = 0.0;
    const double h = 0.02;
    double harm_res = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Vec2 x = rng.point_in_box({-1.0, -1.0}, {1.0, 1.0});
      const double z = rng.uniform(0.5, 1.5);
      const double w0 = poisson_extension(gauss, x, z);
      const double lap =
          (poisson_extension(gauss, {x.x + h, x.y}, z) +
           poisson_extension(gauss, {x.x - h, x.y}, z) +
           poisson_extension(gauss, {x.x, x.y + h}, z) +
           poisson_extension(gauss, {x.x, x.y - h}, z) +
           poisson_extension(gauss, x, z + h) + poisson_extension(gauss, x, z - h) -
           6.0 * w0) /
          (h * h);
      harm_res = std::max(harm_res, std::abs(lap));
    }
    pass = const_dev <= 1e-6 && harm_res <= 1e-4;
    detail = " const_dev=" + num(const_dev) + " harmonic_res=" + num(harm_res);
  });

  // 8. Analytic vs finite-difference shape derivative for a mode-2 field.
  run(8, "shape derivative check", [&](bool& pass, std::string& detail) {
    FlowField::Mode mode;
    mode.m = 2;
    mode.amp_cos = 1.0;
    const FlowField zeta =
        FlowField::normal_perturbation({0.0, 0.0}, {mode}, 0.25);
    const double analytic =
        shape_derivative_analytic(sh.ellipse_tr(), zeta, sh.ellipse());
    const double fd = shape_derivative_fd(sh.ellipse(), sh.one, zeta, 0.02, {},
                                          16, /*richardson=*/true);
    const double rel = std::abs(analytic - fd) / std::abs(fd);
    pass = rel <= 5e-2;
    detail = " analytic=" + num(analytic) + " fd=" + num(fd) +
             " rel_dev=" + num(rel);
  });

  // 9. Gradient descent to the disk from two starting shapes.
  run(9, "optimization to disk", [&](bool& pass, std::string& detail) {
    detail = " [ellipse]";
    check_optimizer_run(sh.opt_ellipse(), detail, pass);
    write_history_csv(path("optimize_ellipse_history.csv"),
                      sh.opt_ellipse().history);
    write_curve_json(path("optimize_ellipse_final.json"), sh.opt_ellipse().curve);
    detail += " [wobble]";
    check_optimizer_run(sh.opt_wobble(), detail, pass);
    write_history_csv(path("optimize_wobble_history.csv"),
                      sh.opt_wobble().history);
    write_curve_json(path("optimize_wobble_final.json"), sh.opt_wobble().curve);
    const double b = std::sqrt(1.0 / (1.3 * kPi));
    std::vector<BoundaryCurve> shapes{make_ellipse(1.3 * b, b),
                                      sh.opt_ellipse().curve,
                                      sh.opt_wobble().curve};
    write_shapes_svg(path("optimize_shapes.svg"), shapes);
  });

  // 10. Moving-plane critical positions and reflection positivity.
  run(10, "moving planes", [&](bool& pass, std::string& detail) {
    double lambda_dev = 0.0, disk_w_min = 0.0;
    for (int k = 0; k < 16; ++k) {
      const Vec2 e = unit_vector(kPi * k / 8.0);
      const CriticalPosition cp = critical_position(sh.disk_sol().curve(), e);
      lambda_dev = std::max(lambda_dev, std::abs(cp.lambda));
      const SymmetryReport rep =
          reflection_difference(sh.disk_sol(), cp.lambda, e);
      disk_w_min = std::min(disk_w_min, rep.w_min);
      if (k == 0)
        write_cap_heatmap_svg(path("disk_cap_heatmap.svg"), sh.disk_sol(),
                              cp.lambda, e, 160);
    }
    double final_w_floor = 0.0;
    if (!sh.opt_ellipse().solution)
      throw NumericalError(ErrorCode::DegenerateProfile,
                           "optimizer returned no final solution");
    const SolutionField& fin = *sh.opt_ellipse().solution;
    for (int k = 0; k < 8; ++k) {
      const Vec2 e = unit_vector(kPi * k / 4.0);
      const CriticalPosition cp = critical_position(fin.curve(), e);
      const SymmetryReport rep = reflection_difference(fin, cp.lambda, e);
      final_w_floor = std::min(final_w_floor, rep.w_min + 1e-3 * rep.max_u);
    }
    pass = lambda_dev <= 2e-4 && disk_w_min >= -1e-6 && final_w_floor >= 0.0;
    detail = " lambda_dev=" + num(lambda_dev) + " disk_w_min=" + num(disk_w_min) +
             " final_margin=" + num(final_w_floor);
  });

  // 11. Tubular band area: area-element integral vs lattice count.
  run(11, "tubular band area", [&](bool& pass, std::string& detail) {
    const BoundaryCurve disk = make_disk(1.0);
    const double disk_jac = band_area_jacobian(disk, 0.1);
    const double disk_grid = band_area_grid(disk, 0.1, 2048);
    const double disk_dev = std::abs(disk_jac - disk_grid) / disk_grid;
    const double e_jac = band_area_jacobian(sh.ellipse(), 0.1);
    const double e_grid = band_area_grid(sh.ellipse(), 0.1, 2048);
    const double e_dev = std::abs(e_jac - e_grid) / e_grid;
    pass = disk_dev <= 1e-3 && e_dev <= 5e-3;
    detail = " disk_dev=" + num(disk_dev) + " ellipse_dev=" + num(e_dev);
  });

  // 12. Determinism: the artifact-producing core, run under thread caps 1 and
  //     4, must emit byte-identical files.
  run(12, "determinism", [&](bool& pass, std::string& detail) {
    const int previous_cap = thread_cap();
    const auto emit = [&](const std::string& dir, int cap) {
      set_thread_cap(cap);
      ensure_directory(dir);
      FourierRadius rho;
      rho.a0 = 1.0;
      rho.cos_coeffs = {0.0, 0.0, 0.12, 0.0, 0.05};
      rho.sin_coeffs = {0.0, -0.08};
      const BoundaryCurve curve({0.0, 0.0}, std::move(rho));
      SolverOptions so;
      so.k_rad = 4;
      so.k_ang = 3;
      so.quad = {32, 16, 16, 12, 2.0};
      const GalerkinSystem sys = assemble(
          WeightedBasis(curve, so.k_rad, so.k_ang), sh.one, so.quad);
      write_system_dump(dir + "/system.bin", sys);
      const SolutionField sol = solve_dirichlet(curve, sh.one, so, "one");
      write_coeffs_json(dir + "/coeffs.json", sol);
      write_solution_csv(dir + "/solution.csv", sol, 33);
      TraceOptions to;
      to.n_nodes = 64;
      write_trace_csv(dir + "/trace.csv", extract_psi0(sol, to));
    };
    emit(path("threads1"), 1);
    emit(path("threads4"), 4);
    set_thread_cap(previous_cap);
    std::string mismatches;
    for (const char* name : {"system.bin", "coeffs.json", "solution.csv", "trace.csv"})
      if (!files_identical(path("threads1") + "/" + name,
                           path("threads4") + "/" + name))
        mismatches += std::string(" ") + name;
    pass = mismatches.empty();
    detail = mismatches.empty() ? " all artifacts byte-identical"
                                : " mismatch:" + mismatches;
  });

  // Summary artifact.
  {
    std::string json = "[\n";
    for (std::size_t i = 0; i < report.criteria.size(); ++i) {
      const auto& c = report.criteria[i];
      json += "  {\"id\": " + std::to_string(c.id) + ", \"name\": \"" + c.name +
              "\", \"pass\": " + (c.pass ? "true" : "false") + ", \"detail\": \"" +
              c.detail + "\"}";
      json += (i + 1 < report.criteria.size()) ? ",\n" : "\n";
    }
    json += "]\n";
    write_text_file(path("acceptance.json"), json);
  }
  log << (report.all_pass() ? "ALL CRITERIA PASS" : "CRITERIA FAILED") << "\n";
  return report;
}

}  // namespace fracshape
