#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracshape/errors.hpp"
#include "fracshape/io.hpp"
#include "fracshape/kernel.hpp"
#include "fracshape/optimizer.hpp"
#include "fracshape/selftest.hpp"
#include "fracshape/shape.hpp"
#include "fracshape/symmetry.hpp"

namespace {

using namespace fracshape;

constexpr double kPi = std::numbers::pi;

struct CommonOpts {
  std::string domain;
  std::string out = "out";
  int krad = 6;
  int kang = 4;
  std::string quad = "default";
  double step = 0.0;  // per-command default applied when 0
  int iters = 40;
  double tol = 1e-4;
  unsigned long long seed = 12345;
  int grid = 65;
  std::string zeta = "dilation";
  bool richardson = false;
  int directions = 8;
  std::string source = "one";
};

QuadratureConfig parse_quad(const std::string& s) {
  if (s == "default") return {};
  if (s == "fast") return {32, 16, 16, 12, 2.0};
  if (s == "fine") return {96, 48, 48, 32, 2.0};
  QuadratureConfig q;
  double gamma = q.gamma;
  const int got = std::sscanf(s.c_str(), "%d,%d,%d,%d,%lf", &q.n_outer_theta,
                              &q.n_outer_rho, &q.n_inner_theta, &q.n_inner_rho,
                              &gamma);
  if (got < 4)
    throw ValidationError(ErrorCode::InvalidConfig,
                          "--quad expects a preset (default|fast|fine) or "
                          "n_outer_theta,n_outer_rho,n_inner_theta,n_inner_rho[,gamma]");
  q.gamma = gamma;
  return q;
}

SourceField parse_source(const std::string& s) {
  if (s == "one") return [](const Vec2&) { return 1.0; };
  if (s.rfind("poly:", 0) == 0) {
    double a = 0.0, b = 0.0, c = 0.0;
    if (std::sscanf(s.c_str() + 5, "%lf,%lf,%lf", &a, &b, &c) < 1)
      throw ValidationError(ErrorCode::InvalidConfig,
                            "--source poly:a[,b[,c]] expects numbers");
    return [a, b, c](const Vec2& x) { return a + b * x.x + c * x.y; };
  }
  throw ValidationError(ErrorCode::InvalidConfig,
                        "--source expects 'one' or 'poly:a[,b[,c]]'");
}

FlowField parse_zeta(const std::string& s, const BoundaryCurve& curve) {
  if (s == "dilation") return FlowField::dilation();
  if (s == "tx") return FlowField::translation({1.0, 0.0});
  if (s == "ty") return FlowField::translation({0.0, 1.0});
  if (s.rfind("mode", 0) == 0) {
    const int m = std::atoi(s.c_str() + 4);
    if (m < 1)
      throw ValidationError(ErrorCode::InvalidConfig,
                            "--zeta modeM expects M >= 1");
    double rho_min = curve.radius_at(0.0);
    for (int i = 1; i < 1024; ++i)
      rho_min = std::min(rho_min, curve.radius_at(2.0 * kPi * i / 1024));
    FlowField::Mode mode;
    mode.m = m;
    mode.amp_cos = 1.0;
    return FlowField::normal_perturbation(curve.center(), {mode}, 0.4 * rho_min);
  }
  throw ValidationError(ErrorCode::InvalidConfig,
                        "--zeta expects dilation|tx|ty|modeM");
}

SolverOptions solver_options(const CommonOpts& o) {
  SolverOptions so;
  so.k_rad = o.krad;
  so.k_ang = o.kang;
  so.quad = parse_quad(o.quad);
  return so;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_domain) {
  auto* dom = cmd->add_option("--domain", o.domain, "path to the domain curve JSON");
  if (needs_domain) dom->required();
  cmd->add_option("--out", o.out, "output directory (default: out)");
  cmd->add_option("--krad", o.krad, "radial basis degree");
  cmd->add_option("--kang", o.kang, "angular basis order");
  cmd->add_option("--quad", o.quad,
                  "quadrature preset (default|fast|fine) or explicit sizes "
                  "t,r,it,ir[,gamma]");
  cmd->add_option("--seed", o.seed, "seed for randomized verification grids");
}

int run_solve(const CommonOpts& o, bool dump) {
  const BoundaryCurve curve = read_curve_json(o.domain);
  const SourceField f = parse_source(o.source);
  const SolverOptions so = solver_options(o);
  ensure_directory(o.out);
  if (dump) {
    const GalerkinSystem sys = assemble(WeightedBasis(curve, so.k_rad, so.k_ang),
                                        f, so.quad);
    write_system_dump(o.out + "/system.bin", sys);
  }
  const SolutionField sol = solve_dirichlet(curve, f, so, o.source);
  write_solution_csv(o.out + "/solution.csv", sol, o.grid);
  write_coeffs_json(o.out + "/coeffs.json", sol);
  std::cout << "solve: n=" << sol.basis.size()
            << " J=" << format_double(energy(sol))
            << " u(center)=" << format_double(sol.evaluate(curve.center()))
            << " residual=" << format_double(sol.solve_residual) << "\n";
  return 0;
}

int run_trace(const CommonOpts& o) {
  const BoundaryCurve curve = read_curve_json(o.domain);
  const SolutionField sol =
      solve_dirichlet(curve, parse_source(o.source), solver_options(o), o.source);
  const TraceProfile tr = extract_psi0(sol);
  ensure_directory(o.out);
  write_trace_csv(o.out + "/trace.csv", tr);
  write_trace_svg(o.out + "/trace.svg", tr);
  std::cout << "trace: mean=" << format_double(tr.mean())
            << " std=" << format_double(tr.stddev())
            << " serrin=" << format_double(serrin_residual(tr)) << "\n";
  return 0;
}

int run_energy(const CommonOpts& o) {
  const BoundaryCurve curve = read_curve_json(o.domain);
  const SolutionField sol =
      solve_dirichlet(curve, parse_source(o.source), solver_options(o), o.source);
  const double j = energy(sol);
  ensure_directory(o.out);
  nlohmann::ordered_json doc;
  doc["J"] = j;
  doc["area"] = curve.area();
  doc["residual"] = sol.solve_residual;
  write_text_file(o.out + "/energy.json", doc.dump(2) + "\n");
  std::cout << "energy: J=" << format_double(j)
            << " area=" << format_double(curve.area()) << "\n";
  return 0;
}

int run_dshape(const CommonOpts& o) {
  const BoundaryCurve curve = read_curve_json(o.domain);
  const SourceField f = parse_source(o.source);
  const SolverOptions so = solver_options(o);
  const FlowField zeta = parse_zeta(o.zeta, curve);
  const SolutionField sol = solve_dirichlet(curve, f, so, o.source);
  const TraceProfile tr = extract_psi0(sol);
  const double analytic = shape_derivative_analytic(tr, zeta, curve);
  const double h = o.step > 0.0 ? o.step : 0.02;
  const double fd = shape_derivative_fd(curve, f, zeta, h, so, 16, o.richardson);
  const double denom = std::max(std::abs(fd), 1e-300);
  nlohmann::ordered_json doc;
  doc["analytic"] = analytic;
  doc["fd"] = fd;
  doc["h"] = h;
  doc["richardson"] = o.richardson;
  doc["discrepancy"] = std::abs(analytic - fd) / denom;
  ensure_directory(o.out);
  write_text_file(o.out + "/dshape.json", doc.dump(2) + "\n");
  std::cout << "dshape: analytic=" << format_double(analytic)
            << " fd=" << format_double(fd)
            << " discrepancy=" << format_double(std::abs(analytic - fd) / denom)
            << "\n";
  return 0;
}

int run_optimize(const CommonOpts& o) {
  const BoundaryCurve curve = read_curve_json(o.domain);
  OptimizeParams params;
  params.max_iters = o.iters;
  if (o.step > 0.0) params.step0 = o.step;
  params.tol_dj = o.tol;
  params.solver = solver_options(o);
  const OptimizationResult res = optimize(curve, params, parse_source(o.source));
  ensure_directory(o.out);
  write_history_csv(o.out + "/history.csv", res.history);
  write_curve_json(o.out + "/final_domain.json", res.curve);
  write_shapes_svg(o.out + "/shapes.svg", {curve, res.curve});
  const OptimizationRecord& last = res.history.back();
  std::cout << "optimize: iters=" << last.iteration
            << " J=" << format_double(last.j)
            << " roundness=" << format_double(last.roundness)
            << " serrin=" << format_double(last.serrin)
            << (res.converged ? " converged" : " max-iters") << "\n";
  return 0;
}

int run_symmetry(const CommonOpts& o) {
  const BoundaryCurve curve = read_curve_json(o.domain);
  const SolutionField sol =
      solve_dirichlet(curve, parse_source(o.source), solver_options(o), o.source);
  ensure_directory(o.out);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  double worst_w = 0.0;
  for (int k = 0; k < o.directions; ++k) {
    const Vec2 e = unit_vector(kPi * k / o.directions);
    const CriticalPosition cp = critical_position(curve, e);
    const SymmetryReport rep = reflection_difference(sol, cp.lambda, e);
    worst_w = std::min(worst_w, rep.w_min);
    nlohmann::ordered_json entry;
    entry["direction"] = {e.x, e.y};
    entry["lambda0"] = cp.lambda0;
    entry["lambda"] = cp.lambda;
    entry["config"] = contact_config_name(cp.config);
    entry["contact_gap"] = cp.contact_gap;
    entry["crossing_normal_dot"] = cp.crossing_normal_dot;
    entry["w_min"] = rep.w_min;
    entry["w_max_abs"] = rep.w_max_abs;
    entry["max_u"] = rep.max_u;
    entry["negative_fraction"] = rep.negative_fraction;
    entry["cap_samples"] = rep.cap_samples;
    arr.push_back(entry);
    if (k == 0)
      write_cap_heatmap_svg(o.out + "/cap_heatmap.svg", sol, cp.lambda, e, 160);
  }
  write_text_file(o.out + "/symmetry.json", arr.dump(2) + "\n");
  std::cout << "symmetry: directions=" << o.directions
            << " worst_w_min=" << format_double(worst_w) << "\n";
  return 0;
}

int run_constants(const CommonOpts& o) {
  const KernelConstants kc = kernel_constants();
  const std::string json = "{\"C1\": " + format_double(kc.c1) +
                           ", \"I0\": " + format_double(kc.i0) +
                           ", \"phi_inf\": " + format_double(kc.phi_inf) +
                           ", \"C0\": " + format_double(kc.c0) + "}";
  std::cout << json << "\n";
  ensure_directory(o.out);
  write_text_file(o.out + "/constants.json", json + "\n");
  return 0;
}

int run_selftest(const CommonOpts& o) {
  AcceptanceOptions ao;
  ao.out_dir = o.out;
  ao.seed = o.seed;
  const AcceptanceReport report = run_acceptance(ao);
  return report.all_pass() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracshape: nonlocal Dirichlet solver and shape optimizer on "
               "star-shaped planar domains"};
  app.require_subcommand(1);
  CommonOpts o;

  auto* c_solve = app.add_subcommand("solve", "solve the Dirichlet problem");
  bool dump = false;
  add_common(c_solve, o, true);
  c_solve->add_option("--grid", o.grid, "solution CSV grid resolution");
  c_solve->add_option("--source", o.source, "source field: one | poly:a[,b[,c]]");
  c_solve->add_flag("--dump", dump, "also write the binary system dump");

  auto* c_trace = app.add_subcommand("trace", "extract the boundary trace psi0");
  add_common(c_trace, o, true);
  c_trace->add_option("--source", o.source, "source field");

  auto* c_energy = app.add_subcommand("energy", "report the shape energy J");
  add_common(c_energy, o, true);
  c_energy->add_option("--source", o.source, "source field");

  auto* c_dshape = app.add_subcommand(
      "dshape", "analytic vs finite-difference shape derivative");
  add_common(c_dshape, o, true);
  c_dshape->add_option("--zeta", o.zeta, "velocity field: dilation|tx|ty|modeM");
  c_dshape->add_option("--step", o.step, "finite-difference step h (default 0.02)");
  c_dshape->add_flag("--richardson", o.richardson, "extrapolate with h and h/2");
  c_dshape->add_option("--source", o.source, "source field");

  auto* c_opt = app.add_subcommand("optimize", "gradient descent to the disk");
  add_common(c_opt, o, true);
  c_opt->add_option("--step", o.step, "initial line-search step");
  c_opt->add_option("--iters", o.iters, "maximum iterations");
  c_opt->add_option("--tol", o.tol, "stopping tolerance on the predicted decrease");
  c_opt->add_option("--source", o.source, "source field");

  auto* c_sym = app.add_subcommand("symmetry", "moving-plane diagnostics");
  add_common(c_sym, o, true);
  c_sym->add_option("--directions", o.directions, "number of sweep directions");
  c_sym->add_option("--source", o.source, "source field");

  auto* c_const = app.add_subcommand("constants", "print the operator constants");
  add_common(c_const, o, false);

  auto* c_self = app.add_subcommand("selftest", "run the full acceptance suite");
  add_common(c_self, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (c_solve->parsed()) return run_solve(o, dump);
    if (c_trace->parsed()) return run_trace(o);
    if (c_energy->parsed()) return run_energy(o);
    if (c_dshape->parsed()) return run_dshape(o);
    if (c_opt->parsed()) return run_optimize(o);
    if (c_sym->parsed()) return run_symmetry(o);
    if (c_const->parsed()) return run_constants(o);
    if (c_self->parsed()) return run_selftest(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
