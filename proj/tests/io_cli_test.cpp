#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "fracshape/errors.hpp"
#include "fracshape/io.hpp"
#include "support/oracles.hpp"

using namespace fracshape;
using namespace fracshape::testing;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) lines.push_back(line);
  return lines;
}

int run_command(const std::string& command) {
  const int rc = std::system(command.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string cli_path() {
  const char* cli = std::getenv("FRACSHAPE_CLI");
  REQUIRE(cli != nullptr);
  return cli;
}

GalerkinSystem tiny_system() {
  return assemble(WeightedBasis(make_disk(), 1, 1), unit_source(),
                  {16, 8, 8, 8, 2.0});
}

}  // namespace

TEST_CASE("format_double is fixed-width scientific") {
  CHECK(format_double(1.0) == "1.000000000000000e+00");
  CHECK(format_double(-0.5) == "-5.000000000000000e-01");
  CHECK(format_double(0.0) == "0.000000000000000e+00");
}

TEST_CASE("curve JSON round trip preserves every coefficient exactly") {
  FourierRadius rho;
  rho.a0 = 1.1;
  rho.cos_coeffs = {0.05, 0.0, 0.02};
  rho.sin_coeffs = {-0.03};
  const BoundaryCurve curve({0.25, -0.5}, rho);
  const BoundaryCurve back = parse_curve_json(curve_to_json(curve));
  CHECK(back.center().x == curve.center().x);
  CHECK(back.center().y == curve.center().y);
  CHECK(back.radius().a0 == curve.radius().a0);
  REQUIRE(back.radius().cos_coeffs == curve.radius().cos_coeffs);
  REQUIRE(back.radius().sin_coeffs == curve.radius().sin_coeffs);
}

TEST_CASE("curve JSON rejects malformed input") {
  CHECK_THROWS_AS(parse_curve_json("{\"a0\": 1.0, \"radius\": 2}"),
                  ValidationError);
  CHECK_THROWS_AS(parse_curve_json("not json {"), ValidationError);
  CHECK_THROWS_AS(parse_curve_json("{\"cos\": [0.1]}"), ValidationError);
  CHECK_THROWS_AS(parse_curve_json("{\"a0\": \"one\"}"), ValidationError);
  CHECK_THROWS_AS(parse_curve_json("{\"a0\": 1.0, \"center\": [1.0]}"),
                  ValidationError);
  CHECK_THROWS_AS(parse_curve_json("{\"a0\": 1.0, \"cos\": [true]}"),
                  ValidationError);
  CHECK_THROWS_AS(parse_curve_json("{\"a0\": -1.0}"), ValidationError);
  CHECK_THROWS_AS(read_curve_json("/nonexistent/curve.json"), ValidationError);
}

TEST_CASE("system dump round trip is bit exact") {
  const auto dir = scratch_dir("fracshape_io_dump");
  const std::string path = (dir / "system.bin").string();
  const GalerkinSystem sys = tiny_system();
  write_system_dump(path, sys);
  const SystemDump dump = read_system_dump(path);
  REQUIRE(dump.dim == sys.stiffness.rows());
  CHECK(dump.stiffness == sys.stiffness);
  CHECK(dump.load == sys.load);
}

TEST_CASE("system dump rejects corrupted files") {
  const auto dir = scratch_dir("fracshape_io_corrupt");
  const std::string path = (dir / "system.bin").string();
  write_system_dump(path, tiny_system());
  std::filesystem::resize_file(path, 16 + 10 * 8);
  CHECK_THROWS_AS(read_system_dump(path), ValidationError);
  write_text_file(path, "XXXXnot a dump at all");
  CHECK_THROWS_AS(read_system_dump(path), ValidationError);
  CHECK_THROWS_AS(read_system_dump((dir / "missing.bin").string()),
                  ValidationError);
}

TEST_CASE("csv writers emit the documented headers and row counts") {
  const auto dir = scratch_dir("fracshape_io_csv");

  TraceProfile profile;
  profile.s_nodes = {0.0, 1.0, 2.0};
  profile.psi0 = {0.9, 0.8, 0.85};
  profile.fit_residuals = {1e-5, 2e-5, 3e-5};
  profile.length = 3.0;
  write_trace_csv((dir / "trace.csv").string(), profile);
  const auto trace_lines = lines_of(read_file(dir / "trace.csv"));
  REQUIRE(trace_lines.size() == 4);
  CHECK(trace_lines[0] == "s,psi0,residual");
  CHECK(trace_lines[1] ==
        "0.000000000000000e+00,9.000000000000000e-01,1.000000000000000e-05");

  std::vector<OptimizationRecord> history(2);
  history[1].iteration = 1;
  history[1].j = -0.5;
  write_history_csv((dir / "history.csv").string(), history);
  const auto history_lines = lines_of(read_file(dir / "history.csv"));
  REQUIRE(history_lines.size() == 3);
  CHECK(history_lines[0] == "iter,J,serrin,roundness,step");

  SolverOptions opts;
  opts.k_rad = 1;
  opts.k_ang = 1;
  opts.quad = {16, 8, 8, 8, 2.0};
  const SolutionField sol = solve_dirichlet(make_disk(), unit_source(), opts);
  write_solution_csv((dir / "solution.csv").string(), sol, 9);
  const auto sol_lines = lines_of(read_file(dir / "solution.csv"));
  REQUIRE(sol_lines.size() == 1 + 9 * 9);
  CHECK(sol_lines[0] == "x,y,u");
  for (const std::string& line : sol_lines)
    CHECK(std::count(line.begin(), line.end(), ',') == 2);
}

TEST_CASE("cli: constants command writes the expected values") {
  const auto dir = scratch_dir("fracshape_cli_constants");
  const int rc = run_command("'" + cli_path() + "' constants --out '" +
                             dir.string() + "' > /dev/null");
  CHECK(rc == 0);
  const auto doc = nlohmann::json::parse(read_file(dir / "constants.json"));
  CHECK(std::abs(doc["C1"].get<double>() - 1.0 / (2.0 * M_PI)) < 1e-12);
  CHECK(std::abs(doc["I0"].get<double>() - M_PI * M_PI) < 1e-8);
  CHECK(doc["phi_inf"].get<double>() == 1.0);
  CHECK(std::abs(doc["C0"].get<double>() + M_PI / 8.0) < 1e-12);
}

TEST_CASE("cli: solve produces artifacts with the right center value") {
  const auto dir = scratch_dir("fracshape_cli_solve");
  const std::string domain = (dir / "disk.json").string();
  write_curve_json(domain, make_disk());
  const int rc = run_command(
      "'" + cli_path() + "' solve --domain '" + domain + "' --out '" +
      dir.string() + "' --quad fast --krad 3 --kang 2 --grid 33 > /dev/null");
  CHECK(rc == 0);

  const auto coeffs = nlohmann::json::parse(read_file(dir / "coeffs.json"));
  CHECK(coeffs["k_rad"].get<int>() == 3);
  CHECK(coeffs["k_ang"].get<int>() == 2);
  CHECK(coeffs["coeffs"].size() == 4 * 5);
  CHECK(coeffs["solve_residual"].get<double>() < 1e-10);

  const auto sol_lines = lines_of(read_file(dir / "solution.csv"));
  REQUIRE(sol_lines.size() == 1 + 33 * 33);
  double u_max = 0.0;
  for (std::size_t i = 1; i < sol_lines.size(); ++i) {
    const auto comma = sol_lines[i].rfind(',');
    u_max = std::max(u_max, std::stod(sol_lines[i].substr(comma + 1)));
  }
  CHECK(std::abs(u_max - 2.0 / M_PI) < 5e-3);
}

TEST_CASE("cli: solve artifacts are byte-identical across thread counts") {
  const auto dir = scratch_dir("fracshape_cli_threads");
  const std::string domain = (dir / "disk.json").string();
  write_curve_json(domain, make_disk());
  for (const char* threads : {"1", "4"}) {
    const int rc = run_command(
        std::string("FRACSHAPE_THREADS=") + threads + " '" + cli_path() +
        "' solve --domain '" + domain + "' --out '" +
        (dir / ("t" + std::string(threads))).string() +
        "' --quad fast --krad 3 --kang 2 > /dev/null");
    CHECK(rc == 0);
  }
  CHECK(read_file(dir / "t1" / "coeffs.json") ==
        read_file(dir / "t4" / "coeffs.json"));
  CHECK(read_file(dir / "t1" / "solution.csv") ==
        read_file(dir / "t4" / "solution.csv"));
}

TEST_CASE("cli: trace writes one row per boundary node") {
  const auto dir = scratch_dir("fracshape_cli_trace");
  const std::string domain = (dir / "disk.json").string();
  write_curve_json(domain, make_disk());
  const int rc =
      run_command("'" + cli_path() + "' trace --domain '" + domain +
                  "' --out '" + dir.string() + "' > /dev/null");
  CHECK(rc == 0);
  const auto trace_lines = lines_of(read_file(dir / "trace.csv"));
  REQUIRE(trace_lines.size() == 1 + 128);
  CHECK(std::filesystem::exists(dir / "trace.svg"));
  const double psi0 = std::stod(trace_lines[1].substr(trace_lines[1].find(',') + 1));
  CHECK(std::abs(psi0 - 2.0 * std::sqrt(2.0) / M_PI) < 0.01);
}

TEST_CASE("cli: invalid usage and invalid inputs exit with code 2") {
  const auto dir = scratch_dir("fracshape_cli_errors");
  const std::string quiet = " > /dev/null 2>&1";
  CHECK(run_command("'" + cli_path() + "' solve" + quiet) == 2);
  CHECK(run_command("'" + cli_path() + "' solve --domain x --no-such-flag" +
                    quiet) == 2);
  CHECK(run_command("'" + cli_path() + "' solve --domain '" +
                    (dir / "missing.json").string() + "'" + quiet) == 2);
  const std::string bad = (dir / "bad.json").string();
  write_text_file(bad, "{\"a0\": ");
  CHECK(run_command("'" + cli_path() + "' solve --domain '" + bad + "'" +
                    quiet) == 2);
  const std::string domain = (dir / "disk.json").string();
  write_curve_json(domain, make_disk());
  CHECK(run_command("'" + cli_path() + "' solve --domain '" + domain +
                    "' --quad 4,2,2,2" + quiet) == 2);
  CHECK(run_command("'" + cli_path() + "' solve --domain '" + domain +
                    "' --quad nonsense" + quiet) == 2);
}
