// Runs the numbered end-to-end acceptance checks and prints one PASS/FAIL
// line each; exits nonzero if any check fails.
#include <iostream>

#include "fracshape/selftest.hpp"

int main() {
  fracshape::AcceptanceOptions opts;
  opts.out_dir = "acceptance_out";
  opts.log = &std::cout;
  const fracshape::AcceptanceReport report = fracshape::run_acceptance(opts);
  return report.all_pass() ? 0 : 1;
}
