#pragma once
/// End-to-end verification suite: twelve numbered checks covering the
/// solver, the operator constants, the boundary trace, energy values, the
/// shape-derivative identities, optimization to the disk, moving-plane
/// symmetry, tubular geometry, and artifact determinism. Each check prints a
/// single PASS/FAIL line; artifacts land in a caller-chosen directory with a
/// deterministic layout and byte content.

#include <iosfwd>
#include <string>
#include <vector>

namespace fracshape {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  bool all_pass() const;
};

struct AcceptanceOptions {
  std::string out_dir = "selftest_out";
  unsigned long long seed = 12345;
  std::ostream* log = nullptr;  ///< defaults to std::cout
};

AcceptanceReport run_acceptance(const AcceptanceOptions& opts = {});

}  // namespace fracshape
