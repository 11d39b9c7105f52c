#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace magweyl::verify {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

// run the whole invariant suite on small fixed grids (seconds, deterministic)
std::vector<CheckResult> run_all();

// aligned table; returns true when every row passed
bool print_table(std::ostream& os, const std::vector<CheckResult>& rows);

}  // namespace magweyl::verify
