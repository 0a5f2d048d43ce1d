#pragma once

#include "sqg/sg.hpp"

#include <string>
#include <vector>

namespace sqg {

// Batch re-derivation of the closed-form tables and structural laws the
// library implements, each suite reported under a stable anchor name.
// Suites skip instances whose finite groups exceed max_order, so lowering
// the bound runs a strict subset of the checks. Setting the environment
// variable SQG_VERIFY_MUTATE corrupts one expected table entry; the run
// must then fail on the functor-tables anchor, which exercises the
// reporting path itself.

struct VerifyBounds {
  Int max_order = 64;
};

struct VerifyLine {
  std::string anchor;
  bool ok = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyLine> lines;
  bool all_ok = true;
};

VerifyReport verify_all(const VerifyBounds& bounds = {});
std::string format_report(const VerifyReport& report);

}  // namespace sqg
