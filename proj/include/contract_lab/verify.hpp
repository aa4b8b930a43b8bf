#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "contract_lab/parallel.hpp"

namespace contract_lab {

struct InvariantResult {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  std::string detail;
};

/// Runs the full invariant battery over the built-in scenarios. Margins are
/// oriented so pass <=> margin > 0.
std::vector<InvariantResult> run_verification(ExecutionMode mode = ExecutionMode::Parallel);

/// Prints one pass/fail line per invariant with its margin; returns true iff
/// everything passed.
bool print_verification(std::ostream& os, ExecutionMode mode = ExecutionMode::Parallel);

}  // namespace contract_lab
