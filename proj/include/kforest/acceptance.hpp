// The acceptance suite: one self-contained check per numbered criterion.
// Used by the `validate` subcommand and by the per-criterion ctest entries.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kforest {

struct AcceptanceOptions {
  std::uint64_t seed = 20240607;
  unsigned workers = 1;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 11;

// Throws std::out_of_range for an id outside 1..kCriterionCount.
CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});
std::vector<CriterionResult> run_acceptance_suite(const AcceptanceOptions& options = {});

// "[PASS] 3 title: detail (1.23 s)"
std::string format_result_line(const CriterionResult& result);

}  // namespace kforest
