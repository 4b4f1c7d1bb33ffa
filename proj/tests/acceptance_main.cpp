// Prints one PASS/FAIL line per acceptance criterion. With --criterion k only
// that criterion runs; the exit status is nonzero if any selected one fails.

#include <cstdlib>
#include <iostream>
#include <string>

#include "kforest/acceptance.hpp"

int main(int argc, char** argv) {
  kforest::AcceptanceOptions opt;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (arg == "--workers" && i + 1 < argc) {
      opt.workers = static_cast<unsigned>(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: kforest_acceptance [--criterion k] [--workers w]\n";
      return 2;
    }
  }
  if (only < 0 || only > kforest::kCriterionCount) {
    std::cerr << "no such criterion: " << only << '\n';
    return 2;
  }
  bool all = true;
  for (int id = 1; id <= kforest::kCriterionCount; ++id) {
    if (only && id != only) continue;
    const auto r = kforest::run_criterion(id, opt);
    std::cout << kforest::format_result_line(r) << std::endl;
    all = all && r.passed;
  }
  return all ? 0 : 1;
}
