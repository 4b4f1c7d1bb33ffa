// Goodness-of-fit statistics for comparing Monte Carlo output to exact or
// limiting laws.
//
// Chi-square pooling rule: every key whose expected count is below
// kMinExpectedCount goes into a single pooled cell, together with the
// "other" cell (theoretical mass 1 - Σp and empirical keys without a
// theoretical probability). If the pooled cell is still below the threshold
// it is merged into the kept cell with the smallest expected count.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace kforest {

using CountMap = std::map<std::string, std::uint64_t>;
using ProbabilityMap = std::map<std::string, double>;

inline constexpr double kMinExpectedCount = 5.0;

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  std::size_t cells = 0;  // after pooling
};

struct ComparisonStats {
  std::uint64_t samples = 0;
  ChiSquareResult chi_square;
  double total_variation = 0.0;
};

// Throws std::invalid_argument on an empty empirical map.
ChiSquareResult chi_square_test(const CountMap& empirical, const ProbabilityMap& theoretical);
double total_variation_distance(const CountMap& empirical, const ProbabilityMap& theoretical);
ComparisonStats compare_distributions(const CountMap& empirical, const ProbabilityMap& theoretical);

// Upper tail of the chi-square law with `dof` degrees of freedom.
double chi_square_survival(double statistic, std::size_t dof);

// sup_x |F_n(x) - F(x)|; sorts a copy of the samples.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

// Asymptotic P(√n D_n > x√n) from the Kolmogorov series.
double ks_p_value(double distance, std::size_t n);

}  // namespace kforest
