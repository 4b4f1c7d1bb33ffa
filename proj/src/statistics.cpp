#include "kforest/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace kforest {

namespace {

std::uint64_t total_count(const CountMap& m) {
  std::uint64_t n = 0;
  for (const auto& [k, c] : m) n += c;
  return n;
}

}  // namespace

double chi_square_survival(double statistic, std::size_t dof) {
  if (dof == 0) return 1.0;
  if (!std::isfinite(statistic)) return 0.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * double(dof), 0.5 * statistic);
}

ChiSquareResult chi_square_test(const CountMap& empirical, const ProbabilityMap& theoretical) {
  const std::uint64_t n = total_count(empirical);
  if (n == 0) throw std::invalid_argument("chi_square_test: no empirical samples");

  struct Cell {
    double observed = 0.0;
    double expected = 0.0;
  };
  std::vector<Cell> kept;
  Cell pooled;
  double mass = 0.0;
  for (const auto& [key, p] : theoretical) {
    if (p < 0.0) throw std::invalid_argument("chi_square_test: negative probability");
    mass += p;
    auto it = empirical.find(key);
    const Cell cell{it == empirical.end() ? 0.0 : double(it->second), p * double(n)};
    if (cell.expected >= kMinExpectedCount) {
      kept.push_back(cell);
    } else {
      pooled.observed += cell.observed;
      pooled.expected += cell.expected;
    }
  }
  for (const auto& [key, c] : empirical)
    if (!theoretical.contains(key)) pooled.observed += double(c);
  pooled.expected += std::max(0.0, 1.0 - mass) * double(n);

  if (pooled.expected >= kMinExpectedCount) {
    kept.push_back(pooled);
  } else if (pooled.observed > 0.0 || pooled.expected > 0.0) {
    if (kept.empty()) {
      kept.push_back(pooled);
    } else {
      auto smallest = std::min_element(kept.begin(), kept.end(), [](const Cell& a, const Cell& b) {
        return a.expected < b.expected;
      });
      smallest->observed += pooled.observed;
      smallest->expected += pooled.expected;
    }
  }

  ChiSquareResult out;
  out.cells = kept.size();
  for (const auto& cell : kept) {
    if (cell.expected <= 0.0) {
      if (cell.observed > 0.0) out.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    const double diff = cell.observed - cell.expected;
    out.statistic += diff * diff / cell.expected;
  }
  out.dof = kept.empty() ? 0 : kept.size() - 1;
  out.p_value = chi_square_survival(out.statistic, out.dof);
  return out;
}

double total_variation_distance(const CountMap& empirical, const ProbabilityMap& theoretical) {
  const std::uint64_t n = total_count(empirical);
  if (n == 0) throw std::invalid_argument("total_variation_distance: no empirical samples");
  double tv = 0.0, mass = 0.0, other_freq = 0.0;
  for (const auto& [key, p] : theoretical) {
    mass += p;
    auto it = empirical.find(key);
    const double f = it == empirical.end() ? 0.0 : double(it->second) / double(n);
    tv += std::abs(f - p);
  }
  for (const auto& [key, c] : empirical)
    if (!theoretical.contains(key)) other_freq += double(c) / double(n);
  tv += std::abs(other_freq - std::max(0.0, 1.0 - mass));
  return 0.5 * tv;
}

ComparisonStats compare_distributions(const CountMap& empirical, const ProbabilityMap& theoretical) {
  ComparisonStats s;
  s.samples = total_count(empirical);
  s.chi_square = chi_square_test(empirical, theoretical);
  s.total_variation = total_variation_distance(empirical, theoretical);
  return s;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size();) {
    // Ties: the empirical CDF jumps once per distinct value.
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double f = cdf(samples[i]);
    d = std::max({d, std::abs(f - double(i) / n), std::abs(double(j) / n - f)});
    i = j;
  }
  return d;
}

double ks_p_value(double distance, std::size_t n) {
  const double x = distance * std::sqrt(double(n));
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace kforest
