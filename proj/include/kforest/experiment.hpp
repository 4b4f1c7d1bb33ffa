// Monte Carlo driver: runs independent Wilson samples, aggregates the
// reduced observations and compares them with the exact and limiting laws.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kforest/exact_model.hpp"
#include "kforest/spanning_tree.hpp"
#include "kforest/statistics.hpp"
#include "kforest/wilson_sampler.hpp"

namespace kforest {

enum class KappaMode { kFixed, kCritical };

struct ExperimentConfig {
  std::uint32_t n = 1;
  KappaMode kappa_mode = KappaMode::kFixed;
  double kappa_value = 1.0;  // κ when fixed, c when critical
  std::uint32_t l = 1;
  std::uint64_t replicates = 1;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::uint64_t step_budget = kDefaultStepBudget;

  void validate() const;  // throws std::invalid_argument
  double kappa() const;
  // c_N = κ/√N, whichever way κ was given.
  double critical_constant() const;
  ModelParams model() const;
};

struct ObservationRecord {
  std::uint64_t replicate = 0;
  bool budget_exceeded = false;
  ReducedObservation obs;  // empty when budget_exceeded
  std::uint64_t steps = 0;
};

// Graph distance from a marked vertex to Δ in the embedded tree.
std::uint64_t marked_depth(const ReducedObservation& obs, Label label);

// One record per replicate, in replicate order. Replicate i always uses
// RngStream{seed, i}, so the output does not depend on `workers`.
std::vector<ObservationRecord> run_observations(const ExperimentConfig& config);

struct ClassTally {
  std::string shape_key;
  Classification classification = Classification::kDegenerate;
  std::size_t r = 0;
  std::uint64_t d = 0;
  std::uint64_t count = 0;
  std::optional<double> exact_probability;
};

struct ShapeTally {
  Classification classification = Classification::kDegenerate;
  std::size_t r = 0;
  std::uint64_t count = 0;
  std::optional<double> limit_probability;
};

struct Histogram {
  double bin_width = 0.1;
  std::vector<std::uint64_t> bins;  // last bin collects everything above
};

struct ExperimentReport {
  ExperimentConfig config;
  double kappa = 0.0;
  double c = 0.0;
  std::uint64_t samples = 0;          // successful replicates
  std::uint64_t budget_failures = 0;  // flagged, never dropped silently
  std::vector<std::uint64_t> failed_replicates;

  std::map<std::string, ClassTally> classes;  // by class key
  std::map<std::string, ShapeTally> shapes;   // by shape key
  std::map<std::string, std::uint64_t> classification_counts;
  std::vector<std::uint64_t> block_counts;  // index r
  std::vector<double> block_count_limit;    // index r
  Histogram rescaled_length;                // Σu / √N

  // Distance of vertex 1 to Δ rescaled by √N, against the limit CDF.
  double mean_rescaled_distance = 0.0;
  double mean_rescaled_marked_distance = 0.0;  // averaged over all of L
  double ks_distance = 0.0;
  double ks_p_value = 1.0;

  std::optional<ComparisonStats> exact_comparison;  // class keys, N <= kMaxOracleN
  std::optional<ComparisonStats> limit_comparison;  // shape keys

  std::uint64_t total_steps = 0;
  double runtime_seconds = 0.0;

  double frequency(std::uint64_t count) const {
    return samples ? double(count) / double(samples) : 0.0;
  }
  double block_count_frequency(std::size_t r) const {
    return r < block_counts.size() ? frequency(block_counts[r]) : 0.0;
  }
  double shape_frequency(const std::string& shape_key) const;
  double classification_frequency(Classification c) const;
};

inline constexpr int kReportSchemaVersion = 1;

// Largest l for which limit shape probabilities are enumerated.
inline constexpr std::uint32_t kMaxLimitShapeL = 7;

ExperimentReport summarize(const ExperimentConfig& config,
                           const std::vector<ObservationRecord>& records);
ExperimentReport run_monte_carlo(const ExperimentConfig& config);

// Limiting probability of every binary bouquet shape key: uniform over the
// single-tree shapes for fixed κ, I_{l,r}(c) per configuration when critical.
ProbabilityMap limit_shape_probabilities(const ExperimentConfig& config);

// Run-dependent fields live under "timing" so the rest is reproducible.
nlohmann::json to_json(const ExperimentReport& report);

// replicate,classification,canonical_key,r,u_1..u_{2l-1},d
void write_observation_csv(std::ostream& os, const ExperimentConfig& config,
                           const std::vector<ObservationRecord>& records);

}  // namespace kforest
