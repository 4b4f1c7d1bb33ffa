// Wilson's algorithm with killing on K_N, stopped after the marked vertices
// have been attached. Only the loop-erased paths from 1..l are built; at that
// point the tree of used vertices is exactly the subtree spanned by L.

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "kforest/exact_model.hpp"
#include "kforest/spanning_tree.hpp"

namespace kforest {

using Engine = std::mt19937_64;

// Identifies one reproducible random stream: the same (seed, stream_id)
// always produces the same engine state.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  Engine engine() const;
};

class StepBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultStepBudget = 1'000'000'000ULL;

// Reusable sampler state for one N. Not thread-safe; use one per worker.
class WilsonSampler {
 public:
  explicit WilsonSampler(const ModelParams& params,
                         std::uint64_t step_budget = kDefaultStepBudget);

  const ModelParams& params() const { return params_; }
  double kill_probability() const { return kill_probability_; }

  // Empties the occupied set back to {Δ}.
  void reset();
  void occupy(Vertex v);
  bool occupied(Vertex v) const { return v == kRoot || stamp_[v] == epoch_; }

  // Runs the killed walk from `start` until it hits the occupied set and
  // returns the loop-erased path, start first and the hit vertex last. The
  // path is not added to the occupied set.
  std::vector<Vertex> killed_lerw(Vertex start, Engine& rng);

  // Clears the occupied set, then attaches 1..l in turn.
  RootedSpanningSubtree sample(Engine& rng);

  // Walk steps taken since construction.
  std::uint64_t steps() const { return total_steps_; }

 private:
  Vertex step_from(Vertex v, Engine& rng);

  ModelParams params_;
  std::uint64_t step_budget_;
  double kill_probability_;
  std::vector<std::uint32_t> stamp_;
  std::vector<Vertex> next_;
  std::uint32_t epoch_ = 1;
  std::uint64_t total_steps_ = 0;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::uniform_int_distribution<Vertex> neighbour_;
};

// One-shot forms.
std::vector<Vertex> killed_lerw(Vertex start, std::span<const Vertex> occupied,
                                const ModelParams& params, Engine& rng);
RootedSpanningSubtree sample_reduced_subtree(const ModelParams& params, Engine& rng);

}  // namespace kforest
