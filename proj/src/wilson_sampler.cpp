#include "kforest/wilson_sampler.hpp"

#include <algorithm>
#include <string>

namespace kforest {

Engine RngStream::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x6b666f72u};
  return Engine(seq);
}

WilsonSampler::WilsonSampler(const ModelParams& params, std::uint64_t step_budget)
    : params_(params),
      step_budget_(step_budget),
      kill_probability_(params.kappa / (params.kappa + double(params.n - 1))),
      stamp_(params.n + 1, 0),
      next_(params.n + 1, kRoot),
      neighbour_(1, params.n > 1 ? params.n - 1 : 1) {
  params_.validate();
}

void WilsonSampler::reset() {
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
}

void WilsonSampler::occupy(Vertex v) {
  if (v > params_.n) throw std::out_of_range("vertex out of range");
  if (v != kRoot) stamp_[v] = epoch_;
}

Vertex WilsonSampler::step_from(Vertex v, Engine& rng) {
  if (params_.n == 1 || unit_(rng) < kill_probability_) return kRoot;
  // Uniform over {1..N} \ {v}.
  const Vertex w = neighbour_(rng);
  return w >= v ? w + 1 : w;
}

std::vector<Vertex> WilsonSampler::killed_lerw(Vertex start, Engine& rng) {
  if (start == kRoot || start > params_.n) throw std::out_of_range("bad start vertex");
  if (occupied(start)) throw std::invalid_argument("killed_lerw: start is already occupied");

  // Last-exit loop erasure: next_[v] holds the most recent exit from v.
  std::uint64_t steps = 0;
  for (Vertex v = start; !occupied(v);) {
    const Vertex w = step_from(v, rng);
    next_[v] = w;
    v = w;
    if (++steps > step_budget_) {
      total_steps_ += steps;
      throw StepBudgetExceeded("killed_lerw exceeded step budget of " +
                               std::to_string(step_budget_));
    }
  }
  total_steps_ += steps;

  std::vector<Vertex> path{start};
  for (Vertex v = start; !occupied(v);) {
    v = next_[v];
    path.push_back(v);
  }
  return path;
}

RootedSpanningSubtree WilsonSampler::sample(Engine& rng) {
  reset();
  RootedSpanningSubtree tree;
  tree.marked.reserve(params_.l);
  for (Vertex s = 1; s <= params_.l; ++s) {
    tree.marked.push_back(s);
    if (occupied(s)) continue;
    const auto path = killed_lerw(s, rng);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      tree.edges.emplace_back(path[i], path[i + 1]);
      occupy(path[i]);
    }
  }
  return tree;
}

std::vector<Vertex> killed_lerw(Vertex start, std::span<const Vertex> occupied,
                                const ModelParams& params, Engine& rng) {
  WilsonSampler sampler(params);
  for (Vertex v : occupied) sampler.occupy(v);
  return sampler.killed_lerw(start, rng);
}

RootedSpanningSubtree sample_reduced_subtree(const ModelParams& params, Engine& rng) {
  WilsonSampler sampler(params);
  return sampler.sample(rng);
}

}  // namespace kforest
