#include <gtest/gtest.h>

#include <set>

#include "kforest/statistics.hpp"
#include "kforest/wilson_sampler.hpp"

using namespace kforest;

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Engine a = RngStream{5, 0}.engine(), b = RngStream{5, 0}.engine();
  Engine c = RngStream{5, 1}.engine(), d = RngStream{6, 0}.engine();
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
}

TEST(Sampler, KillProbability) {
  WilsonSampler s({10, 3.0, 1});
  EXPECT_DOUBLE_EQ(s.kill_probability(), 3.0 / 12.0);
  WilsonSampler single({1, 0.1, 1});
  EXPECT_DOUBLE_EQ(single.kill_probability(), 1.0);
}

TEST(Sampler, SingleVertexGraph) {
  Engine rng = RngStream{1, 0}.engine();
  const auto t = sample_reduced_subtree({1, 0.5, 1}, rng);
  ASSERT_EQ(t.edges.size(), 1u);
  EXPECT_EQ(t.edges[0], (std::pair<Vertex, Vertex>{1, kRoot}));
}

TEST(Sampler, LoopErasedPathIsSelfAvoidingAndStopsAtOccupied) {
  const ModelParams params{50, 0.5, 1};
  const std::vector<Vertex> occupied{7, 9};
  for (std::uint64_t i = 0; i < 200; ++i) {
    Engine rng = RngStream{3, i}.engine();
    const auto path = killed_lerw(1, occupied, params, rng);
    ASSERT_GE(path.size(), 2u);
    EXPECT_EQ(path.front(), 1u);
    const Vertex end = path.back();
    EXPECT_TRUE(end == kRoot || end == 7 || end == 9);
    std::set<Vertex> seen(path.begin(), path.end());
    EXPECT_EQ(seen.size(), path.size());
    for (std::size_t k = 0; k + 1 < path.size(); ++k)
      EXPECT_TRUE(path[k] != 7 && path[k] != 9 && path[k] != kRoot);
  }
}

TEST(Sampler, TreeContainsMarkedVerticesAndHangsFromRoot) {
  WilsonSampler s({200, 1.0, 4});
  for (std::uint64_t i = 0; i < 300; ++i) {
    Engine rng = RngStream{9, i}.engine();
    const auto t = s.sample(rng);
    std::map<Vertex, Vertex> parent(t.edges.begin(), t.edges.end());
    ASSERT_EQ(parent.size(), t.edges.size());
    for (Label x = 1; x <= 4; ++x) {
      ASSERT_TRUE(parent.contains(x));
      Vertex v = x;
      std::size_t hops = 0;
      while (v != kRoot && hops++ <= parent.size()) v = parent.at(v);
      EXPECT_EQ(v, kRoot);
    }
  }
}

TEST(Sampler, StepBudgetIsEnforced) {
  WilsonSampler s({100000, 0.001, 1}, 10);
  Engine rng = RngStream{1, 0}.engine();
  EXPECT_THROW(s.sample(rng), StepBudgetExceeded);
}

TEST(Sampler, MatchesExactLawOnSmallGraphs) {
  struct Case {
    std::uint32_t n;
    double kappa;
    std::uint32_t l;
  };
  for (const Case& c : {Case{4, 0.5, 3}, Case{5, 1.0, 1}, Case{7, 3.0, 2}}) {
    const ModelParams params{c.n, c.kappa, c.l};
    const auto dist = brute_force_reduced_distribution(params);
    ProbabilityMap theory;
    for (const auto& [key, cls] : dist.classes) theory[key] = cls.probability;
    WilsonSampler s(params);
    CountMap counts;
    for (std::uint64_t i = 0; i < 30000; ++i) {
      Engine rng = RngStream{11, i}.engine();
      ++counts[reduce_observation(s.sample(rng)).class_key()];
    }
    const auto res = chi_square_test(counts, theory);
    EXPECT_GT(res.p_value, 1e-4) << c.n << ' ' << c.kappa << ' ' << c.l;
  }
}
