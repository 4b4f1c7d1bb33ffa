#include <gtest/gtest.h>

#include "kforest/spanning_tree.hpp"
#include "kforest/wilson_sampler.hpp"

using namespace kforest;

namespace {

RootedSpanningSubtree tree(std::vector<std::pair<Vertex, Vertex>> edges, std::vector<Label> marked) {
  return RootedSpanningSubtree{std::move(edges), std::move(marked)};
}

}  // namespace

TEST(Reduce, CherryUnderOneInnerVertex) {
  const auto obs = reduce_observation(tree({{5, kRoot}, {1, 5}, {2, 5}}, {1, 2}));
  EXPECT_EQ(obs.classification, Classification::kBinaryBouquet);
  EXPECT_EQ(obs.r, 1u);
  EXPECT_EQ(obs.d, 3u);
  EXPECT_EQ(obs.inner_count, 1u);
  EXPECT_EQ(obs.shape_key, "((1,2))");
  EXPECT_EQ(obs.class_key(), "((1,2))#0,0,0");
  ASSERT_TRUE(obs.bouquet.has_value());
  EXPECT_EQ(canonical_string(*obs.bouquet), "((1,2))");
}

TEST(Reduce, ExtensionsCountSuppressedVertices) {
  // 1 - 7 - 8 - Δ and 2 - 9 - Δ
  const auto obs =
      reduce_observation(tree({{8, kRoot}, {7, 8}, {1, 7}, {9, kRoot}, {2, 9}}, {1, 2}));
  EXPECT_EQ(obs.r, 2u);
  EXPECT_EQ(obs.extensions(), (std::vector<std::uint64_t>{2, 1}));
  EXPECT_EQ(obs.extension_sum(), 3u);
  EXPECT_EQ(obs.d, 5u);
  EXPECT_EQ(obs.inner_count, obs.extension_sum());
  EXPECT_EQ(obs.class_key(), "((1))|((2))#2,1");
  EXPECT_EQ(obs.partition().blocks, (std::vector<std::vector<Label>>{{1}, {2}}));
}

TEST(Reduce, InnerCountIsSuppressedPlusUnmarkedBranchPoints) {
  // Δ - 4 - 6 - {1, 3 - 2}: branch point 6, suppressed 4 and 3.
  const auto obs =
      reduce_observation(tree({{4, kRoot}, {6, 4}, {1, 6}, {3, 6}, {2, 3}}, {1, 2}));
  EXPECT_EQ(obs.classification, Classification::kBinaryBouquet);
  EXPECT_EQ(obs.inner_count, 3u);
  EXPECT_EQ(obs.extension_sum() + 1, obs.inner_count);
  EXPECT_EQ(obs.class_key(), "((1,2))#1,0,1");
}

TEST(Reduce, MarkedAncestorIsDegenerate) {
  const auto obs = reduce_observation(tree({{1, kRoot}, {2, 1}}, {1, 2}));
  EXPECT_EQ(obs.classification, Classification::kDegenerate);
  EXPECT_FALSE(obs.bouquet.has_value());
  EXPECT_EQ(obs.class_key(), "((1[2]))#0,0");
  EXPECT_EQ(obs.r, 1u);
}

TEST(Reduce, TernaryBranchIsDegenerate) {
  const auto obs = reduce_observation(tree({{4, kRoot}, {1, 4}, {2, 4}, {3, 4}}, {1, 2, 3}));
  EXPECT_EQ(obs.classification, Classification::kDegenerate);
  EXPECT_EQ(obs.r, 1u);
}

TEST(Reduce, StructuralErrors) {
  EXPECT_THROW(reduce_observation(tree({{1, kRoot}}, {1, 2})), StructuralError);
  EXPECT_THROW(reduce_observation(tree({{1, 2}, {2, 1}}, {1, 2})), StructuralError);
  EXPECT_THROW(reduce_observation(tree({{1, kRoot}, {1, 3}, {3, kRoot}}, {1})), StructuralError);
  EXPECT_THROW(reduce_observation(tree({{1, kRoot}, {3, kRoot}}, {1})), StructuralError);
}

TEST(Reduce, FromBouquetMatchesReduction) {
  const auto obs = reduce_observation(tree({{8, kRoot}, {7, 8}, {1, 7}, {9, kRoot}, {2, 9}}, {1, 2}));
  const std::vector<std::uint64_t> u{2, 1};
  const auto built = ReducedObservation::from_bouquet(*obs.bouquet, u);
  EXPECT_EQ(built.class_key(), obs.class_key());
  EXPECT_EQ(built.d, obs.d);
  EXPECT_EQ(built.inner_count, obs.inner_count);
  const std::vector<std::uint64_t> wrong{1};
  EXPECT_THROW(ReducedObservation::from_bouquet(*obs.bouquet, wrong), std::invalid_argument);
}

TEST(Contour, CherryPath) {
  const auto t = tree({{5, kRoot}, {2, 5}, {1, 5}}, {1, 2});
  const auto path = contour_encode(t);
  EXPECT_TRUE(path.valid());
  EXPECT_EQ(path.steps, (std::vector<std::int8_t>{1, 1, -1, 1, -1, -1}));
  EXPECT_EQ(path.heights(), (std::vector<std::int64_t>{0, 1, 2, 1, 2, 1, 0}));
  EXPECT_EQ(excursion_partition(path).blocks, (std::vector<std::vector<Label>>{{1, 2}}));
  EXPECT_EQ(plane_shape_string(t), plane_shape_string(contour_decode(path), false));
}

TEST(Contour, ExcursionsAreRootComponents) {
  const auto t = tree({{9, kRoot}, {2, 9}, {1, kRoot}, {3, 1}}, {1, 2, 3});
  const auto path = contour_encode(t);
  EXPECT_TRUE(path.valid());
  EXPECT_EQ(excursion_partition(path), reduce_observation(t).partition());
  EXPECT_EQ(excursion_partition(path).blocks, (std::vector<std::vector<Label>>{{1, 3}, {2}}));
}

TEST(Contour, InvalidPathsAreRejected) {
  DyckPath p;
  p.steps = {1, -1, -1, 1};
  EXPECT_FALSE(p.valid());
  p.steps = {1, 1, -1};
  EXPECT_FALSE(p.valid());
}

TEST(Contour, RoundTripOnSampledTrees) {
  for (std::uint32_t l : {1u, 2u, 4u}) {
    WilsonSampler sampler({300, 2.0, l});
    for (std::uint64_t i = 0; i < 400; ++i) {
      Engine rng = RngStream{77, i}.engine();
      const auto t = sampler.sample(rng);
      const auto obs = reduce_observation(t);
      const auto path = contour_encode(t);
      ASSERT_TRUE(path.valid());
      ASSERT_EQ(path.steps.size(), 2 * t.vertex_count());
      const auto back = contour_decode(path);
      EXPECT_EQ(plane_shape_string(back, false), plane_shape_string(t));
      EXPECT_EQ(reduce_observation(back).class_key(), obs.class_key());
      EXPECT_EQ(excursion_partition(path), obs.partition());
      EXPECT_EQ(obs.d, t.vertex_count());
    }
  }
}
