#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <set>
#include <sstream>

#include "kforest/exact_model.hpp"

using namespace kforest;

namespace {

// Generator of the killed walk on K_N: rate 1 to every other vertex, κ to Δ.
Eigen::MatrixXd generator(std::uint32_t n, double kappa) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, -1.0);
  m.diagonal().setConstant(double(n) - 1.0 + kappa);
  return m;
}

}  // namespace

TEST(Green, MinorsMatchMatrixInverse) {
  for (std::uint32_t n : {1u, 2u, 5u, 9u}) {
    for (double kappa : {0.3, 1.0, 4.5}) {
      const Eigen::MatrixXd g = generator(n, kappa).inverse();
      for (std::uint32_t d = 1; d <= n; ++d) {
        const double det = g.topLeftCorner(d, d).determinant();
        EXPECT_NEAR(green_submatrix_det(n, kappa, d) / det, 1.0, 1e-10) << n << ' ' << d;
      }
    }
  }
  EXPECT_THROW(green_submatrix_det(3, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(green_submatrix_det(3, 1.0, 4), std::invalid_argument);
}

TEST(Oracle, WeightedTreeCountIsGeneratorDeterminant) {
  for (std::uint32_t n : {2u, 4u, 6u}) {
    const double kappa = 1.7;
    const auto dist = brute_force_reduced_distribution({n, kappa, 1});
    double weight = 0.0;
    for (const auto& [key, c] : dist.classes)
      for (std::size_t k = 0; k < c.trees_by_root_degree.size(); ++k)
        weight += double(c.trees_by_root_degree[k]) * std::pow(kappa, double(k));
    EXPECT_NEAR(weight / generator(n, kappa).determinant(), 1.0, 1e-12);
    EXPECT_EQ(dist.tree_count, std::uint64_t(std::pow(n + 1.0, n - 1.0) + 0.5));
  }
}

TEST(Oracle, PruferDecodesToDistinctTrees) {
  const std::uint32_t n = 3;
  std::set<std::vector<Vertex>> seen;
  for (Vertex a = 0; a <= n; ++a)
    for (Vertex b = 0; b <= n; ++b) {
      const auto parent = prufer_to_parents({a, b}, n);
      ASSERT_EQ(parent.size(), n + 1);
      for (Vertex v = 1; v <= n; ++v) {
        Vertex x = v;
        int hops = 0;
        while (x != kRoot && hops++ <= int(n)) x = parent[x];
        EXPECT_EQ(x, kRoot);
      }
      seen.insert(parent);
    }
  EXPECT_EQ(seen.size(), 16u);
  EXPECT_THROW(prufer_to_parents({1}, 3), std::invalid_argument);
}

TEST(Oracle, ClassesMatchClosedForm) {
  for (std::uint32_t n : {2u, 4u, 7u}) {
    for (std::uint32_t l = 1; l <= std::min(n, 4u); ++l) {
      const ModelParams params{n, 0.8, l};
      const auto dist = brute_force_reduced_distribution(params);
      EXPECT_NEAR(dist.total_probability(), 1.0, 1e-12);
      for (const auto& [key, c] : dist.classes)
        EXPECT_NEAR(c.probability, class_probability(l, c.r, c.inner_count, n, 0.8), 1e-13) << key;
    }
  }
}

TEST(Oracle, WorkersDoNotChangeTheResult) {
  const ModelParams params{6, 2.0, 3};
  const auto a = brute_force_reduced_distribution(params, 1);
  const auto b = brute_force_reduced_distribution(params, 3);
  ASSERT_EQ(a.classes.size(), b.classes.size());
  for (const auto& [key, c] : a.classes)
    EXPECT_EQ(c.trees_by_root_degree, b.classes.at(key).trees_by_root_degree);
}

TEST(Oracle, GoldenSmallInstance) {
  const auto dist = brute_force_reduced_distribution({3, 1.0, 2});
  std::ostringstream os;
  dist.write_csv(os);
  const std::string csv = os.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "canonical_key,r,d,probability");
  EXPECT_EQ(dist.classes.size(), 10u);
  EXPECT_EQ(dist.exact_probability(dist.classes.at("((1))|((2))#0,0"), 1), Rational(3, 16));
  EXPECT_EQ(dist.exact_probability(dist.classes.at("((1,2))#0,0,0"), 1), Rational(1, 16));
  EXPECT_EQ(dist.exact_probability(dist.classes.at("((1[2]))#0,0"), 1), Rational(3, 16));
}

TEST(Oracle, RejectsLargeN) {
  EXPECT_THROW(brute_force_reduced_distribution({kMaxOracleN + 1, 1.0, 1}), std::invalid_argument);
}

TEST(ClassProbability, ExactArithmeticAgrees) {
  const Rational k(3, 2);
  for (std::size_t inner = 0; inner <= 4; ++inner) {
    const double x = class_probability(2, 1, inner, 7, 1.5);
    const double y = static_cast<double>(class_probability_exact(2, 1, inner, 7, k));
    EXPECT_NEAR(x / y, 1.0, 1e-13);
  }
  EXPECT_EQ(class_probability(2, 1, 6, 7, 1.5), 0.0);
  EXPECT_EQ(class_probability_exact(2, 1, 6, 7, k), 0);
}

TEST(ClassProbability, BouquetMassMatchesOracle) {
  const ModelParams params{7, 1.3, 2};
  const auto dist = brute_force_reduced_distribution(params);
  std::map<std::string, double> by_shape;
  for (const auto& [key, c] : dist.classes) by_shape[c.shape_key] += c.probability;
  EXPECT_NEAR(by_shape.at("((1,2))"), bouquet_config_probability(2, 1, 7, 1.3), 1e-13);
  EXPECT_NEAR(by_shape.at("((1))|((2))"), bouquet_config_probability(2, 2, 7, 1.3), 1e-13);
}

TEST(ParseRational, Forms) {
  EXPECT_EQ(parse_rational("2"), 2);
  EXPECT_EQ(parse_rational("0.5"), Rational(1, 2));
  EXPECT_EQ(parse_rational("1/3"), Rational(1, 3));
  EXPECT_EQ(parse_rational("1e-2"), Rational(1, 100));
  EXPECT_EQ(parse_rational("-2.5e1"), -25);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
}

TEST(Params, Validation) {
  EXPECT_THROW((ModelParams{3, 0.0, 1}.validate()), std::invalid_argument);
  EXPECT_THROW((ModelParams{3, 1.0, 4}.validate()), std::invalid_argument);
  EXPECT_THROW((ModelParams{3, 1.0, 0}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((ModelParams{3, 1.0, 3}.validate()));
}
