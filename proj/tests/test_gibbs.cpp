#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "kforest/gibbs.hpp"
#include "kforest/statistics.hpp"

using namespace kforest;

namespace {

std::vector<Label> iota_labels(std::size_t l) {
  std::vector<Label> v(l);
  std::iota(v.begin(), v.end(), Label{1});
  return v;
}

std::vector<std::size_t> sizes_of(const PartitionOfL& p) {
  std::vector<std::size_t> s;
  for (const auto& b : p.blocks) s.push_back(b.size());
  return s;
}

}  // namespace

TEST(Weights, BlockWeights) {
  EXPECT_EQ(block_weight(1), 1);
  EXPECT_EQ(block_weight(2), Rational(1, 2));
  EXPECT_EQ(block_weight(3), Rational(3, 4));
  EXPECT_EQ(block_weight(4), Rational(15, 8));
  EXPECT_THROW(block_weight(0), std::invalid_argument);
}

TEST(Eppf, SumsToOneOverSetPartitions) {
  for (double c : {0.5, 1.0, 2.0})
    for (std::size_t l = 1; l <= 7; ++l) {
      const LimitTables t(c, l);
      double s = 0.0;
      for (const auto& p : enumerate_set_partitions(iota_labels(l))) s += eppf(sizes_of(p), t);
      EXPECT_NEAR(s, 1.0, 1e-12) << c << ' ' << l;
    }
}

TEST(Eppf, CoefficientRecursion) {
  for (double c : {0.5, 1.0, 2.0}) {
    const LimitTables t(c, 11);
    for (std::size_t l = 1; l <= 10; ++l)
      for (std::size_t r = 1; r <= l; ++r)
        EXPECT_NEAR(t.gibbs_coefficient(l, r),
                    (double(l) - 0.5 * double(r)) * t.gibbs_coefficient(l + 1, r) +
                        t.gibbs_coefficient(l + 1, r + 1),
                    1e-10 * std::max(1.0, t.gibbs_coefficient(l, r)));
  }
}

TEST(Insertion, ProbabilitiesSumToOne) {
  for (double c : {0.5, 1.0, 2.0}) {
    const LimitTables t(c, 11);
    for (std::size_t l = 1; l <= 10; ++l)
      for (const auto& p : enumerate_set_partitions(iota_labels(l))) {
        if (l > 8 && p.size() > 3) continue;  // keep the sweep short
        GibbsState state{c, {}};
        for (const auto& b : p.blocks) {
          BinaryShape s = BinaryShape::leaf(b.front());
          for (std::size_t i = 1; i < b.size(); ++i) s = s.graft(0, b[i]);
          state.blocks.push_back(s);
        }
        const auto q = insertion_probabilities(state, t);
        ASSERT_EQ(q.size(), p.size() + 1);
        double sum = 0.0;
        for (double x : q) {
          EXPECT_GE(x, 0.0);
          sum += x;
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
      }
  }
}

TEST(Sequential, ExactLawIsEppfTimesUniformShape) {
  for (double c : {0.5, 1.0, 2.0})
    for (std::size_t l = 1; l <= 5; ++l) {
      const LimitTables t(c, l);
      const auto law = sequential_law(l, c);
      double total = 0.0;
      for (std::size_t r = 1; r <= l; ++r)
        for (const auto& b : enumerate_bouquets(iota_labels(l), r)) {
          double shapes = 1.0;
          for (const auto& s : b.shapes()) shapes *= double(count_binary_shapes(s.leaf_count()));
          const double expected = eppf(sizes_of(b.partition()), t) / shapes;
          ASSERT_TRUE(law.contains(canonical_string(b)));
          EXPECT_NEAR(law.at(canonical_string(b)), expected, 1e-10);
          EXPECT_NEAR(expected, t.bouquet_probability(l, r), 1e-12);
          total += law.at(canonical_string(b));
        }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Sequential, SamplerMatchesExactLaw) {
  const std::size_t l = 4;
  const double c = 1.0;
  const LimitTables t(c, l + 1);
  CountMap counts;
  for (std::uint64_t i = 0; i < 40000; ++i) {
    Engine rng = RngStream{21, i}.engine();
    ++counts[canonical_string(sequential_sample(l, t, rng))];
  }
  ProbabilityMap theory;
  for (const auto& [k, p] : sequential_law(l, c)) theory[k] = p;
  EXPECT_GT(chi_square_test(counts, theory).p_value, 1e-4);
}

TEST(Mixture, ReferenceValues) {
  EXPECT_NEAR(mixture_closed_form(3, 1, 0.0), 0.125, 1e-15);
  EXPECT_NEAR(mixture_closed_form(3, 2, 1.0), 0.13333333333333333, 1e-15);
  EXPECT_NEAR(mixture_closed_form(4, 2, 2.0), 0.015625, 1e-15);
  EXPECT_NEAR(mixture_closed_form(5, 3, 1.0), 0.0063492063492063492, 1e-15);
}

TEST(Mixture, ClosedFormMatchesQuadrature) {
  for (double beta : {0.0, 1.0, 2.0})
    for (std::size_t l = 1; l <= 5; ++l)
      for (std::size_t r = 1; r <= l; ++r) {
        const auto m = pd_mixture_check(l, r, beta);
        EXPECT_NEAR(m.closed_form, m.integrated, 1e-6) << l << ' ' << r << ' ' << beta;
      }
  EXPECT_THROW(mixture_closed_form(2, 1, -1.0), std::invalid_argument);
}
