// The critical-regime limit partition as a Gibbs partition of type 1/2.
//
// EPPF p(n_1..n_r) = V_{l,r}(c) ∏ w_{n_i}, with w_m = (2m-3)!!/2^{m-1} and
// V_{l,r}(c) = 2^{l-r} I_{l,r}(c). The sequential "tree restaurant" adds
// labels one at a time and grafts each new leaf into the binary tree of the
// block it joins.

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kforest/combinatorics.hpp"
#include "kforest/limit_laws.hpp"
#include "kforest/wilson_sampler.hpp"

namespace kforest {

using Rational = boost::multiprecision::cpp_rational;

Rational block_weight(std::size_t m);
double block_weight_value(std::size_t m);

double gibbs_coefficient(std::size_t l, std::size_t r, double c);

double eppf(std::span<const std::size_t> sizes, double c);
double eppf(std::span<const std::size_t> sizes, const LimitTables& tables);

struct GibbsState {
  double c = 1.0;
  std::vector<BinaryShape> blocks;  // in order of creation

  std::size_t labels_placed() const;
  std::size_t block_count() const { return blocks.size(); }
};

// Entries 0..r-1: join block i; entry r: open a new block. The tables must
// cover l + 1 labels.
std::vector<double> insertion_probabilities(const GibbsState& state, const LimitTables& tables);
std::vector<double> insertion_probabilities(const GibbsState& state);

BouquetConfig sequential_sample(std::size_t l, double c, Engine& rng);
BouquetConfig sequential_sample(std::size_t l, const LimitTables& tables, Engine& rng);

// Exact output law of the sequential construction, summed over every
// insertion history; keyed by canonical_string(BouquetConfig).
std::map<std::string, double> sequential_law(std::size_t l, double c);

struct MixtureCheck {
  double closed_form = 0.0;
  double integrated = 0.0;
};

// ∫ I_{l,r}(c) h_β(c) dc with h_β(c) ∝ c^β e^{-c²/2}, in closed form and by
// quadrature.
double mixture_closed_form(std::size_t l, std::size_t r, double beta);
double mixture_integrated(std::size_t l, std::size_t r, double beta);
MixtureCheck pd_mixture_check(std::size_t l, std::size_t r, double beta);

}  // namespace kforest
