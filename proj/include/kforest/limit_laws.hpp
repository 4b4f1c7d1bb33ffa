// Limiting quantities of the reduced subtree as N → ∞.
//
// Everything in the critical regime κ = c√N is expressed through the tilted
// Gaussian moments
//
//     A_n(c) = ∫_0^∞ σ^n exp(-σ²/2 - cσ) dσ,
//
// which satisfy A_{n+1} = n A_{n-1} - c A_n. The limiting probability of a
// single bouquet configuration with r trees on l leaves is
//
//     I_{l,r}(c) = c^{r-1} A_{2l-r-2}(c) / (2l-r-2)!        (l >= 2),
//
// with I_{1,1} = 1, and the bouquet counts C_{l,r} make Σ_r C_{l,r} I_{l,r} = 1.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kforest/combinatorics.hpp"

namespace kforest {

// e^{x²} erfc(x) for x >= 0 without overflow.
double scaled_erfc(double x);

// Upper integration limit beyond which σ^n e^{-σ²/2} is negligible.
double moment_cutoff(unsigned n);

double tilted_gaussian_moment_quadrature(unsigned n, double c);
double tilted_gaussian_moment(unsigned n, double c);

// A_0..A_{n_max}(c). Built by upward recursion from the closed forms of A_0
// and A_1; the top entry is checked against quadrature and the whole table is
// recomputed by quadrature when the recursion has lost accuracy (large c).
class MomentTable {
 public:
  MomentTable(double c, unsigned n_max);

  double c() const { return c_; }
  unsigned max_order() const { return static_cast<unsigned>(values_.size() - 1); }
  double operator[](unsigned n) const { return values_.at(n); }
  bool recursion_accepted() const { return recursion_accepted_; }

 private:
  double c_;
  std::vector<double> values_;
  bool recursion_accepted_ = false;
};

// Cached limit quantities for one c and all l <= l_max.
class LimitTables {
 public:
  LimitTables(double c, std::size_t l_max);

  double c() const { return c_; }
  std::size_t l_max() const { return l_max_; }
  const MomentTable& moments() const { return moments_; }

  // I_{l,r}(c) via c^{r-1} A_m / m!, m = 2l-r-2.
  double bouquet_probability(std::size_t l, std::size_t r) const;
  // I_{l,r}(c) via c^{r-1}(A_{m+2} + c A_{m+1}) / (m+1)!, the integral of
  // the critical density over the extension vectors.
  double bouquet_probability_from_density(std::size_t l, std::size_t r) const;
  double bouquet_count(std::size_t l, std::size_t r) const;
  double normalization_sum(std::size_t l) const;
  std::vector<double> block_count_limit(std::size_t l) const;
  // V_{l,r}(c) = 2^{l-r} I_{l,r}(c)
  double gibbs_coefficient(std::size_t l, std::size_t r) const;

 private:
  void check(std::size_t l, std::size_t r) const;

  double c_;
  std::size_t l_max_;
  MomentTable moments_;
  std::vector<std::vector<double>> counts_;  // counts_[l][r]
};

double bouquet_limit_probability(std::size_t l, std::size_t r, double c);
double bouquet_limit_probability_from_density(std::size_t l, std::size_t r, double c);
double normalization_sum(std::size_t l, double c);
std::vector<double> block_count_limit(std::size_t l, double c);

// Limit density of the rescaled extension vector of one binary shape when κ
// is fixed: σ e^{-σ²/2}, σ = Σ t_i.
double fixed_kappa_density(std::span<const double> t);

// Critical regime: c^{r-1} (σ + c) e^{-σ²/2 - cσ}.
double critical_density(std::span<const double> t, std::size_t r, double c);

// lim P(U_N/√N >= t) = e^{-t²/2 - ct} for one marked vertex, κ = c√N.
double distance_tail(double t, double c);

// CDF of the density x e^{-x²/2}: the fixed-κ distance law.
double fixed_kappa_distance_cdf(double t);

// N^{k/2} times the exact class probability at u = ⌊t√N⌋, k = 2l - r.
double finite_n_scaled_pmf(const BouquetConfig& config, std::span<const double> t,
                           std::uint32_t n, double kappa);

}  // namespace kforest
