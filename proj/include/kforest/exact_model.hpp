// Exact finite-N law of the reduced subtree on K_N ∪ {Δ} with killing κ.
//
// The Green matrix of the killed walk on K_N is (κI + J) / (κ(N+κ)); every
// principal d×d minor has a closed form, and the probability that a given
// embedded Δ-rooted tree Y (d vertices, r edges into Δ) is the subtree
// spanned by L is κ^{r-1}(d+κ)/(N+κ)^d. Summing over the labellings of the
// inner vertices gives the class probability. An exhaustive Prüfer-sequence
// enumeration provides an independent check for small N.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kforest/spanning_tree.hpp"

namespace kforest {

using Rational = boost::multiprecision::cpp_rational;

struct ModelParams {
  std::uint32_t n = 1;  // non-root vertices
  double kappa = 1.0;
  std::uint32_t l = 1;  // L = {1..l}

  void validate() const;  // throws std::invalid_argument
};

// det of the leading d×d block of the Green matrix; d = N gives the full
// determinant 1/(κ(N+κ)^{N-1}).
double green_submatrix_det(std::uint32_t n, double kappa, std::uint32_t d);
double log_green_submatrix_det(std::uint32_t n, double kappa, std::uint32_t d);

double embedded_tree_probability(std::uint64_t d, std::uint64_t r, std::uint32_t n, double kappa);
double log_embedded_tree_probability(std::uint64_t d, std::uint64_t r, std::uint32_t n,
                                     double kappa);

// Probability of one equivalence class: the embedded-tree probability times
// the (N-l)(N-l-1)... labellings of its inner vertices. Zero when the class
// needs more inner vertices than there are unmarked ones.
double class_probability(std::size_t l, std::size_t r, std::uint64_t inner_count,
                         std::uint32_t n, double kappa);
double class_probability(const ReducedObservation& obs, const ModelParams& params);
double log_class_probability(std::size_t l, std::size_t r, std::uint64_t inner_count,
                             std::uint32_t n, double kappa);

// Exact P(Q_L = a given binary bouquet with r trees), summed over all
// extension vectors of length 2l - r.
double bouquet_config_probability(std::size_t l, std::size_t r, std::uint32_t n, double kappa);

Rational class_probability_exact(std::size_t l, std::size_t r, std::uint64_t inner_count,
                                 std::uint32_t n, const Rational& kappa);

// Parses "2", "0.5", "1/3" or "1e-2" exactly; throws on anything else.
Rational parse_rational(const std::string& text);

struct OracleClass {
  std::string key;  // ReducedObservation::class_key()
  std::string shape_key;
  Classification classification = Classification::kDegenerate;
  std::size_t r = 0;
  std::uint64_t d = 0;
  std::uint64_t inner_count = 0;
  // trees_by_root_degree[k] = spanning trees in this class with deg(Δ) = k
  std::vector<std::uint64_t> trees_by_root_degree;
  double probability = 0.0;  // at params.kappa
};

struct ExactDistribution {
  ModelParams params;
  std::uint64_t tree_count = 0;  // (N+1)^{N-1}
  std::map<std::string, OracleClass> classes;

  double total_probability() const;
  // Σ_k count_k κ^k / (κ(N+κ)^{N-1}) evaluated in exact arithmetic.
  Rational exact_probability(const OracleClass& c, const Rational& kappa) const;
  void write_csv(std::ostream& os) const;
};

inline constexpr std::uint32_t kMaxOracleN = 8;

// Enumerates every spanning tree of K_N ∪ {Δ} by Prüfer sequence, weights it
// by κ^{deg Δ}, extracts the subtree spanned by L = {1..l} and aggregates by
// class key. `workers` splits the sequence range; the result does not depend
// on it.
ExactDistribution brute_force_reduced_distribution(const ModelParams& params,
                                                   unsigned workers = 1);

// Parent array (index 0 = Δ) of the tree with the given Prüfer sequence over
// vertices 0..N, oriented towards Δ.
std::vector<Vertex> prufer_to_parents(const std::vector<Vertex>& sequence, std::uint32_t n);

// The subtree of a full parent array spanned by {1..l} and Δ.
RootedSpanningSubtree spanned_subtree(const std::vector<Vertex>& parent, std::uint32_t l);

}  // namespace kforest
