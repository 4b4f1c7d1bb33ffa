#include "kforest/exact_model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>

namespace kforest {

void ModelParams::validate() const {
  if (n < 1) throw std::invalid_argument("N must be at least 1");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be > 0");
  if (l < 1 || l > n) throw std::invalid_argument("marked set size must satisfy 1 <= l <= N");
}

double log_green_submatrix_det(std::uint32_t n, double kappa, std::uint32_t d) {
  if (d == 0 || d > n) throw std::invalid_argument("green_submatrix_det: need 0 < d <= N");
  if (!(kappa > 0.0)) throw std::invalid_argument("green_submatrix_det: kappa must be > 0");
  // d = N reduces to 1/(κ(N+κ)^{N-1}) since (N+κ)/(N+κ)^N = (N+κ)^{-(N-1)}.
  return std::log(d + kappa) - std::log(kappa) - d * std::log(n + kappa);
}

double green_submatrix_det(std::uint32_t n, double kappa, std::uint32_t d) {
  return std::exp(log_green_submatrix_det(n, kappa, d));
}

double log_embedded_tree_probability(std::uint64_t d, std::uint64_t r, std::uint32_t n,
                                     double kappa) {
  if (d < 1 || d > n) throw std::invalid_argument("embedded_tree_probability: need 1 <= d <= N");
  if (r < 1 || r > d) throw std::invalid_argument("embedded_tree_probability: need 1 <= r <= d");
  if (!(kappa > 0.0)) throw std::invalid_argument("embedded_tree_probability: kappa must be > 0");
  return (static_cast<double>(r) - 1.0) * std::log(kappa) + std::log(double(d) + kappa) -
         double(d) * std::log(n + kappa);
}

double embedded_tree_probability(std::uint64_t d, std::uint64_t r, std::uint32_t n,
                                 double kappa) {
  return std::exp(log_embedded_tree_probability(d, r, n, kappa));
}

namespace {

// Above this many inner vertices the labelling count switches to lgamma.
constexpr std::uint64_t kDirectLabellingLimit = 1u << 20;

}  // namespace

double log_class_probability(std::size_t l, std::size_t r, std::uint64_t inner_count,
                             std::uint32_t n, double kappa) {
  if (l < 1 || l > n) throw std::invalid_argument("class_probability: need 1 <= l <= N");
  const std::uint64_t pool = n - l;
  if (inner_count > pool) return -std::numeric_limits<double>::infinity();
  const std::uint64_t d = l + inner_count;
  if (r < 1 || r > d) throw std::invalid_argument("class_probability: need 1 <= r <= d");
  if (inner_count > kDirectLabellingLimit) {
    const double labellings = std::lgamma(double(pool) + 1.0) -
                              std::lgamma(double(pool - inner_count) + 1.0);
    return log_embedded_tree_probability(d, r, n, kappa) + labellings;
  }
  // Pair each labelling factor N-l-i with one factor of (N+κ):
  // (N-l-i)/(N+κ) = 1 - (l+i+κ)/(N+κ), summed with log1p to keep full
  // relative precision for large N.
  const double scale = double(n) + kappa;
  double log_ratio = 0.0;
  for (std::uint64_t i = 0; i < inner_count; ++i)
    log_ratio += std::log1p(-(double(l + i) + kappa) / scale);
  return (double(r) - 1.0) * std::log(kappa) + std::log(double(d) + kappa) -
         double(l) * std::log(scale) + log_ratio;
}

double class_probability(std::size_t l, std::size_t r, std::uint64_t inner_count,
                         std::uint32_t n, double kappa) {
  return std::exp(log_class_probability(l, r, inner_count, n, kappa));
}

double class_probability(const ReducedObservation& obs, const ModelParams& params) {
  if (obs.l != params.l) throw std::invalid_argument("class_probability: l mismatch");
  if (obs.d > params.n) return 0.0;
  return class_probability(obs.l, obs.r, obs.inner_count, params.n, params.kappa);
}

double bouquet_config_probability(std::size_t l, std::size_t r, std::uint32_t n, double kappa) {
  if (l < 1 || l > n) throw std::invalid_argument("bouquet_config_probability: need 1 <= l <= N");
  if (r < 1 || r > l) throw std::invalid_argument("bouquet_config_probability: need 1 <= r <= l");
  const std::uint64_t k = 2 * l - r;
  const std::uint64_t pool = n - l;
  const std::uint64_t nodes = l - r;
  double total = 0.0;
  // s = Σu; there are binom(s+k-1, k-1) extension vectors with that sum.
  for (std::uint64_t s = 0; nodes + s <= pool; ++s) {
    const double log_vectors = std::lgamma(double(s + k)) - std::lgamma(double(k)) -
                               std::lgamma(double(s) + 1.0);
    const double term =
        std::exp(log_vectors + log_class_probability(l, r, nodes + s, n, kappa));
    total += term;
    if (s > 16 && term < 1e-18 * total) break;
  }
  return total;
}

namespace {

Rational rpow(const Rational& x, std::uint64_t k) {
  Rational out = 1;
  for (std::uint64_t i = 0; i < k; ++i) out *= x;
  return out;
}

}  // namespace

Rational class_probability_exact(std::size_t l, std::size_t r, std::uint64_t inner_count,
                                 std::uint32_t n, const Rational& kappa) {
  if (l < 1 || l > n) throw std::invalid_argument("class_probability_exact: need 1 <= l <= N");
  const std::uint64_t pool = n - l;
  if (inner_count > pool) return 0;
  const std::uint64_t d = l + inner_count;
  if (r < 1 || r > d) throw std::invalid_argument("class_probability_exact: need 1 <= r <= d");
  Rational p = rpow(kappa, r - 1) * (Rational(d) + kappa) / rpow(Rational(n) + kappa, d);
  for (std::uint64_t i = 0; i < inner_count; ++i) p *= Rational(pool - i);
  return p;
}

Rational parse_rational(const std::string& text) {
  auto bad = [&] { return std::invalid_argument("not an exact rational: '" + text + "'"); };
  if (auto slash = text.find('/'); slash != std::string::npos) {
    const Rational num = parse_rational(text.substr(0, slash));
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw bad();
    return num / den;
  }
  std::string mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string::npos) {
    mantissa = text.substr(0, e);
    try {
      exponent = std::stol(text.substr(e + 1));
    } catch (...) {
      throw bad();
    }
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.erase(0, 1);
  }
  BigInt digits = 0;
  bool seen_digit = false, seen_point = false;
  for (char ch : mantissa) {
    if (ch == '.' && !seen_point) {
      seen_point = true;
    } else if (ch >= '0' && ch <= '9') {
      digits = digits * 10 + (ch - '0');
      seen_digit = true;
      if (seen_point) --exponent;
    } else {
      throw bad();
    }
  }
  if (!seen_digit) throw bad();
  Rational value(digits);
  const Rational ten(10);
  for (long i = 0; i < std::labs(exponent); ++i) {
    if (exponent > 0)
      value *= ten;
    else
      value /= ten;
  }
  return negative ? -value : value;
}

double ExactDistribution::total_probability() const {
  double s = 0.0;
  for (const auto& [key, c] : classes) s += c.probability;
  return s;
}

Rational ExactDistribution::exact_probability(const OracleClass& c, const Rational& kappa) const {
  Rational weight = 0;
  for (std::size_t k = 0; k < c.trees_by_root_degree.size(); ++k)
    if (c.trees_by_root_degree[k]) weight += Rational(c.trees_by_root_degree[k]) * rpow(kappa, k);
  const Rational z = kappa * rpow(Rational(params.n) + kappa, params.n - 1);
  return weight / z;
}

void ExactDistribution::write_csv(std::ostream& os) const {
  os << "canonical_key,r,d,probability\n";
  const auto old = os.precision(17);
  for (const auto& [key, c] : classes)
    os << '"' << key << '"' << ',' << c.r << ',' << c.d << ',' << c.probability << '\n';
  os.precision(old);
}

std::vector<Vertex> prufer_to_parents(const std::vector<Vertex>& sequence, std::uint32_t n) {
  // Vertices 0..n; the sequence has length n-1.
  const std::size_t total = n + 1;
  if (sequence.size() + 2 != total) throw std::invalid_argument("prufer: wrong sequence length");
  std::vector<std::uint32_t> degree(total, 1);
  for (Vertex v : sequence) {
    if (v > n) throw std::invalid_argument("prufer: label out of range");
    ++degree[v];
  }
  std::vector<std::vector<Vertex>> adj(total);
  std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> leaves;
  for (Vertex v = 0; v < total; ++v)
    if (degree[v] == 1) leaves.push(v);
  for (Vertex v : sequence) {
    const Vertex leaf = leaves.top();
    leaves.pop();
    adj[leaf].push_back(v);
    adj[v].push_back(leaf);
    if (--degree[v] == 1) leaves.push(v);
  }
  const Vertex a = leaves.top();
  leaves.pop();
  const Vertex b = leaves.top();
  adj[a].push_back(b);
  adj[b].push_back(a);

  std::vector<Vertex> parent(total, kRoot);
  std::vector<bool> seen(total, false);
  std::vector<Vertex> stack{kRoot};
  seen[kRoot] = true;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : adj[v]) {
      if (seen[w]) continue;
      seen[w] = true;
      parent[w] = v;
      stack.push_back(w);
    }
  }
  return parent;
}

RootedSpanningSubtree spanned_subtree(const std::vector<Vertex>& parent, std::uint32_t l) {
  RootedSpanningSubtree tree;
  std::vector<bool> in(parent.size(), false);
  in[kRoot] = true;
  for (Vertex start = 1; start <= l; ++start) {
    tree.marked.push_back(start);
    for (Vertex v = start; !in[v]; v = parent[v]) {
      in[v] = true;
      tree.edges.emplace_back(v, parent[v]);
    }
  }
  return tree;
}

namespace {

using ClassMap = std::map<std::string, OracleClass>;

void enumerate_range(const ModelParams& p, std::uint64_t begin, std::uint64_t end, ClassMap& out) {
  const std::uint32_t n = p.n;
  const std::size_t len = n >= 1 ? n - 1 : 0;
  std::vector<Vertex> seq(len, 0);
  // Sequence index -> digits in base n+1, least significant first.
  std::uint64_t x = begin;
  for (std::size_t i = 0; i < len; ++i) {
    seq[i] = static_cast<Vertex>(x % (n + 1));
    x /= (n + 1);
  }
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    const auto parent = prufer_to_parents(seq, n);
    std::size_t root_degree = 0;
    for (Vertex v = 1; v <= n; ++v) root_degree += parent[v] == kRoot;

    const ReducedObservation obs = reduce_observation(spanned_subtree(parent, p.l));
    auto key = obs.class_key();
    auto it = out.find(key);
    if (it == out.end()) {
      OracleClass c;
      c.key = key;
      c.shape_key = obs.shape_key;
      c.classification = obs.classification;
      c.r = obs.r;
      c.d = obs.d;
      c.inner_count = obs.inner_count;
      c.trees_by_root_degree.assign(n + 1, 0);
      it = out.emplace(std::move(key), std::move(c)).first;
    }
    ++it->second.trees_by_root_degree[root_degree];

    for (std::size_t i = 0; i < len; ++i) {
      if (++seq[i] <= n) break;
      seq[i] = 0;
    }
  }
}

void merge_into(ClassMap& into, ClassMap&& from) {
  for (auto& [key, c] : from) {
    auto [it, inserted] = into.try_emplace(key, c);
    if (inserted) continue;
    for (std::size_t k = 0; k < c.trees_by_root_degree.size(); ++k)
      it->second.trees_by_root_degree[k] += c.trees_by_root_degree[k];
  }
}

}  // namespace

ExactDistribution brute_force_reduced_distribution(const ModelParams& params, unsigned workers) {
  params.validate();
  if (params.n > kMaxOracleN)
    throw std::invalid_argument("exact enumeration is limited to N <= " +
                                std::to_string(kMaxOracleN));
  ExactDistribution dist;
  dist.params = params;
  dist.tree_count = 1;
  for (std::uint32_t i = 0; i + 1 < params.n; ++i) dist.tree_count *= params.n + 1;

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(dist.tree_count)));
  std::vector<ClassMap> parts(workers);
  std::vector<std::thread> threads;
  const std::uint64_t chunk = (dist.tree_count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t b = std::min(dist.tree_count, w * chunk);
    const std::uint64_t e = std::min(dist.tree_count, b + chunk);
    if (workers == 1) enumerate_range(params, b, e, parts[w]);
    else threads.emplace_back([&, w, b, e] { enumerate_range(params, b, e, parts[w]); });
  }
  for (auto& t : threads) t.join();
  for (auto& part : parts) merge_into(dist.classes, std::move(part));

  // Normaliser Z = κ(N+κ)^{N-1}; weights κ^k / Z = κ^{k-1}/(N+κ)^{N-1}.
  const double log_z_tail = (params.n - 1.0) * std::log(params.n + params.kappa);
  for (auto& [key, c] : dist.classes) {
    double s = 0.0;
    for (std::size_t k = 1; k < c.trees_by_root_degree.size(); ++k)
      if (c.trees_by_root_degree[k])
        s += double(c.trees_by_root_degree[k]) *
             std::exp((k - 1.0) * std::log(params.kappa) - log_z_tail);
    c.probability = s;
  }
  return dist;
}

}  // namespace kforest
