#include "kforest/gibbs.hpp"

#include <cmath>
#include <stdexcept>

#include "kforest/quadrature.hpp"

namespace kforest {

Rational block_weight(std::size_t m) {
  if (m == 0) throw std::invalid_argument("block_weight: block size must be positive");
  Rational w = 1;
  for (std::size_t i = 1; i < m; ++i) w *= Rational(2 * i - 1, 2);
  return w;
}

double block_weight_value(std::size_t m) { return static_cast<double>(block_weight(m)); }

double gibbs_coefficient(std::size_t l, std::size_t r, double c) {
  return LimitTables(c, l).gibbs_coefficient(l, r);
}

double eppf(std::span<const std::size_t> sizes, const LimitTables& tables) {
  if (sizes.empty()) throw std::invalid_argument("eppf: need at least one block");
  std::size_t l = 0;
  double weights = 1.0;
  for (std::size_t m : sizes) {
    l += m;
    weights *= block_weight_value(m);
  }
  return tables.gibbs_coefficient(l, sizes.size()) * weights;
}

double eppf(std::span<const std::size_t> sizes, double c) {
  std::size_t l = 0;
  for (std::size_t m : sizes) l += m;
  return eppf(sizes, LimitTables(c, std::max<std::size_t>(l, 1)));
}

std::size_t GibbsState::labels_placed() const {
  std::size_t l = 0;
  for (const auto& b : blocks) l += b.leaf_count();
  return l;
}

std::vector<double> insertion_probabilities(const GibbsState& state, const LimitTables& tables) {
  const std::size_t l = state.labels_placed();
  const std::size_t r = state.block_count();
  if (l == 0 || r == 0) throw std::invalid_argument("insertion_probabilities: empty state");
  const double v = tables.gibbs_coefficient(l, r);
  const double join = tables.gibbs_coefficient(l + 1, r) / v;
  std::vector<double> p;
  p.reserve(r + 1);
  for (const auto& b : state.blocks) p.push_back((double(b.leaf_count()) - 0.5) * join);
  p.push_back(tables.gibbs_coefficient(l + 1, r + 1) / v);
  return p;
}

std::vector<double> insertion_probabilities(const GibbsState& state) {
  return insertion_probabilities(state, LimitTables(state.c, state.labels_placed() + 1));
}

BouquetConfig sequential_sample(std::size_t l, const LimitTables& tables, Engine& rng) {
  if (l < 1) throw std::invalid_argument("sequential_sample: l must be >= 1");
  GibbsState state{tables.c(), {BinaryShape::leaf(1)}};
  for (Label next = 2; next <= l; ++next) {
    const auto p = insertion_probabilities(state, tables);
    std::discrete_distribution<std::size_t> pick(p.begin(), p.end());
    const std::size_t choice = pick(rng);
    if (choice == state.blocks.size()) {
      state.blocks.push_back(BinaryShape::leaf(next));
    } else {
      auto& block = state.blocks[choice];
      std::uniform_int_distribution<std::size_t> site(0, block.site_count() - 1);
      block = block.graft(site(rng), next);
    }
  }
  return BouquetConfig(std::move(state.blocks));
}

BouquetConfig sequential_sample(std::size_t l, double c, Engine& rng) {
  return sequential_sample(l, LimitTables(c, l + 1), rng);
}

std::map<std::string, double> sequential_law(std::size_t l, double c) {
  if (l < 1) throw std::invalid_argument("sequential_law: l must be >= 1");
  const LimitTables tables(c, l + 1);
  std::map<std::string, double> law;
  auto rec = [&](auto&& self, GibbsState& state, double mass) -> void {
    const std::size_t placed = state.labels_placed();
    if (placed == l) {
      law[canonical_string(BouquetConfig(state.blocks))] += mass;
      return;
    }
    const Label next = static_cast<Label>(placed + 1);
    const auto p = insertion_probabilities(state, tables);
    for (std::size_t i = 0; i < state.blocks.size(); ++i) {
      const BinaryShape before = state.blocks[i];
      const double per_site = p[i] / double(before.site_count());
      for (std::size_t s = 0; s < before.site_count(); ++s) {
        state.blocks[i] = before.graft(s, next);
        self(self, state, mass * per_site);
      }
      state.blocks[i] = before;
    }
    state.blocks.push_back(BinaryShape::leaf(next));
    self(self, state, mass * p.back());
    state.blocks.pop_back();
  };
  GibbsState start{c, {BinaryShape::leaf(1)}};
  rec(rec, start, 1.0);
  return law;
}

double mixture_closed_form(std::size_t l, std::size_t r, double beta) {
  if (!(beta > -1.0)) throw std::invalid_argument("mixture: beta must be > -1");
  if (r < 1 || r > l) throw std::invalid_argument("mixture: need 1 <= r <= l");
  double num = 1.0;
  for (std::size_t i = 0; i + 1 < r; ++i) num *= (beta + 1.0) / 2.0 + 0.5 * double(i);
  double den = 1.0;
  for (std::size_t i = 0; i + 1 < l; ++i) den *= beta / 2.0 + 1.0 + double(i);
  return std::ldexp(num / den, -static_cast<int>(l - r));
}

double mixture_integrated(std::size_t l, std::size_t r, double beta) {
  if (!(beta > -1.0)) throw std::invalid_argument("mixture: beta must be > -1");
  if (r < 1 || r > l) throw std::invalid_argument("mixture: need 1 <= r <= l");
  const double z = std::pow(2.0, (beta - 1.0) / 2.0) * std::tgamma((beta + 1.0) / 2.0);
  auto f = [&](double c) {
    if (c <= 0.0) return 0.0;
    return bouquet_limit_probability(l, r, c) * std::pow(c, beta) * std::exp(-0.5 * c * c) / z;
  };
  // h_β is negligible beyond c = 40; the split keeps the c^β cusp at 0 in
  // its own panel.
  return integrate(f, 0.0, 1.0, 1e-12).value + integrate(f, 1.0, 40.0, 1e-12).value;
}

MixtureCheck pd_mixture_check(std::size_t l, std::size_t r, double beta) {
  return {mixture_closed_form(l, r, beta), mixture_integrated(l, r, beta)};
}

}  // namespace kforest
