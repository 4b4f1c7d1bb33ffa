#include "kforest/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kforest/exact_model.hpp"
#include "kforest/quadrature.hpp"
#include "kforest/spanning_tree.hpp"

namespace kforest {

namespace {

double factorial(unsigned n) { return std::tgamma(n + 1.0); }

void require_positive_c(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("c must be a positive real");
}

double sum_of(std::span<const double> t) {
  double s = 0.0;
  for (double x : t) {
    if (x < 0.0) throw std::invalid_argument("density arguments must be nonnegative");
    s += x;
  }
  return s;
}

}  // namespace

double scaled_erfc(double x) {
  if (x < 0.0) throw std::invalid_argument("scaled_erfc: x must be >= 0");
  if (x < 25.0) return std::exp(x * x) * std::erfc(x);
  // Continued fraction x + (1/2)/(x + 1/(x + (3/2)/(x + ...))), modified Lentz.
  constexpr double tiny = 1e-300;
  double f = x, c = x, d = 0.0;
  for (int k = 1; k < 500; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (d == 0.0) d = tiny;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / (std::sqrt(std::numbers::pi) * f);
}

double moment_cutoff(unsigned n) {
  const double base = std::max(10.0, std::sqrt(2.0 * n)) + 6.0;
  return std::max(base, std::sqrt(double(n)) + 10.0);
}

double tilted_gaussian_moment_quadrature(unsigned n, double c) {
  require_positive_c(c);
  auto log_f = [n, c](double s) { return n * std::log(s) - 0.5 * s * s - c * s; };
  auto f = [n, c](double s) { return std::pow(s, n) * std::exp(-0.5 * s * s - c * s); };
  // Split at the mode so the adaptive rule sees one smooth bump per piece,
  // and stop once the integrand is e^-45 below its peak so no panel is pure
  // underflow.
  const double mode = 0.5 * (-c + std::sqrt(c * c + 4.0 * n));
  const double peak = n == 0 ? 0.0 : log_f(mode);
  const double step = 1.0 / (1.0 + c);
  double upper = std::max(mode, step);
  while (upper < moment_cutoff(n) && log_f(upper) > peak - 45.0) upper += step;
  if (mode <= 0.0) return integrate(f, 0.0, upper).value;
  return integrate(f, 0.0, mode).value + integrate(f, mode, upper).value;
}

double tilted_gaussian_moment(unsigned n, double c) { return MomentTable(c, n)[n]; }

MomentTable::MomentTable(double c, unsigned n_max) : c_(c) {
  require_positive_c(c);
  values_.resize(std::max(n_max, 1u) + 1);
  values_[0] = std::sqrt(std::numbers::pi / 2.0) * scaled_erfc(c / std::numbers::sqrt2);
  values_[1] = 1.0 - c * values_[0];
  for (unsigned n = 1; n + 1 < values_.size(); ++n)
    values_[n + 1] = n * values_[n - 1] - c * values_[n];

  const unsigned top = static_cast<unsigned>(values_.size() - 1);
  const double reference = tilted_gaussian_moment_quadrature(top, c);
  recursion_accepted_ = values_[top] > 0.0 &&
                        std::abs(values_[top] - reference) <= 1e-11 * std::abs(reference);
  if (!recursion_accepted_) {
    for (unsigned n = 0; n < values_.size(); ++n)
      values_[n] = n == top ? reference : tilted_gaussian_moment_quadrature(n, c);
  }
  values_.resize(n_max + 1);
}

LimitTables::LimitTables(double c, std::size_t l_max)
    : c_(c), l_max_(std::max<std::size_t>(l_max, 1)),
      moments_(c, static_cast<unsigned>(2 * std::max<std::size_t>(l_max, 1))) {
  counts_.assign(l_max_ + 1, std::vector<double>(l_max_ + 2, 0.0));
  for (std::size_t l = 1; l <= l_max_; ++l)
    for (std::size_t r = 1; r <= l; ++r)
      counts_[l][r] = static_cast<double>(count_bouquets(l, r));
}

void LimitTables::check(std::size_t l, std::size_t r) const {
  if (l < 1 || l > l_max_) throw std::out_of_range("l outside the table range");
  if (r < 1 || r > l) throw std::invalid_argument("need 1 <= r <= l");
}

double LimitTables::bouquet_probability(std::size_t l, std::size_t r) const {
  check(l, r);
  if (l == 1) return 1.0;
  const unsigned m = static_cast<unsigned>(2 * l - r - 2);
  return std::pow(c_, double(r) - 1.0) / factorial(m) * moments_[m];
}

double LimitTables::bouquet_probability_from_density(std::size_t l, std::size_t r) const {
  check(l, r);
  const unsigned k = static_cast<unsigned>(2 * l - r);  // tuple length
  return std::pow(c_, double(r) - 1.0) / factorial(k - 1) *
         (moments_[k] + c_ * moments_[k - 1]);
}

double LimitTables::bouquet_count(std::size_t l, std::size_t r) const {
  check(l, r);
  return counts_[l][r];
}

double LimitTables::normalization_sum(std::size_t l) const {
  double s = 0.0;
  for (std::size_t r = 1; r <= l; ++r) s += bouquet_count(l, r) * bouquet_probability(l, r);
  return s;
}

std::vector<double> LimitTables::block_count_limit(std::size_t l) const {
  std::vector<double> p;
  for (std::size_t r = 1; r <= l; ++r) p.push_back(bouquet_count(l, r) * bouquet_probability(l, r));
  return p;
}

double LimitTables::gibbs_coefficient(std::size_t l, std::size_t r) const {
  return std::ldexp(bouquet_probability(l, r), static_cast<int>(l - r));
}

double bouquet_limit_probability(std::size_t l, std::size_t r, double c) {
  return LimitTables(c, l).bouquet_probability(l, r);
}

double bouquet_limit_probability_from_density(std::size_t l, std::size_t r, double c) {
  return LimitTables(c, l).bouquet_probability_from_density(l, r);
}

double normalization_sum(std::size_t l, double c) { return LimitTables(c, l).normalization_sum(l); }

std::vector<double> block_count_limit(std::size_t l, double c) {
  return LimitTables(c, l).block_count_limit(l);
}

double fixed_kappa_density(std::span<const double> t) {
  const double s = sum_of(t);
  return s * std::exp(-0.5 * s * s);
}

double critical_density(std::span<const double> t, std::size_t r, double c) {
  if (r < 1) throw std::invalid_argument("critical_density: r must be >= 1");
  if (!(c >= 0.0)) throw std::invalid_argument("critical_density: c must be >= 0");
  const double s = sum_of(t);
  const double lead = r == 1 ? 1.0 : std::pow(c, double(r) - 1.0);
  return lead * (s + c) * std::exp(-0.5 * s * s - c * s);
}

double distance_tail(double t, double c) {
  if (t < 0.0) throw std::invalid_argument("distance_tail: t must be >= 0");
  return std::exp(-0.5 * t * t - c * t);
}

double fixed_kappa_distance_cdf(double t) { return t <= 0.0 ? 0.0 : -std::expm1(-0.5 * t * t); }

double finite_n_scaled_pmf(const BouquetConfig& config, std::span<const double> t,
                           std::uint32_t n, double kappa) {
  const std::size_t l = config.leaf_count();
  const std::size_t r = config.block_count();
  if (t.size() != 2 * l - r) throw std::invalid_argument("finite_n_scaled_pmf: need 2l-r lengths");
  const double root_n = std::sqrt(double(n));
  std::vector<std::uint64_t> u;
  for (double x : t) {
    if (x < 0.0) throw std::invalid_argument("finite_n_scaled_pmf: lengths must be >= 0");
    u.push_back(static_cast<std::uint64_t>(std::floor(x * root_n)));
  }
  const auto obs = ReducedObservation::from_bouquet(config, u);
  const double log_p = log_class_probability(l, r, obs.inner_count, n, kappa);
  return std::exp(0.5 * double(t.size()) * std::log(double(n)) + log_p);
}

}  // namespace kforest
