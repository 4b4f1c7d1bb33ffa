#include "kforest/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "kforest/limit_laws.hpp"

namespace kforest {

void ExperimentConfig::validate() const {
  if (n < 1) throw std::invalid_argument("N must be positive");
  if (!(kappa_value > 0.0) || !std::isfinite(kappa_value))
    throw std::invalid_argument(kappa_mode == KappaMode::kFixed ? "kappa must be > 0"
                                                                : "c must be > 0");
  if (l < 1 || l > n) throw std::invalid_argument("l must satisfy 1 <= l <= N");
  if (replicates < 1) throw std::invalid_argument("replicates must be positive");
  if (workers < 1) throw std::invalid_argument("workers must be positive");
  if (step_budget < 1) throw std::invalid_argument("step budget must be positive");
}

double ExperimentConfig::kappa() const {
  return kappa_mode == KappaMode::kFixed ? kappa_value : kappa_value * std::sqrt(double(n));
}

double ExperimentConfig::critical_constant() const {
  return kappa_mode == KappaMode::kCritical ? kappa_value : kappa_value / std::sqrt(double(n));
}

ModelParams ExperimentConfig::model() const { return ModelParams{n, kappa(), l}; }

std::uint64_t marked_depth(const ReducedObservation& obs, Label label) {
  for (std::size_t i = 0; i < obs.vertices.size(); ++i) {
    if (obs.vertices[i].label != label) continue;
    std::uint64_t depth = 0;
    for (int v = int(i); v >= 0; v = obs.vertices[v].parent) depth += obs.vertices[v].extension + 1;
    return depth;
  }
  throw std::invalid_argument("marked_depth: label not in observation");
}

std::vector<ObservationRecord> run_observations(const ExperimentConfig& config) {
  config.validate();
  const ModelParams params = config.model();
  std::vector<ObservationRecord> records(config.replicates);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(config.workers, config.replicates));

  auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
    WilsonSampler sampler(params, config.step_budget);
    for (std::uint64_t i = begin; i < end; ++i) {
      auto& rec = records[i];
      rec.replicate = i;
      Engine rng = RngStream{config.seed, i}.engine();
      const std::uint64_t before = sampler.steps();
      try {
        rec.obs = reduce_observation(sampler.sample(rng));
      } catch (const StepBudgetExceeded&) {
        rec.budget_exceeded = true;
      }
      rec.steps = sampler.steps() - before;
    }
  };

  if (workers <= 1) {
    run_range(0, config.replicates);
    return records;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (config.replicates + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = std::min(config.replicates, begin + chunk);
    if (begin < end) pool.emplace_back(run_range, begin, end);
  }
  for (auto& t : pool) t.join();
  return records;
}

ProbabilityMap limit_shape_probabilities(const ExperimentConfig& config) {
  ProbabilityMap out;
  const std::size_t l = config.l;
  if (l > kMaxLimitShapeL) return out;
  std::vector<Label> labels(l);
  for (std::size_t i = 0; i < l; ++i) labels[i] = Label(i + 1);
  if (config.kappa_mode == KappaMode::kFixed) {
    const auto configs = enumerate_bouquets(labels, 1);
    for (const auto& b : configs) out[canonical_string(b)] = 1.0 / double(configs.size());
    return out;
  }
  const LimitTables tables(config.kappa_value, l);
  for (std::size_t r = 1; r <= l; ++r) {
    const double p = tables.bouquet_probability(l, r);
    for (const auto& b : enumerate_bouquets(labels, r)) out[canonical_string(b)] = p;
  }
  return out;
}

double ExperimentReport::shape_frequency(const std::string& shape_key) const {
  auto it = shapes.find(shape_key);
  return it == shapes.end() ? 0.0 : frequency(it->second.count);
}

double ExperimentReport::classification_frequency(Classification c) const {
  auto it = classification_counts.find(std::string(to_string(c)));
  return it == classification_counts.end() ? 0.0 : frequency(it->second);
}

ExperimentReport summarize(const ExperimentConfig& config,
                           const std::vector<ObservationRecord>& records) {
  ExperimentReport rep;
  rep.config = config;
  rep.kappa = config.kappa();
  rep.c = config.critical_constant();
  const ModelParams params = config.model();
  const double root_n = std::sqrt(double(config.n));

  rep.block_counts.assign(config.l + 1, 0);
  rep.rescaled_length.bins.assign(81, 0);
  for (auto c : {Classification::kBinaryBouquet, Classification::kDegenerate})
    rep.classification_counts[std::string(to_string(c))] = 0;

  std::vector<double> distances;
  distances.reserve(records.size());
  double marked_sum = 0.0;
  for (const auto& rec : records) {
    rep.total_steps += rec.steps;
    if (rec.budget_exceeded) {
      ++rep.budget_failures;
      rep.failed_replicates.push_back(rec.replicate);
      continue;
    }
    const auto& obs = rec.obs;
    ++rep.samples;
    auto& cls = rep.classes[obs.class_key()];
    if (cls.count == 0) {
      cls.shape_key = obs.shape_key;
      cls.classification = obs.classification;
      cls.r = obs.r;
      cls.d = obs.d;
      cls.exact_probability = class_probability(obs, params);
    }
    ++cls.count;
    auto& shape = rep.shapes[obs.shape_key];
    shape.classification = obs.classification;
    shape.r = obs.r;
    ++shape.count;
    ++rep.classification_counts[std::string(to_string(obs.classification))];
    ++rep.block_counts.at(obs.r);

    const double len = double(obs.extension_sum()) / root_n;
    const std::size_t bin = std::min<std::size_t>(std::size_t(len / rep.rescaled_length.bin_width),
                                                  rep.rescaled_length.bins.size() - 1);
    ++rep.rescaled_length.bins[bin];

    distances.push_back(double(marked_depth(obs, 1)) / root_n);
    double all = 0.0;
    for (Label x = 1; x <= config.l; ++x) all += double(marked_depth(obs, x));
    marked_sum += all / double(config.l) / root_n;
  }

  if (config.kappa_mode == KappaMode::kCritical) {
    const auto p = LimitTables(config.kappa_value, config.l).block_count_limit(config.l);
    rep.block_count_limit.assign(1, 0.0);
    rep.block_count_limit.insert(rep.block_count_limit.end(), p.begin(), p.end());
  } else {
    rep.block_count_limit.assign(config.l + 1, 0.0);
    rep.block_count_limit[1] = 1.0;
  }

  if (rep.samples > 0) {
    double sum = 0.0;
    for (double x : distances) sum += x;
    rep.mean_rescaled_distance = sum / double(distances.size());
    rep.mean_rescaled_marked_distance = marked_sum / double(rep.samples);
    if (config.kappa_mode == KappaMode::kFixed) {
      rep.ks_distance = ks_distance(distances, fixed_kappa_distance_cdf);
    } else {
      const double c = config.kappa_value;
      rep.ks_distance = ks_distance(distances, [c](double t) { return 1.0 - distance_tail(t, c); });
    }
    rep.ks_p_value = kforest::ks_p_value(rep.ks_distance, distances.size());

    const ProbabilityMap limits = limit_shape_probabilities(config);
    for (auto& [key, shape] : rep.shapes) {
      auto it = limits.find(key);
      shape.limit_probability = it == limits.end() ? 0.0 : it->second;
    }
    CountMap shape_counts;
    for (const auto& [key, shape] : rep.shapes) shape_counts[key] = shape.count;
    if (!limits.empty()) rep.limit_comparison = compare_distributions(shape_counts, limits);

    if (config.n <= kMaxOracleN) {
      const ExactDistribution exact =
          brute_force_reduced_distribution(params, std::max(1u, config.workers));
      ProbabilityMap theory;
      for (const auto& [key, c] : exact.classes) theory[key] = c.probability;
      CountMap counts;
      for (const auto& [key, c] : rep.classes) counts[key] = c.count;
      rep.exact_comparison = compare_distributions(counts, theory);
    }
  }
  return rep;
}

ExperimentReport run_monte_carlo(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const auto records = run_observations(config);
  ExperimentReport rep = summarize(config, records);
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

namespace {

nlohmann::json stats_json(const ComparisonStats& s) {
  return {{"samples", s.samples},
          {"chi_square", s.chi_square.statistic},
          {"dof", s.chi_square.dof},
          {"p_value", s.chi_square.p_value},
          {"cells", s.chi_square.cells},
          {"total_variation", s.total_variation}};
}

}  // namespace

nlohmann::json to_json(const ExperimentReport& rep) {
  using nlohmann::json;
  const auto& cfg = rep.config;
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = {{"n", cfg.n},
                 {"kappa_mode", cfg.kappa_mode == KappaMode::kFixed ? "fixed" : "critical"},
                 {"kappa_value", cfg.kappa_value},
                 {"l", cfg.l},
                 {"replicates", cfg.replicates},
                 {"seed", cfg.seed},
                 {"step_budget", cfg.step_budget}};
  j["kappa"] = rep.kappa;
  j["c"] = rep.c;
  j["samples"] = rep.samples;
  j["diagnostics"] = {{"budget_failures", rep.budget_failures},
                      {"failed_replicates", rep.failed_replicates}};

  json classes = json::array();
  for (const auto& [key, c] : rep.classes) {
    json row = {{"key", key},
                {"shape", c.shape_key},
                {"classification", to_string(c.classification)},
                {"r", c.r},
                {"d", c.d},
                {"count", c.count},
                {"frequency", rep.frequency(c.count)}};
    if (c.exact_probability) row["exact_probability"] = *c.exact_probability;
    classes.push_back(std::move(row));
  }
  j["classes"] = std::move(classes);

  json shapes = json::array();
  for (const auto& [key, s] : rep.shapes) {
    json row = {{"shape", key},
                {"classification", to_string(s.classification)},
                {"r", s.r},
                {"count", s.count},
                {"frequency", rep.frequency(s.count)}};
    if (s.limit_probability) row["limit_probability"] = *s.limit_probability;
    shapes.push_back(std::move(row));
  }
  j["shapes"] = std::move(shapes);

  json cls = json::object();
  for (const auto& [name, n] : rep.classification_counts)
    cls[name] = {{"count", n}, {"frequency", rep.frequency(n)}};
  j["classifications"] = std::move(cls);

  json blocks = json::array();
  for (std::size_t r = 1; r < rep.block_counts.size(); ++r)
    blocks.push_back({{"r", r},
                      {"count", rep.block_counts[r]},
                      {"frequency", rep.block_count_frequency(r)},
                      {"limit_probability", rep.block_count_limit.at(r)}});
  j["block_counts"] = std::move(blocks);

  j["rescaled_length_histogram"] = {{"bin_width", rep.rescaled_length.bin_width},
                                    {"counts", rep.rescaled_length.bins}};
  j["distance"] = {{"mean_rescaled", rep.mean_rescaled_distance},
                   {"mean_rescaled_marked", rep.mean_rescaled_marked_distance},
                   {"ks_distance", rep.ks_distance},
                   {"ks_p_value", rep.ks_p_value}};
  if (rep.exact_comparison) j["exact_comparison"] = stats_json(*rep.exact_comparison);
  if (rep.limit_comparison) j["limit_comparison"] = stats_json(*rep.limit_comparison);
  j["timing"] = {{"runtime_seconds", rep.runtime_seconds},
                 {"workers", cfg.workers},
                 {"total_steps", rep.total_steps}};
  return j;
}

void write_observation_csv(std::ostream& os, const ExperimentConfig& config,
                           const std::vector<ObservationRecord>& records) {
  const std::size_t width = 2 * std::size_t(config.l) - 1;
  os << "replicate,classification,canonical_key,r";
  for (std::size_t i = 1; i <= width; ++i) os << ",u_" << i;
  os << ",d\n";
  for (const auto& rec : records) {
    os << rec.replicate << ',';
    if (rec.budget_exceeded) {
      os << "budget_exceeded,\"\",";
      for (std::size_t i = 0; i <= width; ++i) os << ',';
      os << '\n';
      continue;
    }
    const auto& obs = rec.obs;
    os << to_string(obs.classification) << ",\"" << obs.shape_key << "\"," << obs.r;
    // Binary bouquets have exactly 2l - r extensions; other shapes may have
    // fewer, padded with empty cells.
    const auto u = obs.extensions();
    for (std::size_t i = 0; i < width; ++i) {
      os << ',';
      if (i < u.size()) os << u[i];
    }
    os << ',' << obs.d << '\n';
  }
}

}  // namespace kforest
