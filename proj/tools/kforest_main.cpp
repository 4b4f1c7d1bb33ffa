// kforest: command-line front end for sampling, exact tables, limit tables
// and the acceptance suite.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kforest/acceptance.hpp"
#include "kforest/combinatorics.hpp"
#include "kforest/exact_model.hpp"
#include "kforest/experiment.hpp"
#include "kforest/gibbs.hpp"
#include "kforest/limit_laws.hpp"

namespace {

using namespace kforest;

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// KFOREST_SEED supplies a default; --seed always wins.
std::uint64_t default_seed() {
  if (const char* env = std::getenv("KFOREST_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw UsageError("KFOREST_SEED is not an unsigned integer");
    }
  }
  return 1;
}

std::ostream& open_output(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
  if (path.empty() || path == "-") return std::cout;
  holder = std::make_unique<std::ofstream>(path);
  if (!*holder) throw UsageError("cannot open output file " + path);
  return *holder;
}

struct SampleArgs {
  std::uint32_t n = 0;
  double kappa = 0.0, c = 0.0;
  std::uint32_t l = 0;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string out, format = "json";
};

int run_sample(const SampleArgs& a, bool kappa_given, bool seed_given) {
  ExperimentConfig cfg;
  cfg.n = a.n;
  cfg.kappa_mode = kappa_given ? KappaMode::kFixed : KappaMode::kCritical;
  cfg.kappa_value = kappa_given ? a.kappa : a.c;
  cfg.l = a.l;
  cfg.replicates = a.reps;
  cfg.seed = seed_given ? a.seed : default_seed();
  cfg.workers = a.workers;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::unique_ptr<std::ofstream> file;
  std::ostream& os = open_output(a.out, file);
  if (a.format == "csv") {
    const auto records = run_observations(cfg);
    write_observation_csv(os, cfg, records);
    std::uint64_t failed = 0;
    for (const auto& r : records) failed += r.budget_exceeded;
    if (failed) std::cerr << "warning: " << failed << " replicates exceeded the step budget\n";
  } else {
    const auto report = run_monte_carlo(cfg);
    os << to_json(report).dump(2) << '\n';
    if (report.budget_failures)
      std::cerr << "warning: " << report.budget_failures
                << " replicates exceeded the step budget\n";
  }
  return 0;
}

int run_exact(std::uint32_t n, const std::string& kappa_text, std::uint32_t l) {
  if (n > kMaxOracleN) throw UsageError("exact: N must be at most " + std::to_string(kMaxOracleN));
  Rational kq;
  try {
    kq = parse_rational(kappa_text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const ModelParams params{n, static_cast<double>(kq), l};
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto dist = brute_force_reduced_distribution(params);
  std::cout << "canonical_key,classification,r,d,trees,probability,closed_form,exact\n"
            << std::setprecision(17);
  for (const auto& [key, c] : dist.classes) {
    std::uint64_t trees = 0;
    for (auto t : c.trees_by_root_degree) trees += t;
    std::cout << '"' << key << "\"," << to_string(c.classification) << ',' << c.r << ',' << c.d
              << ',' << trees << ',' << c.probability << ','
              << class_probability(l, c.r, c.inner_count, n, params.kappa) << ','
              << dist.exact_probability(c, kq).str() << '\n';
  }
  return 0;
}

int run_limits(std::size_t lmax, const std::vector<double>& cs) {
  for (double c : cs)
    if (!(c > 0.0)) throw UsageError("limits: every c must be > 0");
  if (lmax < 1) throw UsageError("limits: --lmax must be >= 1");
  std::cout << "l,r,c,C_lr,I_lr,C_lr_I_lr,S_l\n" << std::setprecision(17);
  for (double c : cs) {
    const LimitTables t(c, lmax);
    for (std::size_t l = 1; l <= lmax; ++l) {
      const double s = t.normalization_sum(l);
      for (std::size_t r = 1; r <= l; ++r) {
        const double count = t.bouquet_count(l, r), p = t.bouquet_probability(l, r);
        std::cout << l << ',' << r << ',' << c << ',' << count_bouquets(l, r) << ',' << p << ','
                  << count * p << ',' << s << '\n';
      }
    }
  }
  return 0;
}

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string s;
  for (std::size_t i = 0; i < sizes.size(); ++i) s += (i ? ";" : "") + std::to_string(sizes[i]);
  return s;
}

std::string partition_string(const PartitionOfL& p) {
  std::string s;
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    s += i ? "|" : "";
    for (std::size_t j = 0; j < p.blocks[i].size(); ++j)
      s += (j ? "," : "") + std::to_string(p.blocks[i][j]);
  }
  return s;
}

int run_gibbs(std::size_t l, double c, std::uint64_t reps, std::uint64_t seed) {
  if (l < 1) throw UsageError("gibbs: --l must be >= 1");
  if (!(c > 0.0)) throw UsageError("gibbs: --c must be > 0");
  if (reps < 1) throw UsageError("gibbs: --reps must be >= 1");
  const LimitTables tables(c, l + 1);
  std::map<std::string, std::uint64_t> counts;
  for (std::uint64_t i = 0; i < reps; ++i) {
    Engine rng = RngStream{seed, i}.engine();
    ++counts[partition_string(sequential_sample(l, tables, rng).partition())];
  }
  std::vector<Label> labels(l);
  for (std::size_t i = 0; i < l; ++i) labels[i] = Label(i + 1);
  std::cout << "partition,sizes,eppf,empirical_freq,n_samples\n" << std::setprecision(17);
  for (const auto& p : enumerate_set_partitions(labels)) {
    std::vector<std::size_t> sizes;
    for (const auto& b : p.blocks) sizes.push_back(b.size());
    const std::string key = partition_string(p);
    const auto it = counts.find(key);
    const std::uint64_t k = it == counts.end() ? 0 : it->second;
    std::cout << '"' << key << "\"," << join_sizes(sizes) << ',' << eppf(sizes, tables) << ','
              << double(k) / double(reps) << ',' << reps << '\n';
  }
  return 0;
}

int run_mixture(std::size_t lmax, const std::vector<double>& betas) {
  if (lmax < 1) throw UsageError("mixture: --lmax must be >= 1");
  for (double b : betas)
    if (!(b > -1.0)) throw UsageError("mixture: every beta must be > -1");
  std::cout << "l,r,beta,closed,integrated,abs_diff\n" << std::setprecision(17);
  for (double beta : betas)
    for (std::size_t l = 1; l <= lmax; ++l)
      for (std::size_t r = 1; r <= l; ++r) {
        const auto m = pd_mixture_check(l, r, beta);
        std::cout << l << ',' << r << ',' << beta << ',' << m.closed_form << ',' << m.integrated
                  << ',' << std::abs(m.closed_form - m.integrated) << '\n';
      }
  return 0;
}

int run_validate(int only, std::uint64_t seed, unsigned workers) {
  AcceptanceOptions opt;
  opt.seed = seed;
  opt.workers = workers;
  bool all = true;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (only && id != only) continue;
    const auto r = run_criterion(id, opt);
    std::cout << format_result_line(r) << std::endl;
    all = all && r.passed;
  }
  return all ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced subtrees of kappa-biased spanning trees on the complete graph"};
  app.require_subcommand(1);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Monte Carlo with Wilson's algorithm");
  sample->add_option("--n", sa.n, "graph size N")->required();
  auto* kopt = sample->add_option("--kappa", sa.kappa, "fixed killing rate");
  auto* copt = sample->add_option("--c", sa.c, "critical constant, kappa = c sqrt(N)");
  kopt->excludes(copt);
  sample->add_option("--l", sa.l, "marked set size")->required();
  sample->add_option("--reps", sa.reps, "replicates")->required();
  auto* sseed = sample->add_option("--seed", sa.seed, "64-bit seed");
  sample->add_option("--workers", sa.workers, "threads")->check(CLI::PositiveNumber);
  sample->add_option("--out", sa.out, "output path (default stdout)");
  sample->add_option("--format", sa.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::uint32_t en = 0, el = 0;
  std::string ekappa;
  auto* exact = app.add_subcommand("exact", "exact class table by Pruefer enumeration");
  exact->add_option("--n", en)->required();
  exact->add_option("--kappa", ekappa, "kappa, e.g. 2, 0.5 or 1/3")->required();
  exact->add_option("--l", el)->required();

  std::size_t lim_l = 0;
  std::vector<double> lim_c;
  auto* limits = app.add_subcommand("limits", "critical-regime limit tables");
  limits->add_option("--lmax", lim_l)->required();
  limits->add_option("--c", lim_c)->required()->delimiter(',');

  std::size_t gl = 0;
  double gc = 0.0;
  std::uint64_t greps = 0, gseed = 0;
  auto* gibbs = app.add_subcommand("gibbs", "sequential Gibbs construction");
  gibbs->add_option("--l", gl)->required();
  gibbs->add_option("--c", gc)->required();
  gibbs->add_option("--reps", greps)->required();
  auto* gseed_opt = gibbs->add_option("--seed", gseed);

  std::size_t mix_l = 0;
  std::vector<double> betas;
  auto* mixture = app.add_subcommand("mixture", "mixture identity over h_beta");
  mixture->add_option("--lmax", mix_l)->required();
  mixture->add_option("--beta", betas)->required()->delimiter(',');

  int only = 0;
  std::uint64_t vseed = AcceptanceOptions{}.seed;
  unsigned vworkers = 1;
  auto* validate = app.add_subcommand("validate", "run the acceptance suite");
  validate->add_option("--criterion", only, "run one criterion")->check(CLI::Range(1, kCriterionCount));
  validate->add_option("--seed", vseed);
  validate->add_option("--workers", vworkers)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sample) {
      if (!*kopt && !*copt) throw UsageError("sample: one of --kappa or --c is required");
      return run_sample(sa, bool(*kopt), bool(*sseed));
    }
    if (*exact) return run_exact(en, ekappa, el);
    if (*limits) return run_limits(lim_l, lim_c);
    if (*gibbs) return run_gibbs(gl, gc, greps, *gseed_opt ? gseed : default_seed());
    if (*mixture) return run_mixture(mix_l, betas);
    if (*validate) return run_validate(only, vseed, vworkers);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}
