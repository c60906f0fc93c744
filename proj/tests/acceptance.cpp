// Acceptance runner: one PASS/FAIL line per criterion.
//   umt_acceptance            run every criterion
//   umt_acceptance N [M ...]  run the listed criteria

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "cli.hpp"
#include "support/oracles.hpp"
#include "umt/evaluation.hpp"
#include "umt/impossibility.hpp"
#include "umt/io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace umt;

const fs::path kData = UMT_DATA_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("umt_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "umtlab");
  std::ostringstream out, err;
  const int code = cli::main_entry(args, out, err);
  if (code != cli::kExitOk) std::cerr << err.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome two_to_one_soundness() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  int runs = 0, feasible = 0, violations = 0;
  for (int i = 0; i < 200; ++i) {
    const auto inst = oracle::random_two_to_one(rng, "c1_" + std::to_string(i));
    const int z = std::uniform_int_distribution<int>(1, 3)(rng);
    for (double eps : {0.0, 0.1, 0.3}) {
      const auto r = brute_force_min_error(inst, z, eps);
      ++runs;
      if (!r.feasible) continue;
      ++feasible;
      if (r.value < two_to_one_bound(inst, eps) - 1e-9 || r.contraction_violations != 0) ++violations;
    }
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs < 60.0,
          fmt::format("{} runs, {} feasible, {} violations, {:.2f} s", runs, feasible, violations, secs)};
}

Outcome worst_case_demo() {
  const auto inst = make_worst_case(0.8);
  const double bound = two_to_one_bound(inst, 0.0);
  const auto r = brute_force_min_error(inst, 2, 0.0);
  const bool pass = std::abs(bound - 0.8) <= 1e-12 && r.feasible && r.value >= 0.8 - 1e-12;
  return {pass, fmt::format("bound {:.15g}, brute-force min sum {:.15g}", bound, r.value)};
}

Outcome many_to_many_soundness() {
  std::mt19937_64 rng(20240602);
  int checked = 0, violations = 0;
  for (int i = 0; i < 50; ++i) {
    const auto inst = oracle::random_three_language(rng, "c3_" + std::to_string(i));
    const double eps = std::uniform_real_distribution<double>(0.0, 0.3)(rng);
    const auto bounds = many_to_many_bounds(inst, eps);
    for (auto obj : {Objective::kMax, Objective::kAvg}) {
      BruteForceOptions opts;
      opts.objective = obj;
      const auto r = brute_force_min_error(inst, 3, eps, opts);
      if (!r.feasible) continue;
      ++checked;
      const double b = obj == Objective::kMax ? bounds.max_bound : bounds.avg_bound;
      if (r.value < b - 1e-9) ++violations;
    }
  }
  return {violations == 0 && checked > 0, fmt::format("{} feasible checks, {} violations", checked, violations)};
}

Outcome lemma_and_data_processing() {
  std::mt19937_64 rng(20240603);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int lemma_violations = 0, dpi_violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    const int outs = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<std::string> atoms;
    std::vector<double> p, q;
    std::map<std::string, std::string> f, g;
    for (int a = 0; a < n; ++a) {
      atoms.push_back("x" + std::to_string(a));
      p.push_back(u(rng));
      q.push_back(u(rng));
      f[atoms.back()] = "y" + std::to_string(std::uniform_int_distribution<int>(0, outs - 1)(rng));
      g[atoms.back()] = "y" + std::to_string(std::uniform_int_distribution<int>(0, outs - 1)(rng));
    }
    auto normalise = [](std::vector<double>& w) {
      double t = 0.0;
      for (double x : w) t += x;
      for (double& x : w) x /= t;
    };
    normalise(p);
    normalise(q);
    const FiniteDistribution<std::string> dp(atoms, p), dq(atoms, q);
    const Translator<std::string, std::string> tf(f), tg(g);
    if (!disagreement_bound_check(dp, tf, tg).holds) ++lemma_violations;
    if (!data_processing_check(dp, dq, tf).holds) ++dpi_violations;
  }
  return {lemma_violations == 0 && dpi_violations == 0,
          fmt::format("1000 instances each: {} disagreement violations, {} data-processing violations",
                      lemma_violations, dpi_violations)};
}

Outcome proposition_zero() {
  const FunctionClassSpec spec{4, 1.0, 2.0, 1.0};
  int holds = 0, within = 0;
  double worst_stat = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto codecs = make_codec_set({"L0", "L1", "L2"}, sample_ground_truth_codecs(spec, 3, derive_seed(seed, "codecs")));
    const auto r = proposition_zero_check(codecs, {"L0", "L1"}, "L2", {spec.dim, spec.ball_radius}, 10000, seed);
    holds += r.holds ? 1 : 0;
    within += r.bound_within_tolerance ? 1 : 0;
    worst_stat = std::max(worst_stat, r.max_stat);
  }
  return {holds >= 19 && within >= 19,
          fmt::format("moment test held in {}/20, quantised bound within tolerance in {}/20, worst statistic {:.3f}",
                      holds, within, worst_stat)};
}

std::vector<AlignedCorpus> corpora_for(const TranslationGraph& g, const RandomizedCodecSet& codecs,
                                       const LatentDistribution& latent, std::uint64_t seed) {
  std::vector<AlignedCorpus> out;
  for (const auto& e : g.edges()) out.push_back(randomized_generate(e.a, e.b, codecs, e.samples, latent, seed));
  return out;
}

Outcome realizable_recovery() {
  const FunctionClassSpec spec{4, 1.0, 2.0, 1.0};
  const auto g = TranslationGraph::chain(5, 50);
  const auto codecs = make_codec_set(g.languages(), sample_randomized_codecs(spec, 5, 0, 0.0, derive_seed(1, "codecs")));
  const LatentDistribution latent{spec.dim, spec.ball_radius};
  const auto est = train(g, corpora_for(g, codecs, latent, 1), {}).estimate;
  double worst = 0.0;
  int pairs = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      const auto& a = g.languages()[i];
      const auto& b = g.languages()[j];
      worst = std::max(worst, population_loss(est, a, b, codecs, latent, {10000, 1}).value);
      worst = std::max(worst, population_loss(est, b, a, codecs, latent, {10000, 1}).value);
      ++pairs;
    }
  }
  return {pairs == 10 && worst <= 1e-8,
          fmt::format("{} unordered pairs (both directions), worst population loss {:.3g}", pairs, worst)};
}

struct ChainRun {
  std::vector<PairEvalRecord> records;
};

ChainRun chain_run(std::uint64_t seed, bool project) {
  const FunctionClassSpec spec{4, 1.0, 2.0, 1.0};
  const auto g = TranslationGraph::chain(5, 200);
  const auto codecs = make_codec_set(g.languages(), sample_randomized_codecs(spec, 5, 2, 0.05, derive_seed(seed, "codecs")));
  const LatentDistribution latent{spec.dim, spec.ball_radius};
  TrainConfig tc;
  tc.project = project;
  tc.spec = spec;
  const auto est = train(g, corpora_for(g, codecs, latent, seed), tc).estimate;
  ChainBoundConfig cfg;
  cfg.population = {10000, seed, LossMetric::kExcess};
  return {verify_chain_bound(est, g, codecs, latent, cfg)};
}

double path_length_spearman(const std::vector<ChainRun>& runs) {
  std::map<std::pair<std::string, std::string>, std::vector<double>> losses;
  std::map<std::pair<std::string, std::string>, int> lengths;
  for (const auto& run : runs) {
    for (const auto& r : run.records) {
      losses[{r.source, r.target}].push_back(r.measured_loss);
      lengths[{r.source, r.target}] = r.path_length;
    }
  }
  std::vector<double> x, y;
  for (const auto& [pair, v] : losses) {
    x.push_back(lengths[pair]);
    y.push_back(median(v));
  }
  return spearman_correlation(x, y);
}

Outcome chained_bound() {
  std::vector<ChainRun> runs, plain;
  int records = 0, holding = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    runs.push_back(chain_run(seed, true));
    plain.push_back(chain_run(seed, false));
    for (const auto& r : runs.back().records) {
      ++records;
      holding += r.holds ? 1 : 0;
    }
  }
  const double fraction = static_cast<double>(holding) / records;
  const double rho = path_length_spearman(runs);
  return {fraction >= 0.95 && rho >= 0.8,
          fmt::format("bound held for {}/{} records ({:.3f}); Spearman(path length, median loss) = {:.3f} with "
                      "class-projected fits ({:.3f} with unconstrained fits)",
                      holding, records, fraction, rho, path_length_spearman(plain))};
}

Outcome gauge_invariance() {
  const FunctionClassSpec spec{4, 1.0, 2.0, 1.0};
  const LatentDistribution latent{spec.dim, spec.ball_radius};
  const auto g = TranslationGraph::chain(5, 200);
  const auto codecs = make_codec_set(g.languages(), sample_randomized_codecs(spec, 5, 2, 0.05, derive_seed(8, "codecs")));
  const auto corpora = corpora_for(g, codecs, latent, 8);
  const auto est = train(g, corpora, {}).estimate;

  Rng rng(derive_seed(8, "gauge"));
  const int dim = codecs.begin()->second.sentence_dim();
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = rng.normal();
  }
  Vector c(dim);
  for (int i = 0; i < dim; ++i) c(i) = rng.normal();
  const auto moved = gauge_transform(est, AffineMap(clip_singular_values(m, 0.25, 4.0), c));

  double composite = 0.0, empirical = 0.0, population = 0.0;
  for (const auto& a : g.languages()) {
    for (const auto& b : g.languages()) {
      if (!(a < b)) continue;
      composite = std::max(composite, max_abs_difference(compose_zero_shot(est, a, b), compose_zero_shot(moved, a, b)));
      const PopulationConfig pc{10000, 8};
      population = std::max(population, std::abs(population_loss(est, a, b, codecs, latent, pc).value -
                                                 population_loss(moved, a, b, codecs, latent, pc).value));
    }
  }
  for (const auto& corpus : corpora) {
    empirical = std::max(empirical, std::abs(empirical_edge_loss(est, corpus) - empirical_edge_loss(moved, corpus)));
  }
  return {composite <= 1e-9 && empirical <= 1e-9 && population <= 1e-9,
          fmt::format("max change over pairs in evaluation direction: composite {:.2g}, empirical loss {:.2g}, "
                      "population loss {:.2g}",
                      composite,
                      empirical, population)};
}

const std::vector<std::string> kSweepArgs = {"sweep", "--d", "1", "--k", "1", "--sigma", "0.05",
                                             "--n-list", "32,64,128,256,512,1024,2048,4096",
                                             "--trials", "20", "--population-samples", "200000", "--seed", "1"};

Outcome sweep_slope() {
  const auto dir = scratch("sweep");
  auto args = kSweepArgs;
  args.insert(args.end(), {"--out", dir.string()});
  const auto t0 = std::chrono::steady_clock::now();
  if (cli(args) != cli::kExitOk) return {false, "sweep command failed"};
  const double secs = seconds_since(t0);
  const Json summary = read_json_file(dir / "summary.json");
  if (summary["slope"].is_null()) return {false, "degenerate sweep"};
  const double slope = summary["slope"].get<double>();
  return {std::abs(slope + 0.5) <= 0.15 && secs < 300.0,
          fmt::format("log-log slope of median gap {:.3f}, {:.1f} s", slope, secs)};
}

Outcome fig3_diameter() {
  const auto g = graph_from_json(read_json_file(kData / "fig3_graph.json"));
  const auto sp = shortest_path_and_diameter(g);
  const std::vector<std::string> expected{"L3", "L1", "L4", "L5", "L6"};
  std::string path;
  for (const auto& l : sp.diameter_path) path += (path.empty() ? "" : " ") + l;
  return {g.size() == 6 && sp.diameter == 4 && sp.diameter_path == expected,
          fmt::format("diam {}, witness path {}", sp.diameter, path)};
}

Outcome sample_size_consistency() {
  const int k = 5;
  const FunctionClassSpec spec{4, 1.0, 2.0, 1.0};
  const int p = spec.dim * (spec.dim + 1);
  const double m = spec.sup_bound();
  double lo = 1e300, hi = 0.0;
  for (double eps : {0.05, 0.1, 0.2, 0.3, 0.5}) {
    for (double delta : {0.01, 0.05, 0.1, 0.2, 0.5}) {
      const auto n = required_sample_size(eps, delta, k, p, m);
      const double log_n = p * std::log(16.0 * m / eps);
      const double ratio = concentration_bound(static_cast<double>(n), eps, m, log_n) / (delta / (k * k));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  return {lo >= 0.5 && hi <= 2.0,
          fmt::format("concentration_bound(required n) / (delta/K^2) in [{:.6f}, {:.6f}] over 25 grid points", lo, hi)};
}

Outcome reproducibility() {
  std::vector<std::string> differing;
  int compared = 0;
  std::map<std::string, std::string> first;
  for (int rep = 0; rep < 2; ++rep) {
    const auto dir = scratch("repro_" + std::to_string(rep));
    const auto chain = (kData / "chain5.json").string();
    const std::vector<std::vector<std::string>> steps = {
        {"brute", "--instance", (kData / "worst08.json").string(), "--out", (dir / "brute").string()},
        {"demo-worst-case", "--delta", "0.8", "--out", (dir / "demo").string()},
        {"generate", "--graph", chain, "--sigma", "0.05", "--k", "2", "--seed", "1", "--out", (dir / "gen").string()},
        {"train", "--graph", chain, "--corpora", (dir / "gen" / "corpora").string(), "--project", "--out",
         (dir / "train").string()},
        {"eval", "--graph", chain, "--codecs", (dir / "gen" / "codecs.json").string(), "--encoders",
         (dir / "train" / "encoders.json").string(), "--seed", "1", "--out", (dir / "eval").string()},
    };
    for (const auto& s : steps) {
      if (cli(s) != cli::kExitOk) return {false, "command failed: " + s.front()};
    }
    auto sweep = kSweepArgs;
    sweep.insert(sweep.end(), {"--out", (dir / "sweep").string()});
    if (cli(sweep) != cli::kExitOk) return {false, "command failed: sweep"};
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      if (entry.path().extension() != ".csv") continue;
      const auto rel = fs::relative(entry.path(), dir).string();
      if (rep == 0) {
        first[rel] = slurp(entry.path());
      } else {
        ++compared;
        if (!first.contains(rel) || first[rel] != slurp(entry.path())) differing.push_back(rel);
      }
    }
  }
  std::string names;
  for (const auto& d : differing) names += " " + d;
  return {compared == static_cast<int>(first.size()) && compared >= 5 && differing.empty(),
          fmt::format("{} CSV files compared across two runs, {} differ{}", compared, differing.size(), names)};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria = {
    {"two-to-one bound soundness (brute force)", two_to_one_soundness},
    {"worst-case demo", worst_case_demo},
    {"many-to-many bound soundness", many_to_many_soundness},
    {"disagreement lemma and data processing", lemma_and_data_processing},
    {"invariant target marginals", proposition_zero},
    {"realizable exact recovery", realizable_recovery},
    {"chained path bound", chained_bound},
    {"gauge invariance", gauge_invariance},
    {"generalization-gap scaling", sweep_slope},
    {"six-language graph diameter", fig3_diameter},
    {"sample-size formula consistency", sample_size_consistency},
    {"reproducibility", reproducibility},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::stoi(argv[i]));
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(kCriteria.size()); ++i) selected.push_back(i);
  }
  int failures = 0;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(kCriteria.size())) {
      std::cout << "FAIL criterion " << id << ": no such criterion\n";
      ++failures;
      continue;
    }
    const auto& [name, fn] = kCriteria[static_cast<std::size_t>(id - 1)];
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << o.detail << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
