#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "umt/evaluation.hpp"
#include "umt/generative.hpp"
#include "umt/graph.hpp"
#include "umt/impossibility.hpp"
#include "umt/io.hpp"
#include "umt/trainer.hpp"

namespace umt::cli {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::kBound: return "bound";
    case Mode::kBrute: return "brute";
    case Mode::kDemoWorstCase: return "demo-worst-case";
    case Mode::kGenerate: return "generate";
    case Mode::kTrain: return "train";
    case Mode::kEval: return "eval";
    case Mode::kSweep: return "sweep";
  }
  return "?";
}

namespace {

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::string num(double x) { return fmt::format("{:.12g}", x); }

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error("invalid configuration:\n  " + join(violations, "\n  ")), violations_(std::move(violations)) {}

std::vector<std::string> validate(const ExperimentConfig& c) {
  std::vector<std::string> v;
  auto need_file = [&](const std::filesystem::path& p, const std::string& field) {
    if (p.empty()) {
      v.push_back(field + ": required for " + to_string(c.mode));
    } else if (!std::filesystem::exists(p)) {
      v.push_back(field + ": file not found: " + p.string());
    }
  };
  if (!(c.epsilon >= 0.0) || !std::isfinite(c.epsilon)) v.push_back("epsilon: must be a finite value >= 0");
  if (c.mode == Mode::kDemoWorstCase) {
    if (!(c.delta >= 0.0 && c.delta <= 1.0)) v.push_back("delta: must lie in [0, 1]");
  } else if (!(c.delta > 0.0 && c.delta < 1.0)) {
    v.push_back("delta: must lie in (0, 1)");
  }
  if (c.objective != "sum" && c.objective != "max" && c.objective != "avg" && c.objective != "all") {
    v.push_back("objective: must be one of sum, max, avg, all");
  }
  if (c.z_size < 1 || c.z_size > kMaxBruteForceZ) {
    v.push_back("z: must lie in [1, " + std::to_string(kMaxBruteForceZ) + "]");
  }
  if (c.dim < 1) v.push_back("d: must be >= 1");
  if (!(c.ball_radius > 0.0)) v.push_back("B: must be > 0");
  if (!(c.rho >= 1.0)) v.push_back("rho: must be >= 1");
  if (!(c.offset_bound >= 0.0)) v.push_back("offset_bound: must be >= 0");
  if (!(c.sigma >= 0.0) || !std::isfinite(c.sigma)) v.push_back("sigma: must be >= 0");
  if (c.nuisance_dim < 0) v.push_back("k: must be >= 0");
  if (c.languages < 2) v.push_back("languages: must be >= 2");
  if (c.samples_per_edge < 1) v.push_back("n: must be >= 1");
  if (c.sweeps < 0) v.push_back("sweeps: must be >= 0");
  if (!(c.ridge >= 0.0)) v.push_back("ridge: must be >= 0");
  if (c.eval_samples < 1000) v.push_back("samples: must be >= 1000");
  if (c.metric != "excess" && c.metric != "total") v.push_back("metric: must be excess or total");
  if (!(c.mc_slack >= 0.0)) v.push_back("mc_slack: must be >= 0");
  if (!(c.allowance >= 0.0 && c.allowance <= 1.0)) v.push_back("allowance: must lie in [0, 1]");
  if (c.population_samples < 1000) v.push_back("population_samples: must be >= 1000");

  switch (c.mode) {
    case Mode::kBound:
    case Mode::kBrute:
      need_file(c.instance, "instance");
      break;
    case Mode::kDemoWorstCase:
      break;
    case Mode::kGenerate:
      if (c.out.empty()) v.push_back("out: required for generate");
      if (!c.graph.empty()) need_file(c.graph, "graph");
      break;
    case Mode::kTrain:
      if (c.out.empty()) v.push_back("out: required for train");
      if (!c.graph.empty()) need_file(c.graph, "graph");
      if (c.corpora.empty()) {
        v.push_back("corpora: required for train");
      } else if (!std::filesystem::is_directory(c.corpora)) {
        v.push_back("corpora: not a directory: " + c.corpora.string());
      }
      break;
    case Mode::kEval:
      if (c.out.empty()) v.push_back("out: required for eval");
      if (!c.graph.empty()) need_file(c.graph, "graph");
      need_file(c.codecs, "codecs");
      need_file(c.encoders, "encoders");
      break;
    case Mode::kSweep:
      if (c.out.empty()) v.push_back("out: required for sweep");
      if (c.n_list.size() < 2) v.push_back("n_list: needs at least two values");
      for (std::size_t i = 1; i < c.n_list.size(); ++i) {
        if (c.n_list[i] <= c.n_list[i - 1]) {
          v.push_back("n_list: must be strictly ascending");
          break;
        }
      }
      if (!c.n_list.empty() && c.n_list.front() < c.dim + c.nuisance_dim + 1) {
        v.push_back("n_list: every n must be >= d + k + 1");
      }
      if (c.trials < 5) v.push_back("trials: must be >= 5");
      if (!(c.sigma > 0.0) && c.nuisance_dim == 0) v.push_back("sigma: sweep needs sigma > 0 or k > 0");
      break;
  }
  return v;
}

namespace {

void add_common(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--seed", c.seed, "Master seed");
  sub->add_option("--out", c.out, "Output directory");
  sub->add_option("--epsilon", c.epsilon, "Universality tolerance epsilon");
  sub->add_option("--delta", c.delta, "Failure probability, or the worst-case gap for demo-worst-case");
}

void add_spec(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--d", c.dim, "Latent dimension");
  sub->add_option("--B", c.ball_radius, "Latent ball radius");
  sub->add_option("--rho", c.rho, "Singular-value band [1/rho, rho]");
  sub->add_option("--offset-bound", c.offset_bound, "Maximum offset norm");
  sub->add_option("--sigma", c.sigma, "Noise scale of randomized codecs");
  sub->add_option("--k", c.nuisance_dim, "Nuisance dimension of randomized codecs");
}

void add_graph(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--graph", c.graph, "Graph JSON (default: a chain)");
  sub->add_option("--languages", c.languages, "Chain length when no graph is given");
  sub->add_option("--n", c.samples_per_edge, "Samples per edge when no graph is given");
}

}  // namespace

std::optional<ExperimentConfig> parse_and_validate(const std::vector<std::string>& args, std::ostream& out) {
  ExperimentConfig c;
  CLI::App app{"Universal translation lab: impossibility bounds and encoder-decoder experiments", "umtlab"};
  app.require_subcommand(1);

  auto* bound = app.add_subcommand("bound", "Evaluate the lower bounds of an instance");
  add_common(bound, c);
  bound->add_option("--instance", c.instance, "Instance JSON")->required();
  bound->add_flag("--brute", c.brute, "Also run the exhaustive search");
  bound->add_option("--z", c.z_size, "Representation size |Z| for the exhaustive search");
  bound->add_option("--objective", c.objective, "sum | max | avg | all");

  auto* brute = app.add_subcommand("brute", "Exhaustive minimum error over epsilon-universal mappings");
  add_common(brute, c);
  brute->add_option("--instance", c.instance, "Instance JSON")->required();
  brute->add_option("--z", c.z_size, "Representation size |Z|");
  brute->add_option("--objective", c.objective, "sum | max | avg | all");

  auto* demo = app.add_subcommand("demo-worst-case", "Bound and exhaustive minimum on the worst-case family");
  add_common(demo, c);
  demo->add_option("--z", c.z_size, "Representation size |Z|");

  auto* gen = app.add_subcommand("generate", "Sample ground-truth codecs and aligned corpora");
  add_common(gen, c);
  add_spec(gen, c);
  add_graph(gen, c);

  auto* train = app.add_subcommand("train", "Fit edges and anchor per-language encoders");
  add_common(train, c);
  add_graph(train, c);
  train->add_option("--corpora", c.corpora, "Directory of corpus files")->required();
  train->add_option("--anchor", c.anchor, "Anchor language (default: first)");
  train->add_option("--sweeps", c.sweeps, "Joint refinement sweeps");
  train->add_option("--ridge", c.ridge, "Ridge used for ill-conditioned designs");
  train->add_flag("--project", c.project, "Project fitted maps into the function class");
  add_spec(train, c);

  auto* eval = app.add_subcommand("eval", "Check the chained path bound for every language pair");
  add_common(eval, c);
  add_graph(eval, c);
  eval->add_option("--codecs", c.codecs, "Codec JSON")->required();
  eval->add_option("--encoders", c.encoders, "Encoder JSON")->required();
  eval->add_option("--samples", c.eval_samples, "Monte-Carlo samples per population loss");
  eval->add_option("--metric", c.metric, "excess | total");
  eval->add_option("--mc-slack", c.mc_slack, "Relative slack on the bound");
  eval->add_option("--allowance", c.allowance, "Tolerated fraction of failing pairs");

  auto* sweep = app.add_subcommand("sweep", "Generalization gap versus corpus size on one edge");
  add_common(sweep, c);
  add_spec(sweep, c);
  sweep->add_option("--n-list", c.n_list, "Corpus sizes, ascending")->delimiter(',');
  sweep->add_option("--trials", c.trials, "Trials per size");
  sweep->add_option("--population-samples", c.population_samples, "Monte-Carlo samples per population loss");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError({std::string(e.what())});
  }
  const std::pair<CLI::App*, Mode> modes[] = {{bound, Mode::kBound},       {brute, Mode::kBrute},
                                              {demo, Mode::kDemoWorstCase}, {gen, Mode::kGenerate},
                                              {train, Mode::kTrain},       {eval, Mode::kEval},
                                              {sweep, Mode::kSweep}};
  for (const auto& [sub, mode] : modes) {
    if (sub->parsed()) c.mode = mode;
  }
  auto violations = validate(c);
  if (!violations.empty()) throw ConfigError(std::move(violations));
  return c;
}

namespace {

FunctionClassSpec spec_of(const ExperimentConfig& c) { return {c.dim, c.ball_radius, c.rho, c.offset_bound}; }

TranslationGraph graph_of(const ExperimentConfig& c) {
  if (!c.graph.empty()) return graph_from_json(read_json_file(c.graph));
  return TranslationGraph::chain(c.languages, c.samples_per_edge);
}

std::filesystem::path corpus_path(const std::filesystem::path& dir, const GraphEdge& e) {
  return dir / (e.a + "__" + e.b + ".json");
}

template <class Writer, class Data>
void write_csv(const std::filesystem::path& path, Writer writer, const Data& data) {
  std::ostringstream os;
  writer(os, data);
  write_text_file(path, os.str());
}

std::vector<Objective> objectives_of(const ExperimentConfig& c) {
  if (c.objective == "all") return {Objective::kSum, Objective::kMax, Objective::kAvg};
  return {parse_objective(c.objective)};
}

// One report per requested objective; the bounds themselves do not depend on it.
int run_bounds(const ExperimentConfig& c, const InstanceFile& file, bool brute, std::ostream& out) {
  auto base = file.two_to_one ? make_bound_report(*file.two_to_one, c.epsilon)
                              : make_bound_report(file.many, c.epsilon);
  out << "bound_sum=" << num(base.bound_sum) << "\n";
  out << "bound_max=" << num(base.bound_max) << "\n";
  out << "bound_avg=" << num(base.bound_avg) << "\n";
  out << "tv_max=" << num(base.tv_max) << "\n";
  std::vector<BoundReport> reports;
  bool holds = true;
  if (!brute) {
    reports.push_back(base);
  } else {
    for (Objective o : objectives_of(c)) {
      BoundReport r = base;
      BruteForceOptions opt;
      opt.objective = o;
      r.brute_force = file.two_to_one && o == Objective::kSum
                          ? brute_force_min_error(*file.two_to_one, c.z_size, c.epsilon, opt)
                          : brute_force_min_error(file.many, c.z_size, c.epsilon, opt);
      const auto& bf = *r.brute_force;
      out << "brute_" << to_string(o) << "=" << (bf.feasible ? num(bf.value) : std::string("infeasible"))
          << " bound=" << num(r.bound_for(o)) << " holds=" << (r.holds() ? "true" : "false") << "\n";
      holds = holds && r.holds();
      reports.push_back(std::move(r));
    }
  }
  if (!c.out.empty()) {
    write_csv(c.out / "bound.csv", write_bound_csv, reports);
    Json summary{{"mode", to_string(c.mode)}, {"seed", c.seed},      {"instance_id", base.instance_id},
                 {"epsilon", c.epsilon},      {"holds", holds},      {"bound_sum", base.bound_sum},
                 {"bound_max", base.bound_max}, {"bound_avg", base.bound_avg}};
    write_json_file(c.out / "summary.json", summary);
  }
  return holds ? kExitOk : kExitViolation;
}

int run_generate(const ExperimentConfig& c, std::ostream& out) {
  const auto graph = graph_of(c);
  const auto spec = spec_of(c);
  CodecFile file;
  file.spec = spec;
  file.noise_scale = c.sigma;
  file.nuisance_dim = c.nuisance_dim;
  file.seed = c.seed;
  file.codecs = make_codec_set(
      graph.languages(), sample_randomized_codecs(spec, static_cast<int>(graph.size()), c.nuisance_dim, c.sigma,
                                                  derive_seed(c.seed, "codecs")));
  write_json_file(c.out / "codecs.json", to_json(file));
  write_json_file(c.out / "graph.json", to_json(graph));
  for (const auto& e : graph.edges()) {
    const auto corpus = randomized_generate(e.a, e.b, file.codecs, e.samples, file.latent(), c.seed);
    write_json_file(corpus_path(c.out / "corpora", e), to_json(corpus));
    out << "corpus " << e.a << "-" << e.b << " n=" << e.samples << " hash=" << hex64(corpus.meta.codec_hash) << "\n";
  }
  return kExitOk;
}

int run_train(const ExperimentConfig& c, std::ostream& out) {
  const auto graph = graph_of(c);
  graph.require_connected();
  std::vector<AlignedCorpus> corpora;
  for (const auto& e : graph.edges()) {
    const auto path = corpus_path(c.corpora, e);
    if (!std::filesystem::exists(path)) throw SchemaError("corpora: missing corpus file " + path.string());
    corpora.push_back(corpus_from_json(read_json_file(path)));
  }
  TrainConfig tc;
  tc.anchor = c.anchor;
  tc.sweeps = c.sweeps;
  tc.ridge = c.ridge;
  tc.project = c.project;
  tc.spec = spec_of(c);
  const TrainResult result = train(graph, corpora, tc);
  write_json_file(c.out / "encoders.json", to_json(result.estimate, tc.spec));
  write_csv(c.out / "edge_losses.csv", write_edge_loss_csv, result.fits);
  for (const auto& f : result.fits) {
    out << "edge " << f.source << "-" << f.target << " n=" << f.samples << " loss=" << num(f.empirical_loss) << "\n";
  }
  out << "objective=" << num(result.refine.objective.back()) << "\n";
  return kExitOk;
}

int run_eval(const ExperimentConfig& c, std::ostream& out) {
  const auto graph = graph_of(c);
  graph.require_connected();
  const CodecFile codecs = codecs_from_json(read_json_file(c.codecs));
  const EncoderEstimate estimate = encoders_from_json(read_json_file(c.encoders));
  for (const auto& l : graph.languages()) {
    if (!codecs.codecs.contains(l)) throw SchemaError("codecs: no codec for language " + l);
    if (!estimate.encoders.contains(l)) throw SchemaError("encoders: no encoder for language " + l);
  }
  ChainBoundConfig cfg;
  cfg.population = {c.eval_samples, c.seed, parse_loss_metric(c.metric)};
  cfg.mc_slack = c.mc_slack;
  const auto records = verify_chain_bound(estimate, graph, codecs.codecs, codecs.latent(), cfg);
  const auto sp = shortest_path_and_diameter(graph);
  write_csv(c.out / "pair_eval.csv", write_pair_eval_csv, records);
  const auto failing = std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.holds; });
  const double fail_fraction = records.empty() ? 0.0 : static_cast<double>(failing) / records.size();
  Json summary{{"mode", "eval"},
               {"seed", c.seed},
               {"metric", c.metric},
               {"samples", c.eval_samples},
               {"mc_slack", c.mc_slack},
               {"delta", c.delta},
               {"diam", sp.diameter},
               {"diameter_path", sp.diameter_path},
               {"records", records.size()},
               {"failing", failing},
               {"holds_fraction", 1.0 - fail_fraction},
               {"allowance", c.allowance}};
  write_json_file(c.out / "summary.json", summary);
  for (const auto& r : records) {
    out << "pair " << r.source << "-" << r.target << " path_len=" << r.path_length << " loss=" << num(r.measured_loss)
        << " bound=" << num(r.bound) << " holds=" << (r.holds ? "true" : "false") << "\n";
  }
  out << "diam=" << sp.diameter << " holds_fraction=" << num(1.0 - fail_fraction) << "\n";
  return fail_fraction > c.allowance ? kExitViolation : kExitOk;
}

int run_sweep(const ExperimentConfig& c, std::ostream& out) {
  const auto spec = spec_of(c);
  const auto codecs = sample_randomized_codecs(spec, 2, c.nuisance_dim, c.sigma, derive_seed(c.seed, "sweep-codecs"));
  SweepConfig sc;
  sc.n_list = c.n_list;
  sc.trials = c.trials;
  sc.population_samples = c.population_samples;
  sc.seed = c.seed;
  const auto result = sample_complexity_sweep(codecs[0], codecs[1], {spec.dim, spec.ball_radius}, sc);
  write_csv(c.out / "sweep.csv", write_sweep_csv, result);
  Json medians = Json::array();
  for (double m : result.median_gaps) medians.push_back(m);
  Json summary{{"mode", "sweep"},           {"seed", c.seed},    {"n_list", c.n_list}, {"trials", c.trials},
               {"median_gaps", medians},    {"degenerate", result.degenerate}};
  summary["slope"] = result.degenerate ? Json(nullptr) : Json(result.slope);
  write_json_file(c.out / "summary.json", summary);
  for (std::size_t i = 0; i < c.n_list.size(); ++i) {
    out << "n=" << c.n_list[i] << " median_gap=" << num(result.median_gaps[i]) << "\n";
  }
  out << "slope=" << (result.degenerate ? std::string("degenerate") : num(result.slope)) << "\n";
  return kExitOk;
}

}  // namespace

int run(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  try {
    switch (c.mode) {
      case Mode::kBound:
      case Mode::kBrute: {
        const InstanceFile file = instance_from_json(read_json_file(c.instance));
        return run_bounds(c, file, c.mode == Mode::kBrute || c.brute, out);
      }
      case Mode::kDemoWorstCase: {
        InstanceFile file;
        file.two_to_one = make_worst_case(c.delta);
        file.many = as_many_to_many(*file.two_to_one);
        if (!c.out.empty()) write_json_file(c.out / "instance.json", to_json(*file.two_to_one));
        return run_bounds(c, file, true, out);
      }
      case Mode::kGenerate: return run_generate(c, out);
      case Mode::kTrain: return run_train(c, out);
      case Mode::kEval: return run_eval(c, out);
      case Mode::kSweep: return run_sweep(c, out);
    }
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << "\n";
    return kExitViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::optional<ExperimentConfig> config;
  try {
    config = parse_and_validate(args, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  if (!config) return kExitOk;
  return run(*config, out, err);
}

}  // namespace umt::cli
