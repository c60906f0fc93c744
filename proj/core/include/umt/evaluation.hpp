#pragma once

// Population losses of zero-shot translators, the chained path bound over a
// translation graph, graph metrics, sample-size formulas and the
// generalization-gap sweep.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "umt/generative.hpp"
#include "umt/graph.hpp"
#include "umt/trainer.hpp"

namespace umt {

// What an estimated translator is compared against on a sample x = D_src(z, r).
enum class LossMetric {
  kTotal,   // a fresh randomized target D_dst(z, r'); the loss includes the noise floor
  kExcess,  // the seed-averaged target D_dst(z, 0)
};

std::string to_string(LossMetric m);
LossMetric parse_loss_metric(const std::string& s);  // "total" | "excess"

struct PopulationLoss {
  double value = 0.0;
  double std_error = 0.0;
};

struct PopulationConfig {
  int samples = 10000;  // at least 1000
  std::uint64_t seed = 0;
  LossMetric metric = LossMetric::kExcess;
};

// Monte-Carlo E||T(x) - target||^2 over m fresh latents. The sample stream
// depends only on (seed, src, dst).
PopulationLoss population_loss_of_map(const AffineMap& translator, const LanguageId& src, const LanguageId& dst,
                                      const RandomizedCodecSet& codecs, const LatentDistribution& latent,
                                      const PopulationConfig& config);

PopulationLoss population_loss(const EncoderEstimate& estimate, const LanguageId& src, const LanguageId& dst,
                               const RandomizedCodecSet& codecs, const LatentDistribution& latent,
                               const PopulationConfig& config);
PopulationLoss population_loss(const EncoderEstimate& estimate, const LanguageId& src, const LanguageId& dst,
                               const CodecSet& codecs, const LatentDistribution& latent,
                               const PopulationConfig& config);

// Closed form of the population loss of an affine translator, using the
// latent covariance B^2/(d+2) I and the truncated-normal seed variance.
double exact_population_loss(const AffineMap& translator, const RandomizedCodec& src, const RandomizedCodec& dst,
                             const LatentDistribution& latent, LossMetric metric);

// Variance of a standard normal truncated to [-bound, bound].
double truncated_normal_variance(double bound);

RandomizedCodecSet as_randomized(const CodecSet& codecs);

// E_dst^{-1} o E_src.
AffineMap compose_zero_shot(const EncoderEstimate& estimate, const LanguageId& src, const LanguageId& dst);

struct ShortestPaths {
  // Keyed by (source index, target index) over all ordered pairs; each path is
  // the lexicographically smallest node sequence among shortest ones.
  std::map<std::pair<int, int>, std::vector<LanguageId>> paths;
  int diameter = 0;
  std::vector<LanguageId> diameter_path;  // first pair (ascending) attaining it

  const std::vector<LanguageId>& path(const TranslationGraph& g, const LanguageId& a, const LanguageId& b) const;
};

// Throws GraphError if the graph is disconnected.
ShortestPaths shortest_path_and_diameter(const TranslationGraph& graph);

// Losses of directed hops (from, to).
using EdgeLossMap = std::map<std::pair<LanguageId, LanguageId>, double>;

// 2 rho^2 * sum of the losses of consecutive path hops.
double path_bound(const EdgeLossMap& edge_losses, double rho_hat, const std::vector<LanguageId>& path);

struct PairEvalRecord {
  LanguageId source;
  LanguageId target;
  std::vector<LanguageId> path;
  int path_length = 0;  // number of hops
  double measured_loss = 0.0;
  double mc_stderr = 0.0;
  std::vector<double> edge_losses;
  double rho_hat = 0.0;
  double bound = 0.0;
  bool holds = false;
};

struct ChainBoundConfig {
  PopulationConfig population;
  double mc_slack = 0.05;
  // Absolute allowance for floating-point noise when both sides are ~0.
  double absolute_tolerance = 1e-10;
};

// Lipschitz constant used for a path: rho_hat^2 is the largest operator norm
// of E_dst^{-1} o E_v over path nodes v after the source (gauge-invariant).
double path_rho_hat(const EncoderEstimate& estimate, const std::vector<LanguageId>& path);

// One record per unordered pair, evaluated from the smaller to the larger
// language along its shortest path.
std::vector<PairEvalRecord> verify_chain_bound(const EncoderEstimate& estimate, const TranslationGraph& graph,
                                               const RandomizedCodecSet& codecs, const LatentDistribution& latent,
                                               const ChainBoundConfig& config);

// ceil(16 M^4 / eps^2 * (p ln(16 M / eps) + ln(K^2 / delta))).
std::uint64_t required_sample_size(double eps, double delta, int k, int p, double m);
double required_sample_size_real(double eps, double delta, int k, int p, double m);

// min(1, 2 exp(logN - n eps^2 / (16 M^4))).
double concentration_bound(double n, double eps, double m, double log_n);

struct SweepRow {
  int n = 0;
  int trial = 0;
  double empirical_loss = 0.0;
  double population_loss = 0.0;
  double gap = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<double> median_gaps;  // per n, in n_list order
  double slope = 0.0;               // NaN when degenerate
  bool degenerate = false;          // every gap <= 1e-10
};

struct SweepConfig {
  std::vector<int> n_list;
  int trials = 20;
  int population_samples = 200000;
  std::uint64_t seed = 0;
};

// For each (n, trial): fresh corpus, fit_edge, empirical vs. population loss
// (noise-inclusive), gap = |difference|. Slope of log median gap on log n.
SweepResult sample_complexity_sweep(const RandomizedCodec& source, const RandomizedCodec& target,
                                    const LatentDistribution& latent, const SweepConfig& config);

// Least-squares slope of y on x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

// Spearman rank correlation with average ranks for ties.
double spearman_correlation(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> v);

}  // namespace umt
