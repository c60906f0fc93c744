#include "umt/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <numeric>

#include "umt/errors.hpp"

namespace umt {

std::string to_string(LossMetric m) { return m == LossMetric::kTotal ? "total" : "excess"; }

LossMetric parse_loss_metric(const std::string& s) {
  if (s == "total") return LossMetric::kTotal;
  if (s == "excess") return LossMetric::kExcess;
  throw ArgumentError("unknown loss metric '" + s + "' (expected total or excess)");
}

namespace {

const RandomizedCodec& codec_of(const RandomizedCodecSet& codecs, const LanguageId& l) {
  auto it = codecs.find(l);
  if (it == codecs.end()) throw ArgumentError("no codec for language " + l);
  return it->second;
}

}  // namespace

RandomizedCodecSet as_randomized(const CodecSet& codecs) {
  RandomizedCodecSet out;
  for (const auto& [l, c] : codecs) out.emplace(l, RandomizedCodec::from_deterministic(c));
  return out;
}

PopulationLoss population_loss_of_map(const AffineMap& translator, const LanguageId& src, const LanguageId& dst,
                                      const RandomizedCodecSet& codecs, const LatentDistribution& latent,
                                      const PopulationConfig& config) {
  if (config.samples < 1000) throw ArgumentError("population_loss: samples must be >= 1000");
  const auto& cs = codec_of(codecs, src);
  const auto& cd = codec_of(codecs, dst);
  if (translator.dim() != cs.sentence_dim() || cd.sentence_dim() != cs.sentence_dim()) {
    throw ArgumentError("population_loss: dimension mismatch");
  }
  LatentSampler sampler(latent, derive_seed(config.seed, "population", src, dst));
  Rng noise(derive_seed(config.seed, "population-noise", src, dst));
  const int m = config.samples;
  constexpr int kBlock = 4096;
  const Matrix lin = translator.linear() * cs.w();
  const Vector off = translator.linear() * cs.b() + translator.offset() - cd.b();
  double sum = 0.0, sum_sq = 0.0;
  for (int start = 0; start < m; start += kBlock) {
    const int cols = std::min(kBlock, m - start);
    Matrix zs(cs.sentence_dim(), cols);  // [z; sigma r] for the source
    Matrix zd = Matrix::Zero(cd.sentence_dim(), cols);
    zs.topRows(latent.dim) = sample_latent(sampler, cols);
    zd.topRows(latent.dim) = zs.topRows(latent.dim);
    for (int j = 0; j < cols; ++j) {
      zs.col(j).tail(cs.nuisance_dim()) = cs.noise_scale() * cs.draw_seed(noise);
      const Vector r = cd.draw_seed(noise);
      if (config.metric == LossMetric::kTotal) zd.col(j).tail(cd.nuisance_dim()) = cd.noise_scale() * r;
    }
    // T(W_s u + b_s) - (W_d v + b_d)
    const Matrix diff = ((lin * zs - cd.w() * zd).colwise() + off);
    const Eigen::ArrayXd e = diff.colwise().squaredNorm().transpose().array();
    sum += e.sum();
    sum_sq += e.square().sum();
  }
  PopulationLoss out;
  out.value = sum / m;
  const double var = std::max(0.0, sum_sq / m - out.value * out.value);
  out.std_error = std::sqrt(var / m);
  return out;
}

PopulationLoss population_loss(const EncoderEstimate& estimate, const LanguageId& src, const LanguageId& dst,
                               const RandomizedCodecSet& codecs, const LatentDistribution& latent,
                               const PopulationConfig& config) {
  return population_loss_of_map(compose_zero_shot(estimate, src, dst), src, dst, codecs, latent, config);
}

PopulationLoss population_loss(const EncoderEstimate& estimate, const LanguageId& src, const LanguageId& dst,
                               const CodecSet& codecs, const LatentDistribution& latent,
                               const PopulationConfig& config) {
  return population_loss(estimate, src, dst, as_randomized(codecs), latent, config);
}

double truncated_normal_variance(double bound) {
  const double phi = std::exp(-0.5 * bound * bound) / std::sqrt(2.0 * std::numbers::pi);
  const double mass = std::erf(bound / std::sqrt(2.0));
  return 1.0 - 2.0 * bound * phi / mass;
}

double exact_population_loss(const AffineMap& translator, const RandomizedCodec& src, const RandomizedCodec& dst,
                             const LatentDistribution& latent, LossMetric metric) {
  const int d = src.latent_dim();
  const int ks = src.nuisance_dim(), kd = dst.nuisance_dim();
  const Matrix aw = translator.linear() * src.w();
  const Vector mean = translator.linear() * src.b() + translator.offset() - dst.b();
  const double latent_var = latent.radius * latent.radius / (d + 2.0);
  const double seed_var = truncated_normal_variance(kSeedTruncation);
  double loss = mean.squaredNorm();
  loss += latent_var * (aw.leftCols(d) - dst.w().leftCols(d)).squaredNorm();
  loss += src.noise_scale() * src.noise_scale() * seed_var * aw.rightCols(ks).squaredNorm();
  if (metric == LossMetric::kTotal) {
    loss += dst.noise_scale() * dst.noise_scale() * seed_var * dst.w().rightCols(kd).squaredNorm();
  }
  return loss;
}

AffineMap compose_zero_shot(const EncoderEstimate& estimate, const LanguageId& src, const LanguageId& dst) {
  return compose(estimate.encoder(dst).inverse(), estimate.encoder(src));
}

const std::vector<LanguageId>& ShortestPaths::path(const TranslationGraph& g, const LanguageId& a,
                                                   const LanguageId& b) const {
  auto it = paths.find({g.index_of(a), g.index_of(b)});
  if (it == paths.end()) throw ArgumentError("no path recorded for " + a + "-" + b);
  return it->second;
}

namespace {

std::vector<int> bfs_distances(const TranslationGraph& g, int root) {
  std::vector<int> dist(g.size(), -1);
  std::deque<int> queue{root};
  dist[static_cast<std::size_t>(root)] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : g.neighbors(u)) {
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

}  // namespace

ShortestPaths shortest_path_and_diameter(const TranslationGraph& graph) {
  graph.require_connected();
  const int k = static_cast<int>(graph.size());
  std::vector<std::vector<int>> dist;
  for (int i = 0; i < k; ++i) dist.push_back(bfs_distances(graph, i));
  ShortestPaths out;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      // Greedy smallest neighbour that stays on a shortest path to b.
      std::vector<LanguageId> path{graph.languages()[static_cast<std::size_t>(a)]};
      int u = a;
      while (u != b) {
        const int remaining = dist[static_cast<std::size_t>(b)][static_cast<std::size_t>(u)];
        for (int v : graph.neighbors(u)) {
          if (dist[static_cast<std::size_t>(b)][static_cast<std::size_t>(v)] == remaining - 1) {
            u = v;
            break;
          }
        }
        path.push_back(graph.languages()[static_cast<std::size_t>(u)]);
      }
      const int len = static_cast<int>(path.size()) - 1;
      if (a < b && len > out.diameter) {
        out.diameter = len;
        out.diameter_path = path;
      }
      out.paths.emplace(std::make_pair(a, b), std::move(path));
    }
  }
  if (out.diameter_path.empty()) out.diameter_path = {graph.languages().front()};
  return out;
}

double path_bound(const EdgeLossMap& edge_losses, double rho_hat, const std::vector<LanguageId>& path) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    auto it = edge_losses.find({path[i], path[i + 1]});
    if (it == edge_losses.end()) throw ArgumentError("path_bound: no edge loss for " + path[i] + "->" + path[i + 1]);
    sum += it->second;
  }
  return 2.0 * rho_hat * rho_hat * sum;
}

double path_rho_hat(const EncoderEstimate& estimate, const std::vector<LanguageId>& path) {
  if (path.empty()) throw ArgumentError("path_rho_hat: empty path");
  const AffineMap dec = estimate.encoder(path.back()).inverse();
  double worst = 1.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    worst = std::max(worst, compose(dec, estimate.encoder(path[i])).operator_norm());
  }
  return std::sqrt(worst);
}

std::vector<PairEvalRecord> verify_chain_bound(const EncoderEstimate& estimate, const TranslationGraph& graph,
                                               const RandomizedCodecSet& codecs, const LatentDistribution& latent,
                                               const ChainBoundConfig& config) {
  if (!(config.mc_slack >= 0.0)) throw ArgumentError("verify_chain_bound: mc_slack must be >= 0");
  const ShortestPaths sp = shortest_path_and_diameter(graph);
  const auto& langs = graph.languages();

  std::map<std::pair<LanguageId, LanguageId>, PopulationLoss> cache;
  auto loss = [&](const LanguageId& a, const LanguageId& b) {
    auto it = cache.find({a, b});
    if (it == cache.end()) {
      it = cache.emplace(std::make_pair(a, b), population_loss(estimate, a, b, codecs, latent, config.population))
               .first;
    }
    return it->second;
  };

  std::vector<PairEvalRecord> out;
  for (std::size_t i = 0; i < langs.size(); ++i) {
    for (std::size_t j = i + 1; j < langs.size(); ++j) {
      PairEvalRecord rec;
      rec.source = langs[i];
      rec.target = langs[j];
      rec.path = sp.path(graph, rec.source, rec.target);
      rec.path_length = static_cast<int>(rec.path.size()) - 1;
      const PopulationLoss measured = loss(rec.source, rec.target);
      rec.measured_loss = measured.value;
      rec.mc_stderr = measured.std_error;
      EdgeLossMap hops;
      for (std::size_t h = 0; h + 1 < rec.path.size(); ++h) {
        const double e = loss(rec.path[h], rec.path[h + 1]).value;
        rec.edge_losses.push_back(e);
        hops[{rec.path[h], rec.path[h + 1]}] = e;
      }
      rec.rho_hat = path_rho_hat(estimate, rec.path);
      rec.bound = path_bound(hops, rec.rho_hat, rec.path);
      rec.holds = rec.measured_loss <= rec.bound * (1.0 + config.mc_slack) + config.absolute_tolerance;
      out.push_back(std::move(rec));
    }
  }
  return out;
}

namespace {

void check_sample_size_args(double eps, double delta, int k, int p, double m) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ArgumentError("required_sample_size: eps must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("required_sample_size: delta must be in (0, 1)");
  if (k < 2) throw ArgumentError("required_sample_size: K must be >= 2");
  if (p < 1) throw ArgumentError("required_sample_size: p must be >= 1");
  if (!(m > 0.0) || !std::isfinite(m)) throw ArgumentError("required_sample_size: M must be > 0");
}

}  // namespace

double required_sample_size_real(double eps, double delta, int k, int p, double m) {
  check_sample_size_args(eps, delta, k, p, m);
  const double c = 16.0 * std::pow(m, 4) / (eps * eps);
  return c * (p * std::log(16.0 * m / eps) + std::log(static_cast<double>(k) * k / delta));
}

std::uint64_t required_sample_size(double eps, double delta, int k, int p, double m) {
  const double n = std::ceil(required_sample_size_real(eps, delta, k, p, m));
  if (!(n < 1.8e19)) throw ArgumentError("required_sample_size: result overflows 64 bits");
  return n < 1.0 ? 1 : static_cast<std::uint64_t>(n);
}

double concentration_bound(double n, double eps, double m, double log_n) {
  if (!(n >= 0.0)) throw ArgumentError("concentration_bound: n must be >= 0");
  if (!(eps > 0.0)) throw ArgumentError("concentration_bound: eps must be > 0");
  const double exponent = log_n - n * eps * eps / (16.0 * std::pow(m, 4));
  return std::min(1.0, 2.0 * std::exp(exponent));
}

double median(std::vector<double> v) {
  if (v.empty()) throw ArgumentError("median of empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("least_squares_slope: need >= 2 paired values");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ArgumentError("least_squares_slope: x values are all equal");
  return sxy / sxx;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double spearman_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("spearman_correlation: need >= 2 paired values");
  return pearson(average_ranks(x), average_ranks(y));
}

SweepResult sample_complexity_sweep(const RandomizedCodec& source, const RandomizedCodec& target,
                                    const LatentDistribution& latent, const SweepConfig& config) {
  if (config.n_list.size() < 2) throw ArgumentError("sweep: n_list needs at least two values");
  if (!std::is_sorted(config.n_list.begin(), config.n_list.end()) ||
      std::adjacent_find(config.n_list.begin(), config.n_list.end()) != config.n_list.end()) {
    throw ArgumentError("sweep: n_list must be strictly ascending");
  }
  if (config.trials < 1) throw ArgumentError("sweep: trials must be >= 1");
  const RandomizedCodecSet codecs{{"S", source}, {"T", target}};
  SweepResult out;
  for (int n : config.n_list) {
    std::vector<double> gaps;
    for (int t = 0; t < config.trials; ++t) {
      const std::uint64_t trial_seed =
          derive_seed(config.seed, "sweep", static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(t));
      const AlignedCorpus corpus = randomized_generate("S", "T", codecs, n, latent, trial_seed);
      const EdgeRegressionResult fit = fit_edge(corpus);
      const PopulationLoss pop =
          population_loss_of_map(fit.map, "S", "T", codecs, latent,
                                 {config.population_samples, trial_seed, LossMetric::kTotal});
      SweepRow row{n, t, fit.empirical_loss, pop.value, std::abs(pop.value - fit.empirical_loss)};
      gaps.push_back(row.gap);
      out.rows.push_back(row);
    }
    out.median_gaps.push_back(median(gaps));
  }
  out.degenerate = std::all_of(out.rows.begin(), out.rows.end(), [](const SweepRow& r) { return r.gap <= 1e-10; });
  if (out.degenerate) {
    out.slope = std::numeric_limits<double>::quiet_NaN();
  } else {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < config.n_list.size(); ++i) {
      lx.push_back(std::log(static_cast<double>(config.n_list[i])));
      ly.push_back(std::log(std::max(out.median_gaps[i], std::numeric_limits<double>::min())));
    }
    out.slope = least_squares_slope(lx, ly);
  }
  return out;
}

}  // namespace umt
