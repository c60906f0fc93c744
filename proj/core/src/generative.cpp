#include "umt/generative.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <set>
#include <string>

#include "umt/errors.hpp"
#include "umt/impossibility.hpp"
#include "umt/instances.hpp"

namespace umt {

void FunctionClassSpec::validate() const {
  if (dim < 1) throw ArgumentError("function class: dim must be >= 1");
  if (!(ball_radius > 0.0) || !std::isfinite(ball_radius)) throw ArgumentError("function class: ball_radius must be > 0");
  if (!(rho >= 1.0) || !std::isfinite(rho)) throw ArgumentError("function class: rho must be >= 1");
  if (!(offset_bound >= 0.0) || !std::isfinite(offset_bound)) {
    throw ArgumentError("function class: offset_bound must be >= 0");
  }
}

Vector uniform_in_ball(Rng& rng, int dim, double radius) {
  Vector v(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v(i) = rng.normal();
    norm = v.norm();
  } while (norm == 0.0);
  const double r = radius * std::pow(rng.uniform(), 1.0 / dim);
  return v * (r / norm);
}

LatentSampler::LatentSampler(LatentDistribution dist, std::uint64_t seed) : dist_(dist), seed_(seed), rng_(seed) {
  if (dist_.dim < 1) throw ArgumentError("latent: dim must be >= 1");
  if (!(dist_.radius >= 0.0) || !std::isfinite(dist_.radius)) throw ArgumentError("latent: radius must be >= 0");
}

Vector LatentSampler::draw() { return uniform_in_ball(rng_, dist_.dim, dist_.radius); }

Matrix sample_latent(LatentSampler& sampler, int m) {
  if (m < 0) throw ArgumentError("sample_latent: m must be >= 0");
  Matrix out(sampler.distribution().dim, m);
  for (int j = 0; j < m; ++j) out.col(j) = sampler.draw();
  return out;
}

AffineCodec::AffineCodec(Matrix w, Vector b) : decoder_(std::move(w), std::move(b)), encoder_(decoder_.inverse()) {}

RandomizedCodec::RandomizedCodec(Matrix w, Vector b, int latent_dim, double noise_scale)
    : RandomizedCodec(w, b, latent_dim, noise_scale, AffineMap(w, b).inverse().linear()) {}

RandomizedCodec::RandomizedCodec(Matrix w, Vector b, int latent_dim, double noise_scale, Matrix encoder_linear)
    : w_(std::move(w)), b_(std::move(b)), w_inv_(std::move(encoder_linear)), latent_dim_(latent_dim),
      noise_scale_(noise_scale) {
  if (w_.rows() != w_.cols() || w_.rows() != b_.size()) throw ArgumentError("randomized codec: W must be square");
  if (w_inv_.rows() != w_.rows() || w_inv_.cols() != w_.cols()) {
    throw ArgumentError("randomized codec: encoder matrix has the wrong shape");
  }
  if (latent_dim_ < 1 || latent_dim_ > w_.rows()) throw ArgumentError("randomized codec: bad latent dim");
  if (!(noise_scale_ >= 0.0) || !std::isfinite(noise_scale_)) {
    throw ArgumentError("randomized codec: noise scale must be >= 0");
  }
}

RandomizedCodec RandomizedCodec::from_deterministic(const AffineCodec& codec) {
  return {codec.decoder().linear(), codec.decoder().offset(), codec.dim(), 0.0, codec.encoder().linear()};
}

Vector RandomizedCodec::decode(const Vector& z, const Vector& seed) const {
  if (z.size() != latent_dim_ || seed.size() != nuisance_dim()) throw ArgumentError("randomized decode: bad shape");
  Vector full(sentence_dim());
  full.head(latent_dim_) = z;
  full.tail(nuisance_dim()) = noise_scale_ * seed;
  return w_ * full + b_;
}

Vector RandomizedCodec::decode_mean(const Vector& z) const { return decode(z, Vector::Zero(nuisance_dim())); }

Vector RandomizedCodec::encode(const Vector& x) const {
  if (x.size() != sentence_dim()) throw ArgumentError("randomized encode: bad shape");
  return (w_inv_ * (x - b_)).head(latent_dim_);
}

Vector RandomizedCodec::draw_seed(Rng& rng) const {
  Vector r(nuisance_dim());
  for (int i = 0; i < r.size(); ++i) r(i) = rng.truncated_normal(kSeedTruncation);
  return r;
}

Matrix clip_singular_values(const Matrix& m, double lo, double hi) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vector s = svd.singularValues().cwiseMax(lo).cwiseMin(hi);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

namespace {

std::pair<Matrix, Vector> sample_affine(const FunctionClassSpec& spec, int n, Rng& rng) {
  Matrix g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) g(i, j) = rng.normal();
  }
  Matrix w = clip_singular_values(g, 1.0 / spec.rho, spec.rho);
  Vector b = spec.offset_bound > 0.0 ? uniform_in_ball(rng, n, spec.offset_bound) : Vector::Zero(n);
  return {std::move(w), std::move(b)};
}

}  // namespace

std::vector<AffineCodec> sample_ground_truth_codecs(const FunctionClassSpec& spec, int k, std::uint64_t seed) {
  spec.validate();
  if (k < 1) throw ArgumentError("sample_ground_truth_codecs: k must be >= 1");
  std::vector<AffineCodec> out;
  for (int i = 0; i < k; ++i) {
    Rng rng(derive_seed(seed, "codec", static_cast<std::uint64_t>(i)));
    auto [w, b] = sample_affine(spec, spec.dim, rng);
    out.emplace_back(std::move(w), std::move(b));
  }
  return out;
}

std::vector<RandomizedCodec> sample_randomized_codecs(const FunctionClassSpec& spec, int k, int nuisance_dim,
                                                      double noise_scale, std::uint64_t seed) {
  spec.validate();
  if (k < 1) throw ArgumentError("sample_randomized_codecs: k must be >= 1");
  if (nuisance_dim < 0) throw ArgumentError("sample_randomized_codecs: nuisance dim must be >= 0");
  std::vector<RandomizedCodec> out;
  for (int i = 0; i < k; ++i) {
    Rng rng(derive_seed(seed, "codec", static_cast<std::uint64_t>(i)));
    auto [w, b] = sample_affine(spec, spec.dim + nuisance_dim, rng);
    out.emplace_back(std::move(w), std::move(b), spec.dim, noise_scale);
  }
  return out;
}

std::uint64_t codec_hash(const RandomizedCodec& a, const RandomizedCodec& b) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto* c : {&a, &b}) {
    const std::int64_t dims[2] = {c->latent_dim(), c->sentence_dim()};
    mix(dims, sizeof dims);
    mix(c->w().data(), sizeof(double) * static_cast<std::size_t>(c->w().size()));
    mix(c->b().data(), sizeof(double) * static_cast<std::size_t>(c->b().size()));
    const double s = c->noise_scale();
    mix(&s, sizeof s);
  }
  return h;
}

namespace {

template <class Map>
const typename Map::mapped_type& codec_for(const Map& codecs, const LanguageId& l) {
  auto it = codecs.find(l);
  if (it == codecs.end()) throw ArgumentError("no codec for language " + l);
  return it->second;
}

}  // namespace

AlignedCorpus generate_corpus(const LanguageId& source, const LanguageId& target, const CodecSet& codecs, int n,
                              const LatentDistribution& latent, std::uint64_t seed) {
  if (n < 0) throw ArgumentError("generate_corpus: n must be >= 0");
  const auto& cs = codec_for(codecs, source);
  const auto& ct = codec_for(codecs, target);
  if (cs.dim() != latent.dim || ct.dim() != latent.dim) throw ArgumentError("generate_corpus: dimension mismatch");
  LatentSampler sampler(latent, derive_seed(seed, "latent", source, target));
  const Matrix z = sample_latent(sampler, n);
  AlignedCorpus out{source, target, cs.decoder().apply_columns(z), ct.decoder().apply_columns(z), {}};
  out.meta.seed = seed;
  out.meta.codec_hash =
      codec_hash(RandomizedCodec::from_deterministic(cs), RandomizedCodec::from_deterministic(ct));
  return out;
}

AlignedCorpus randomized_generate(const LanguageId& source, const LanguageId& target,
                                  const RandomizedCodecSet& codecs, int n, const LatentDistribution& latent,
                                  std::uint64_t seed) {
  if (n < 0) throw ArgumentError("randomized_generate: n must be >= 0");
  const auto& cs = codec_for(codecs, source);
  const auto& ct = codec_for(codecs, target);
  if (cs.latent_dim() != latent.dim || ct.latent_dim() != latent.dim || cs.sentence_dim() != ct.sentence_dim()) {
    throw ArgumentError("randomized_generate: dimension mismatch");
  }
  LatentSampler sampler(latent, derive_seed(seed, "latent", source, target));
  Rng noise(derive_seed(seed, "noise", source, target));
  AlignedCorpus out{source, target, Matrix(cs.sentence_dim(), n), Matrix(ct.sentence_dim(), n), {}};
  for (int j = 0; j < n; ++j) {
    const Vector z = sampler.draw();
    const Vector rs = cs.draw_seed(noise);
    const Vector rt = ct.draw_seed(noise);
    out.x.col(j) = cs.decode(z, rs);
    out.x_prime.col(j) = ct.decode(z, rt);
  }
  out.meta = {seed, cs.noise_scale(), cs.nuisance_dim(), codec_hash(cs, ct)};
  return out;
}

double MomentGap::statistic() const {
  auto ratio = [](double gap, double se) {
    if (se > 0.0) return gap / se;
    return gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  return std::max(ratio(mean_gap, mean_se), ratio(cov_gap, cov_se));
}

namespace {

struct Moments {
  Vector mean;
  Matrix cov;
  double mean_var_sum = 0.0;  // sum_j Var(x_j) / m
  double cov_var_sum = 0.0;   // sum_{jl} Var(c_j c_l) / m
};

Moments moments(const Matrix& x) {
  const auto m = x.cols();
  if (m < 2) throw ArgumentError("moment_gap: need at least two samples");
  Moments out;
  out.mean = x.rowwise().mean();
  const Matrix c = x.colwise() - out.mean;
  out.cov = c * c.transpose() / static_cast<double>(m);
  out.mean_var_sum = out.cov.trace() / static_cast<double>(m);
  const auto d = x.rows();
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index l = 0; l < d; ++l) {
      const Eigen::ArrayXd prod = c.row(j).array() * c.row(l).array();
      const double v = (prod - out.cov(j, l)).square().mean();
      out.cov_var_sum += v / static_cast<double>(m);
    }
  }
  return out;
}

}  // namespace

MomentGap moment_gap(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw ArgumentError("moment_gap: dimension mismatch");
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  MomentGap g;
  g.mean_gap = (ma.mean - mb.mean).norm();
  g.mean_se = std::sqrt(ma.mean_var_sum + mb.mean_var_sum);
  g.cov_gap = (ma.cov - mb.cov).norm();
  g.cov_se = std::sqrt(ma.cov_var_sum + mb.cov_var_sum);
  return g;
}

InvarianceResult invariance_test(const RandomizedCodec& codec, const LatentDistribution& latent, int m,
                                 std::uint64_t seed, InvarianceReference reference) {
  if (m < 2) throw ArgumentError("invariance_test: m must be >= 2");
  if (codec.latent_dim() != latent.dim) throw ArgumentError("invariance_test: dimension mismatch");
  LatentSampler sampler(latent, derive_seed(seed, "invariance-latent"));
  Rng noise(derive_seed(seed, "invariance-noise"));
  const Matrix z = sample_latent(sampler, m);
  Matrix round_trip(latent.dim, m);
  for (int j = 0; j < m; ++j) round_trip.col(j) = codec.encode(codec.decode(z.col(j), codec.draw_seed(noise)));
  Matrix ref = z;
  if (reference == InvarianceReference::kIndependent) {
    LatentSampler fresh(latent, derive_seed(seed, "invariance-reference"));
    ref = sample_latent(fresh, m);
  }
  InvarianceResult out;
  out.gap = moment_gap(round_trip, ref);
  out.holds = out.gap.statistic() <= 3.0;
  return out;
}

namespace {

// Cell index of each column: bit j set iff coordinate j exceeds the pooled mean.
std::vector<std::uint64_t> sign_cells(const Matrix& x, const Vector& centre) {
  std::vector<std::uint64_t> cells(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    std::uint64_t code = 0;
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
      if (x(j, c) > centre(j)) code |= std::uint64_t{1} << j;
    }
    cells[static_cast<std::size_t>(c)] = code;
  }
  return cells;
}

SentenceDistribution histogram(const std::vector<std::uint64_t>& cells, const std::vector<std::uint64_t>& all,
                               const LanguageId& lang) {
  std::vector<Sentence> support;
  std::vector<double> weights;
  for (auto c : all) {
    support.push_back(plain_sentence(lang, std::to_string(c)));
    weights.push_back(static_cast<double>(std::count(cells.begin(), cells.end(), c)) /
                      static_cast<double>(cells.size()));
  }
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return {std::move(support), std::move(weights)};
}

}  // namespace

PropositionCheck proposition_zero_check(const CodecSet& codecs, const std::vector<LanguageId>& sources,
                                        const LanguageId& target, const LatentDistribution& latent, int m,
                                        std::uint64_t seed, const PropositionCheckOptions& options) {
  if (sources.size() < 2) throw ArgumentError("proposition check: need at least two sources");
  if (m < 2) throw ArgumentError("proposition check: m must be >= 2");
  if (latent.dim > 63) throw ArgumentError("proposition check: dim too large for sign cells");
  const auto& ct = codec_for(codecs, target);
  std::vector<Matrix> outputs;
  for (const auto& src : sources) {
    const auto& cs = codec_for(codecs, src);
    const auto over = options.target_decoder_override.find(src);
    const AffineMap& dec = over != options.target_decoder_override.end() ? over->second.decoder() : ct.decoder();
    const std::uint64_t stream =
        options.shared_latents ? derive_seed(seed, "proposition") : derive_seed(seed, "proposition", src);
    LatentSampler sampler(latent, stream);
    const Matrix x = cs.decoder().apply_columns(sample_latent(sampler, m));
    outputs.push_back(dec.apply_columns(cs.encoder().apply_columns(x)));
  }

  PropositionCheck out;
  Matrix pooled(latent.dim, m * static_cast<Eigen::Index>(outputs.size()));
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    pooled.middleCols(static_cast<Eigen::Index>(i) * m, m) = outputs[i];
  }
  const Vector centre = pooled.rowwise().mean();
  std::vector<std::vector<std::uint64_t>> cells;
  for (const auto& o : outputs) cells.push_back(sign_cells(o, centre));
  std::set<std::uint64_t> cell_set;
  for (const auto& c : cells) cell_set.insert(c.begin(), c.end());
  const std::vector<std::uint64_t> all(cell_set.begin(), cell_set.end());

  for (std::size_t i = 0; i < outputs.size(); ++i) {
    for (std::size_t j = i + 1; j < outputs.size(); ++j) {
      out.max_stat = std::max(out.max_stat, moment_gap(outputs[i], outputs[j]).statistic());

      const LanguageId li = "S" + std::to_string(i), lj = "S" + std::to_string(j), lt = "T";
      std::vector<Sentence> targets;
      std::map<Sentence, Sentence> ti, tj;
      double tol = 0.0;
      for (auto c : all) {
        const auto name = std::to_string(c);
        targets.push_back(plain_sentence(lt, name));
        ti.emplace(plain_sentence(li, name), plain_sentence(lt, name));
        tj.emplace(plain_sentence(lj, name), plain_sentence(lt, name));
        const double p = static_cast<double>(std::count(cells[i].begin(), cells[i].end(), c) +
                                             std::count(cells[j].begin(), cells[j].end(), c)) /
                         (2.0 * m);
        tol += 0.5 * std::sqrt(2.0 * p * (1.0 - p) / m);
      }
      TwoToOneInstance inst{"proposition", li, lj, lt, histogram(cells[i], all, li), histogram(cells[j], all, lj),
                            SentenceTranslator(ti), SentenceTranslator(tj), targets};
      const double bound = two_to_one_bound(inst, 0.0);
      if (bound >= out.quantized_bound) {
        out.quantized_bound = bound;
        out.quantized_tolerance = 2.0 * tol;
      }
    }
  }
  out.holds = out.max_stat <= 3.0;
  out.bound_within_tolerance = out.quantized_bound <= out.quantized_tolerance;
  return out;
}

}  // namespace umt
