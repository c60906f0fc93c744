#pragma once

// Encoder-decoder generative process: a latent distribution on a ball,
// bounded invertible affine ground-truth codecs per language, aligned-corpus
// generation, and the randomized (nuisance-coordinate) codec extension.

#include <cstdint>
#include <map>
#include <vector>

#include "umt/affine.hpp"
#include "umt/discrete.hpp"
#include "umt/rng.hpp"

namespace umt {

// Invertible affine maps whose linear part has singular values in
// [1/rho, rho] and whose offset has norm at most offset_bound.
struct FunctionClassSpec {
  int dim = 4;
  double ball_radius = 1.0;
  double rho = 2.0;
  double offset_bound = 1.0;

  // Sup-norm of any decoded sentence over the latent ball.
  double sup_bound() const { return rho * ball_radius + offset_bound; }
  void validate() const;
};

// Uniform distribution on the radius-`radius` ball of R^dim.
struct LatentDistribution {
  int dim = 4;
  double radius = 1.0;
};

class LatentSampler {
 public:
  LatentSampler(LatentDistribution dist, std::uint64_t seed);

  Vector draw();
  const LatentDistribution& distribution() const { return dist_; }
  std::uint64_t seed() const { return seed_; }

 private:
  LatentDistribution dist_;
  std::uint64_t seed_;
  Rng rng_;
};

// m draws as the columns of a dim x m matrix.
Matrix sample_latent(LatentSampler& sampler, int m);

// Uniform point of the radius-r ball in R^dim.
Vector uniform_in_ball(Rng& rng, int dim, double radius);

// Deterministic codec: decode(z) = W z + b, encode = decode^{-1}.
class AffineCodec {
 public:
  AffineCodec(Matrix w, Vector b);

  int dim() const { return static_cast<int>(decoder_.dim()); }
  Vector decode(const Vector& z) const { return decoder_(z); }
  Vector encode(const Vector& x) const { return encoder_(x); }
  const AffineMap& decoder() const { return decoder_; }
  const AffineMap& encoder() const { return encoder_; }

 private:
  AffineMap decoder_;
  AffineMap encoder_;
};

// Randomized codec on sentences in R^{d+k}:
//   decode(z, r) = W [z; sigma r] + b,   encode(x) = first d coords of W^{-1}(x - b).
// The encoder seed distribution is degenerate, and encode(decode(z, r)) == z
// for every r.
class RandomizedCodec {
 public:
  RandomizedCodec(Matrix w, Vector b, int latent_dim, double noise_scale);
  // Uses `encoder_linear` in place of W^{-1}; for building broken codecs.
  RandomizedCodec(Matrix w, Vector b, int latent_dim, double noise_scale, Matrix encoder_linear);

  static RandomizedCodec from_deterministic(const AffineCodec& codec);

  int latent_dim() const { return latent_dim_; }
  int nuisance_dim() const { return sentence_dim() - latent_dim_; }
  int sentence_dim() const { return static_cast<int>(w_.rows()); }
  double noise_scale() const { return noise_scale_; }
  const Matrix& w() const { return w_; }
  const Vector& b() const { return b_; }
  const Matrix& w_inverse() const { return w_inv_; }

  Vector decode(const Vector& z, const Vector& seed) const;
  // decode(z, 0): the seed-averaged decoder, since seeds are symmetric.
  Vector decode_mean(const Vector& z) const;
  Vector encode(const Vector& x) const;
  // k standard normals truncated at 3.
  Vector draw_seed(Rng& rng) const;

 private:
  Matrix w_;
  Vector b_;
  Matrix w_inv_;
  int latent_dim_;
  double noise_scale_;
};

inline constexpr double kSeedTruncation = 3.0;

using CodecSet = std::map<LanguageId, AffineCodec>;
using RandomizedCodecSet = std::map<LanguageId, RandomizedCodec>;

// W = U clip(S) V^T for a standard-normal draw, b uniform in the offset ball.
std::vector<AffineCodec> sample_ground_truth_codecs(const FunctionClassSpec& spec, int k, std::uint64_t seed);
std::vector<RandomizedCodec> sample_randomized_codecs(const FunctionClassSpec& spec, int k, int nuisance_dim,
                                                      double noise_scale, std::uint64_t seed);

// Singular values of `m` clipped into [lo, hi].
Matrix clip_singular_values(const Matrix& m, double lo, double hi);

template <class Codec>
std::map<LanguageId, Codec> make_codec_set(const std::vector<LanguageId>& languages, std::vector<Codec> codecs) {
  if (languages.size() != codecs.size()) throw ArgumentError("codec count does not match language count");
  std::map<LanguageId, Codec> out;
  for (std::size_t i = 0; i < languages.size(); ++i) out.emplace(languages[i], std::move(codecs[i]));
  return out;
}

struct CorpusMetadata {
  std::uint64_t seed = 0;
  double noise_scale = 0.0;
  int nuisance_dim = 0;
  std::uint64_t codec_hash = 0;
};

// Aligned pairs (x_i, x'_i) stored as the columns of two dim x n matrices.
struct AlignedCorpus {
  LanguageId source;
  LanguageId target;
  Matrix x;
  Matrix x_prime;
  CorpusMetadata meta;

  Eigen::Index size() const { return x.cols(); }
  Eigen::Index dim() const { return x.rows(); }
};

std::uint64_t codec_hash(const RandomizedCodec& a, const RandomizedCodec& b);

// x_i = D_source(z_i), x'_i = D_target(z_i) with shared latents. The stream is
// derived from (seed, source, target), so edges can be generated in any order.
AlignedCorpus generate_corpus(const LanguageId& source, const LanguageId& target, const CodecSet& codecs, int n,
                              const LatentDistribution& latent, std::uint64_t seed);

// As generate_corpus, with independent decoder seeds on each side.
AlignedCorpus randomized_generate(const LanguageId& source, const LanguageId& target,
                                  const RandomizedCodecSet& codecs, int n, const LatentDistribution& latent,
                                  std::uint64_t seed);

// Two-sample comparison of first and second moments.
struct MomentGap {
  double mean_gap = 0.0;  // ||mean_a - mean_b||
  double mean_se = 0.0;   // RMS of mean_gap under equal distributions
  double cov_gap = 0.0;   // ||cov_a - cov_b||_F
  double cov_se = 0.0;

  double statistic() const;  // max(mean_gap / mean_se, cov_gap / cov_se)
};

// Columns are samples.
MomentGap moment_gap(const Matrix& a, const Matrix& b);

enum class InvarianceReference {
  kPaired,       // compare against the latents that were decoded
  kIndependent,  // compare against a fresh latent sample
};

struct InvarianceResult {
  MomentGap gap;
  bool holds = false;
};

// Encodes m decoded latents and compares the round trip against the latent
// distribution; holds iff both gaps are within 3 standard errors.
InvarianceResult invariance_test(const RandomizedCodec& codec, const LatentDistribution& latent, int m,
                                 std::uint64_t seed, InvarianceReference reference = InvarianceReference::kPaired);

struct PropositionCheckOptions {
  // Every source reuses one latent stream.
  bool shared_latents = false;
  // Decoder used on the target side for a given source, replacing the true one.
  std::map<LanguageId, AffineCodec> target_decoder_override;
};

struct PropositionCheck {
  double max_stat = 0.0;  // worst moment statistic over source pairs
  bool holds = false;     // max_stat <= 3
  // Two-to-one bound (epsilon = 0) on the sign-pattern quantisation of the
  // target samples, and twice its sampling standard error.
  double quantized_bound = 0.0;
  double quantized_tolerance = 0.0;
  bool bound_within_tolerance = false;
};

// Target-side samples of every task L_i -> target must share one
// distribution; checked by moments and by the quantised two-to-one bound.
PropositionCheck proposition_zero_check(const CodecSet& codecs, const std::vector<LanguageId>& sources,
                                        const LanguageId& target, const LatentDistribution& latent, int m,
                                        std::uint64_t seed, const PropositionCheckOptions& options = {});

}  // namespace umt
