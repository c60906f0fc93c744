#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/SVD>

#include "umt/generative.hpp"

namespace {

using umt::FunctionClassSpec;
using umt::LatentDistribution;
using umt::Matrix;
using umt::Vector;

TEST(FunctionClassSpec, Validate) {
  FunctionClassSpec ok;
  EXPECT_NO_THROW(ok.validate());
  FunctionClassSpec bad_rho{4, 1.0, 0.5, 1.0};
  EXPECT_THROW(bad_rho.validate(), umt::ArgumentError);
  FunctionClassSpec bad_dim{0, 1.0, 2.0, 1.0};
  EXPECT_THROW(bad_dim.validate(), umt::ArgumentError);
}

TEST(SampleGroundTruthCodecs, InsideClass) {
  const FunctionClassSpec spec{4, 1.0, 2.0, 1.0};
  const auto codecs = umt::sample_ground_truth_codecs(spec, 6, 7);
  ASSERT_EQ(codecs.size(), 6u);
  for (const auto& c : codecs) {
    Eigen::JacobiSVD<Matrix> svd(c.decoder().linear());
    EXPECT_LE(svd.singularValues().maxCoeff(), 2.0 + 1e-12);
    EXPECT_GE(svd.singularValues().minCoeff(), 0.5 - 1e-12);
    EXPECT_LE(c.decoder().offset().norm(), 1.0 + 1e-12);
    const Vector z = Vector::LinSpaced(4, -0.3, 0.4);
    EXPECT_LE((c.encode(c.decode(z)) - z).norm(), 1e-12);
  }
}

TEST(SampleGroundTruthCodecs, UnitBandGivesIsometries) {
  const FunctionClassSpec spec{3, 1.0, 1.0, 0.0};
  for (const auto& c : umt::sample_ground_truth_codecs(spec, 4, 9)) {
    const Matrix& w = c.decoder().linear();
    EXPECT_LE((w.transpose() * w - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(c.decoder().offset().norm(), 0.0);
  }
}

TEST(SampleGroundTruthCodecs, SeedDeterminism) {
  const FunctionClassSpec spec;
  const auto a = umt::sample_ground_truth_codecs(spec, 3, 5);
  const auto b = umt::sample_ground_truth_codecs(spec, 3, 5);
  const auto c = umt::sample_ground_truth_codecs(spec, 3, 6);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a[i].decoder().linear(), b[i].decoder().linear());
    EXPECT_EQ(a[i].decoder().offset(), b[i].decoder().offset());
  }
  EXPECT_NE(a[0].decoder().linear(), c[0].decoder().linear());
}

TEST(ClipSingularValues, ClipsIntoBand) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 10.0;
  m(1, 1) = 0.01;
  const Matrix c = umt::clip_singular_values(m, 0.5, 2.0);
  EXPECT_NEAR(c(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(c(1, 1), 0.5, 1e-12);
}

TEST(SampleLatent, ZeroRadiusGivesZeros) {
  umt::LatentSampler s({3, 0.0}, 1);
  EXPECT_EQ(umt::sample_latent(s, 10).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SampleLatent, InsideBallAndCentred) {
  const int d = 4, m = 100000;
  const double radius = 1.5;
  umt::LatentSampler s({d, radius}, 2);
  const Matrix z = umt::sample_latent(s, m);
  EXPECT_LE(z.colwise().norm().maxCoeff(), radius + 1e-12);
  const double tol = 4.0 * radius / std::sqrt(m * (d + 2.0));
  EXPECT_LE(z.rowwise().mean().cwiseAbs().maxCoeff(), tol);
  // Second moment of the uniform ball: E[z_j^2] = r^2 / (d + 2).
  const double second = z.array().square().rowwise().mean().mean();
  EXPECT_NEAR(second, radius * radius / (d + 2.0), 0.01);
}

TEST(SampleLatent, RadialLawOfUniformBall) {
  const int d = 3, m = 40000;
  umt::LatentSampler s({d, 1.0}, 8);
  const Matrix z = umt::sample_latent(s, m);
  // P(|z| <= 1/2) = (1/2)^d for the uniform ball.
  const double inside = (z.colwise().norm().array() <= 0.5).cast<double>().mean();
  EXPECT_NEAR(inside, std::pow(0.5, d), 4.0 * std::sqrt(0.125 * 0.875 / m));
}

umt::CodecSet three_codecs() {
  return umt::make_codec_set({"A", "B", "C"}, umt::sample_ground_truth_codecs(FunctionClassSpec{}, 3, 3));
}

TEST(GenerateCorpus, SameLanguageGivesIdenticalSides) {
  const auto codecs = three_codecs();
  const auto c = umt::generate_corpus("A", "A", codecs, 50, {4, 1.0}, 1);
  EXPECT_EQ(c.x, c.x_prime);
}

TEST(GenerateCorpus, UnknownLanguageThrows) {
  EXPECT_THROW(umt::generate_corpus("A", "Z", three_codecs(), 10, {4, 1.0}, 1), umt::ArgumentError);
}

TEST(GenerateCorpus, PairsAreGroundTruthTranslations) {
  const auto codecs = three_codecs();
  const auto c = umt::generate_corpus("A", "B", codecs, 100, {4, 1.0}, 4);
  const auto& a = codecs.at("A");
  const auto& b = codecs.at("B");
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    EXPECT_LE((b.decode(a.encode(c.x.col(i))) - c.x_prime.col(i)).norm(), 1e-12);
  }
}

TEST(GenerateCorpus, MeanIsDecodedOrigin) {
  const auto codecs = three_codecs();
  const int n = 50000;
  const auto c = umt::generate_corpus("A", "B", codecs, n, {4, 1.0}, 4);
  const Vector origin = codecs.at("A").decode(Vector::Zero(4));
  const double tol = 4.0 * 2.0 / std::sqrt(n * 6.0);
  EXPECT_LE((c.x.rowwise().mean() - origin).cwiseAbs().maxCoeff(), tol);
}

TEST(RandomizedGenerate, DegenerateNoiseMatchesDeterministic) {
  const auto codecs = three_codecs();
  const auto det = umt::generate_corpus("A", "C", codecs, 64, {4, 1.0}, 12);
  const auto rnd = umt::randomized_generate("A", "C", umt::make_codec_set<umt::RandomizedCodec>(
                                                          {"A", "B", "C"},
                                                          {umt::RandomizedCodec::from_deterministic(codecs.at("A")),
                                                           umt::RandomizedCodec::from_deterministic(codecs.at("B")),
                                                           umt::RandomizedCodec::from_deterministic(codecs.at("C"))}),
                                            64, {4, 1.0}, 12);
  EXPECT_LE((det.x - rnd.x).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((det.x_prime - rnd.x_prime).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RandomizedGenerate, EdgeStreamIndependentOfOrder) {
  const auto codecs = umt::make_codec_set<umt::RandomizedCodec>(
      {"A", "B", "C"}, umt::sample_randomized_codecs(FunctionClassSpec{}, 3, 2, 0.05, 8));
  const auto first = umt::randomized_generate("B", "C", codecs, 20, {4, 1.0}, 3);
  (void)umt::randomized_generate("A", "B", codecs, 20, {4, 1.0}, 3);
  const auto again = umt::randomized_generate("B", "C", codecs, 20, {4, 1.0}, 3);
  EXPECT_EQ(first.x, again.x);
  EXPECT_EQ(first.x_prime, again.x_prime);
  EXPECT_EQ(first.meta.codec_hash, again.meta.codec_hash);
}

TEST(RandomizedCodec, EncodeRecoversLatentForAnySeed) {
  const auto codec = umt::sample_randomized_codecs(FunctionClassSpec{}, 1, 3, 0.2, 4).front();
  umt::Rng rng(1);
  EXPECT_EQ(codec.sentence_dim(), 7);
  EXPECT_EQ(codec.nuisance_dim(), 3);
  for (int i = 0; i < 20; ++i) {
    const Vector z = umt::uniform_in_ball(rng, 4, 1.0);
    const Vector r = codec.draw_seed(rng);
    EXPECT_LE(r.cwiseAbs().maxCoeff(), umt::kSeedTruncation);
    EXPECT_LE((codec.encode(codec.decode(z, r)) - z).norm(), 1e-10);
  }
}

TEST(InvarianceTest, ExactCodecHasZeroGap) {
  const auto codec = umt::sample_randomized_codecs(FunctionClassSpec{}, 1, 2, 0.05, 4).front();
  const auto r = umt::invariance_test(codec, {4, 1.0}, 5000, 9);
  EXPECT_LE(r.gap.mean_gap, 1e-9);
  EXPECT_LE(r.gap.cov_gap, 1e-9);
  EXPECT_TRUE(r.holds);
}

TEST(InvarianceTest, BrokenInverseFails) {
  const auto good = umt::sample_randomized_codecs(FunctionClassSpec{}, 1, 2, 0.05, 4).front();
  Matrix wrong = good.w_inverse();
  wrong.row(0) *= 1.3;
  const umt::RandomizedCodec broken(good.w(), good.b(), good.latent_dim(), good.noise_scale(), wrong);
  EXPECT_FALSE(umt::invariance_test(broken, {4, 1.0}, 5000, 9).holds);
}

TEST(InvarianceTest, IndependentReferenceGapShrinksLikeInverseRootM) {
  const auto codec = umt::sample_randomized_codecs(FunctionClassSpec{}, 1, 2, 0.05, 4).front();
  auto mean_gap = [&](int m) {
    double s = 0.0;
    for (std::uint64_t t = 0; t < 20; ++t) {
      s += umt::invariance_test(codec, {4, 1.0}, m, 100 + t, umt::InvarianceReference::kIndependent).gap.mean_gap;
    }
    return s / 20.0;
  };
  const double small = mean_gap(1000);
  const double large = mean_gap(16000);
  // sqrt(16) = 4; allow generous Monte-Carlo slack around it.
  EXPECT_GT(small / large, 2.5);
  EXPECT_LT(small / large, 6.5);
}

TEST(MomentGap, IdenticalSamplesGiveZero) {
  umt::LatentSampler s({3, 1.0}, 2);
  const Matrix z = umt::sample_latent(s, 200);
  const auto g = umt::moment_gap(z, z);
  EXPECT_EQ(g.mean_gap, 0.0);
  EXPECT_EQ(g.cov_gap, 0.0);
  EXPECT_EQ(g.statistic(), 0.0);
}

TEST(PropositionZeroCheck, SharedLatentsGiveZeroStatistic) {
  const auto codecs = three_codecs();
  umt::PropositionCheckOptions opts;
  opts.shared_latents = true;
  const auto r = umt::proposition_zero_check(codecs, {"A", "B"}, "C", {4, 1.0}, 2000, 5, opts);
  EXPECT_LE(r.max_stat, 1e-9);
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.quantized_bound, 1e-12);
}

TEST(PropositionZeroCheck, IndependentStreamsHold) {
  const auto r = umt::proposition_zero_check(three_codecs(), {"A", "B"}, "C", {4, 1.0}, 10000, 6);
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(r.bound_within_tolerance);
}

TEST(PropositionZeroCheck, MismatchedDecoderFails) {
  const auto codecs = three_codecs();
  umt::PropositionCheckOptions opts;
  const auto& c = codecs.at("C");
  opts.target_decoder_override.emplace("B", umt::AffineCodec(c.decoder().linear() * 1.5, c.decoder().offset()));
  const auto r = umt::proposition_zero_check(codecs, {"A", "B"}, "C", {4, 1.0}, 10000, 6, opts);
  EXPECT_FALSE(r.holds);
}

TEST(CodecHash, SensitiveToNoiseScale) {
  const auto a = umt::sample_randomized_codecs(FunctionClassSpec{}, 2, 2, 0.05, 1);
  const auto b = umt::sample_randomized_codecs(FunctionClassSpec{}, 2, 2, 0.10, 1);
  EXPECT_EQ(umt::codec_hash(a[0], a[1]), umt::codec_hash(a[0], a[1]));
  EXPECT_NE(umt::codec_hash(a[0], a[1]), umt::codec_hash(b[0], b[1]));
}

}  // namespace
