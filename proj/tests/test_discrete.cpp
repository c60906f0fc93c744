#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"
#include "umt/discrete.hpp"
#include "umt/instances.hpp"

namespace {

using umt::FiniteDistribution;
using umt::Translator;

using Dist = FiniteDistribution<std::string>;
using Map = Translator<std::string, std::string>;

TEST(TvDistance, IdenticalIsZero) {
  Dist p({"a", "b", "c"}, {0.2, 0.3, 0.5});
  EXPECT_DOUBLE_EQ(umt::tv_distance(p, p), 0.0);
}

TEST(TvDistance, DisjointSupportsIsOne) {
  Dist p({"a", "b"}, {0.5, 0.5});
  Dist q({"c"}, {1.0});
  EXPECT_DOUBLE_EQ(umt::tv_distance(p, q), 1.0);
}

TEST(TvDistance, MirroredTwoAtom) {
  Dist p({"a", "b"}, {0.9, 0.1});
  Dist q({"a", "b"}, {0.1, 0.9});
  const double expected = oracle::tv({0.9, 0.1}, {0.1, 0.9});
  EXPECT_NEAR(umt::tv_distance(p, q), expected, 1e-15);
  EXPECT_NEAR(expected, 0.8, 1e-15);
}

TEST(TvDistance, SupportOrderDoesNotMatter) {
  Dist p({"a", "b", "c"}, {0.2, 0.3, 0.5});
  Dist q({"c", "a", "b"}, {0.5, 0.2, 0.3});
  EXPECT_NEAR(umt::tv_distance(p, q), 0.0, 1e-15);
}

TEST(FiniteDistribution, RejectsBadWeights) {
  EXPECT_THROW(Dist({"a", "b"}, {0.5, 0.6}), umt::ArgumentError);
  EXPECT_THROW(Dist({"a", "b"}, {1.5, -0.5}), umt::ArgumentError);
  EXPECT_THROW(Dist({"a", "a"}, {0.5, 0.5}), umt::ArgumentError);
  EXPECT_THROW(Dist({}, {}), umt::ArgumentError);
}

TEST(Pushforward, Identity) {
  Dist d({"a", "b"}, {0.3, 0.7});
  Map id({{"a", "a"}, {"b", "b"}});
  EXPECT_EQ(umt::pushforward(d, id), d);
}

TEST(Pushforward, ConstantCollapsesToPointMass) {
  Dist d({"a", "b"}, {0.3, 0.7});
  Map f({{"a", "x"}, {"b", "x"}});
  const auto p = umt::pushforward(d, f);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.support()[0], "x");
  EXPECT_NEAR(p.weights()[0], 1.0, 1e-15);
}

TEST(Pushforward, OutsideDomainThrows) {
  Dist d({"a", "b"}, {0.3, 0.7});
  Map f(std::map<std::string, std::string>{{"a", "x"}});
  EXPECT_THROW(umt::pushforward(d, f), umt::DomainError);
}

TEST(ZeroOneError, Examples) {
  Dist d({"a", "b"}, {0.9, 0.1});
  Map truth({{"a", "x"}, {"b", "y"}});
  Map constant({{"a", "x"}, {"b", "x"}});
  Map wrong({{"a", "y"}, {"b", "x"}});
  EXPECT_DOUBLE_EQ(umt::zero_one_error(d, truth, truth), 0.0);
  EXPECT_NEAR(umt::zero_one_error(d, wrong, truth), 1.0, 1e-15);
  EXPECT_NEAR(umt::zero_one_error(d, constant, truth), 0.1, 1e-15);
}

TEST(ZeroOneError, DomainMismatchThrows) {
  Dist d({"a", "b"}, {0.5, 0.5});
  Map partial(std::map<std::string, std::string>{{"a", "x"}});
  Map full({{"a", "x"}, {"b", "y"}});
  EXPECT_THROW(umt::zero_one_error(d, partial, full), umt::DomainError);
}

TEST(DisagreementBound, EqualMaps) {
  Dist d({"a", "b"}, {0.4, 0.6});
  Map f({{"a", "x"}, {"b", "y"}});
  const auto c = umt::disagreement_bound_check(d, f, f);
  EXPECT_EQ(c.tv, 0.0);
  EXPECT_EQ(c.disagreement, 0.0);
  EXPECT_TRUE(c.holds);
}

TEST(DisagreementBound, SwappedImagesOfEqualMass) {
  Dist d({"a", "b"}, {0.5, 0.5});
  Map f({{"a", "x"}, {"b", "y"}});
  Map g({{"a", "y"}, {"b", "x"}});
  const auto c = umt::disagreement_bound_check(d, f, g);
  EXPECT_NEAR(c.tv, 0.0, 1e-15);
  EXPECT_NEAR(c.disagreement, 1.0, 1e-15);
  EXPECT_TRUE(c.holds);
}

TEST(DataProcessing, IdentityAndConstant) {
  Dist d({"a", "b", "c"}, {0.2, 0.3, 0.5});
  Dist e({"a", "b", "c"}, {0.6, 0.3, 0.1});
  Map id({{"a", "a"}, {"b", "b"}, {"c", "c"}});
  Map constant({{"a", "z"}, {"b", "z"}, {"c", "z"}});
  const auto c1 = umt::data_processing_check(d, e, id);
  EXPECT_NEAR(c1.before, c1.after, 1e-15);
  EXPECT_TRUE(c1.holds);
  const auto c2 = umt::data_processing_check(d, e, constant);
  EXPECT_NEAR(c2.after, 0.0, 1e-15);
  EXPECT_TRUE(c2.holds);
}

struct RandomCase {
  std::vector<std::string> atoms;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<int> f;
  std::vector<int> g;
  int n_out = 0;
};

RandomCase random_case(std::mt19937_64& rng) {
  RandomCase c;
  const int n = std::uniform_int_distribution<int>(1, 6)(rng);
  c.n_out = std::uniform_int_distribution<int>(1, 4)(rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> out(0, c.n_out - 1);
  auto normalise = [&](std::vector<double>& w) {
    double t = 0.0;
    for (auto& x : w) t += x;
    for (auto& x : w) x /= t;
  };
  for (int i = 0; i < n; ++i) {
    c.atoms.push_back("s" + std::to_string(i));
    c.p.push_back(u(rng) < 0.2 ? 0.0 : u(rng) + 1e-6);
    c.q.push_back(u(rng) + 1e-6);
    c.f.push_back(out(rng));
    c.g.push_back(out(rng));
  }
  if (std::all_of(c.p.begin(), c.p.end(), [](double x) { return x == 0.0; })) c.p[0] = 1.0;
  normalise(c.p);
  normalise(c.q);
  return c;
}

Map as_map(const RandomCase& c, const std::vector<int>& f) {
  std::map<std::string, std::string> t;
  for (std::size_t i = 0; i < c.atoms.size(); ++i) t.emplace(c.atoms[i], "y" + std::to_string(f[i]));
  return Map(std::move(t));
}

TEST(DisagreementBound, RandomInstancesAgreeWithOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = random_case(rng);
    Dist d(c.atoms, c.p);
    const auto check = umt::disagreement_bound_check(d, as_map(c, c.f), as_map(c, c.g));
    const double tv = oracle::tv(oracle::push(c.p, c.f, c.n_out), oracle::push(c.p, c.g, c.n_out));
    double dis = 0.0;
    for (std::size_t i = 0; i < c.p.size(); ++i) {
      if (c.f[i] != c.g[i]) dis += c.p[i];
    }
    ASSERT_NEAR(check.tv, tv, 1e-12) << "trial " << trial;
    ASSERT_NEAR(check.disagreement, dis, 1e-12) << "trial " << trial;
    ASSERT_TRUE(check.holds) << "trial " << trial;
  }
}

TEST(DataProcessing, RandomInstancesAgreeWithOracle) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = random_case(rng);
    Dist d(c.atoms, c.p);
    Dist e(c.atoms, c.q);
    const auto check = umt::data_processing_check(d, e, as_map(c, c.f));
    ASSERT_NEAR(check.before, oracle::tv(c.p, c.q), 1e-12);
    ASSERT_NEAR(check.after, oracle::tv(oracle::push(c.p, c.f, c.n_out), oracle::push(c.q, c.f, c.n_out)), 1e-12);
    ASSERT_TRUE(check.holds) << "trial " << trial;
  }
}

TEST(Compose, AppliesInnerThenOuter) {
  Map g({{"a", "x"}, {"b", "y"}});
  Map h({{"x", "1"}, {"y", "2"}});
  const auto hg = umt::compose(h, g);
  EXPECT_EQ(hg("a"), "1");
  EXPECT_EQ(hg("b"), "2");
}

TEST(PerfectUniversalTranslator, SingleSourceEqualsTruth) {
  std::mt19937_64 rng(3);
  const auto inst = umt::as_many_to_many(oracle::random_two_to_one(rng, "t"));
  const auto& task = inst.tasks[0];
  const auto t = umt::perfect_universal_translator(inst, task.target);
  for (const auto& x : task.inputs.support()) EXPECT_EQ(t(x), task.truth(x));
}

TEST(PerfectUniversalTranslator, ZeroErrorOnRandomThreeLanguageInstances) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = oracle::random_three_language(rng, "r" + std::to_string(trial));
    inst.validate();
    for (const auto& task : inst.tasks) {
      const auto t = umt::perfect_universal_translator(inst, task.target);
      EXPECT_EQ(umt::zero_one_error(task.inputs, t, task.truth), 0.0);
    }
  }
}

TEST(PerfectUniversalTranslator, UnknownTagThrows) {
  std::mt19937_64 rng(5);
  const auto inst = umt::as_many_to_many(oracle::random_two_to_one(rng, "t"));
  const auto t = umt::perfect_universal_translator(inst, "T");
  EXPECT_THROW(t(umt::tagged_sentence("T", "Q", "a")), umt::DomainError);
}

TEST(Sentence, ToStringShowsPrefix) {
  EXPECT_EQ(umt::to_string(umt::tagged_sentence("fr", "en", "hello")), "<fr><en>hello");
  EXPECT_EQ(umt::to_string(umt::plain_sentence("en", "hello")), "<en>hello");
}

}  // namespace
