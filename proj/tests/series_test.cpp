#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "lingshift/alignment.hpp"
#include "lingshift/corpus.hpp"
#include "lingshift/error.hpp"
#include "lingshift/random.hpp"
#include "lingshift/series.hpp"
#include "support.hpp"

namespace lingshift {
namespace {

using testing::corpus_from;

// Base-2 Jensen-Shannon divergence evaluated term by term.
double oracle_jsd(const std::vector<double>& p, const std::vector<double>& q) {
  auto kl = [](const std::vector<double>& a, const std::vector<double>& m) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] > 0) total += a[i] * (std::log(a[i]) - std::log(m[i])) / std::log(2.0);
    }
    return total;
  };
  std::vector<double> m(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m[i] = (p[i] + q[i]) / 2;
  return kl(p, m) / 2 + kl(q, m) / 2;
}

PosDistribution dist(std::initializer_list<std::pair<const std::string, double>> kv) {
  return PosDistribution(PosDistribution::Map(kv));
}

AlignmentSet single_word_alignment(const Eigen::RowVectorXd& base,
                                   const std::vector<Eigen::RowVectorXd>& later) {
  std::vector<std::string> labels{"0"};
  std::vector<RowMatrix> warped{RowMatrix(base)};
  for (std::size_t t = 0; t < later.size(); ++t) {
    labels.push_back(std::to_string(t + 1));
    warped.emplace_back(later[t]);
  }
  std::vector<double> residuals(labels.size(), 0.0);
  return AlignmentSet(labels, {"w"}, warped, residuals, {});
}

TEST(FrequencySeries, LogRelativeFrequency) {
  std::string text;
  for (int i = 0; i < 999; ++i) text += "x ";
  text += "target";
  const auto corpus = corpus_from({text, "target target", text});
  const auto vocab = build_common_vocabulary(corpus, 1);
  const auto s = frequency_series(vocab, corpus, "target");
  ASSERT_EQ(s.values.size(), 3u);
  EXPECT_NEAR(s.values[0], std::log(1e-3), 1e-12);
  EXPECT_NEAR(s.values[0], -6.907755, 1e-6);
  EXPECT_DOUBLE_EQ(s.values[1], 0.0);
  EXPECT_THROW(frequency_series(vocab, corpus, "x"), UnknownWord);
}

TEST(FrequencySeries, ConstantRelativeFrequencyIsFlat) {
  const auto corpus = corpus_from({"a b b c", "a a b b b b c c"});
  const auto vocab = build_common_vocabulary(corpus, 1);
  const auto ensemble = frequency_ensemble(vocab, corpus);
  for (std::uint32_t w = 0; w < ensemble.size(); ++w) {
    const auto row = ensemble.row(w);
    EXPECT_NEAR(row[0], row[1], 1e-15);
    EXPECT_LE(row[0], 0.0);
  }
}

TEST(Jsd, Examples) {
  EXPECT_DOUBLE_EQ(jsd(dist({{"NN", 0.3}, {"VB", 0.7}}), dist({{"NN", 0.3}, {"VB", 0.7}})), 0.0);
  EXPECT_DOUBLE_EQ(jsd(dist({{"A", 1.0}}), dist({{"B", 1.0}})), 1.0);
  const double half = jsd(dist({{"A", 0.5}, {"B", 0.5}}), dist({{"A", 1.0}}));
  EXPECT_NEAR(half, oracle_jsd({0.5, 0.5}, {1.0, 0.0}), 1e-15);
  EXPECT_NEAR(half, 0.311278, 1e-6);
}

TEST(Jsd, RandomPairsAgreeWithOracle) {
  Rng rng(12);
  const std::vector<std::string> tags{"A", "B", "C", "D", "E"};
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> p(5), q(5);
    double sp = 0, sq = 0;
    for (int i = 0; i < 5; ++i) {
      p[i] = rng.bernoulli(0.3) ? 0.0 : rng.uniform();
      q[i] = rng.bernoulli(0.3) ? 0.0 : rng.uniform();
      sp += p[i];
      sq += q[i];
    }
    if (sp == 0 || sq == 0) continue;
    PosDistribution::Map mp, mq;
    for (int i = 0; i < 5; ++i) {
      p[i] /= sp;
      q[i] /= sq;
      if (p[i] > 0) mp[tags[i]] = p[i];
      if (q[i] > 0) mq[tags[i]] = q[i];
    }
    const PosDistribution dp(mp), dq(mq);
    const double value = jsd(dp, dq);
    EXPECT_GE(value, 0.0);
    EXPECT_LE(value, 1.0);
    EXPECT_EQ(value, jsd(dq, dp));
    EXPECT_NEAR(value, oracle_jsd(p, q), 1e-12);
    EXPECT_EQ(jsd(dp, dp), 0.0);
    if (p != q) EXPECT_GT(value, 1e-12);
  }
}

TEST(SyntacticSeries, Examples) {
  const auto corpus = corpus_from({"w_NN w_NN x_DT", "w_NNP x_DT", "w_NN w_NNP x_DT", "w_NN x_DT"},
                                  CorpusFormat::tagged);
  const auto s = syntactic_series(corpus, "w");
  ASSERT_EQ(s.values.size(), 4u);
  EXPECT_EQ(s.values[0], 0.0);
  EXPECT_DOUBLE_EQ(s.values[1], 1.0);
  EXPECT_NEAR(s.values[2], 0.311278, 1e-6);
  EXPECT_EQ(s.values[3], 0.0);

  const auto vocab = build_common_vocabulary(corpus, 1);
  const auto ensemble = syntactic_ensemble(corpus, vocab);
  const auto row = ensemble.row(vocab.id("w"));
  for (std::size_t t = 0; t < 4; ++t) EXPECT_DOUBLE_EQ(row[t], s.values[t]);
  for (auto v : ensemble.row(vocab.id("x"))) EXPECT_EQ(v, 0.0);
}

TEST(SyntacticSeries, MissingWordOrTags) {
  const auto tagged = corpus_from({"w_NN x_DT", "x_DT"}, CorpusFormat::tagged);
  EXPECT_THROW(syntactic_series(tagged, "w"), UnknownWord);
  const auto plain = corpus_from({"w", "w"});
  EXPECT_THROW(syntactic_ensemble(plain, build_common_vocabulary(plain, 1)), InvalidArgument);
}

TEST(DistributionalSeries, Examples) {
  Eigen::RowVectorXd base(3);
  base << 0.6, 0.8, 0.0;
  Eigen::RowVectorXd ortho(3);
  ortho << 0.0, 0.0, 5.0;
  const auto set = single_word_alignment(base, {base * 3.0, ortho, -base});
  const auto s = distributional_series(set, "w");
  ASSERT_EQ(s.values.size(), 4u);
  EXPECT_EQ(s.values[0], 0.0);
  EXPECT_NEAR(s.values[1], 0.0, 1e-15);
  EXPECT_NEAR(s.values[2], 1.0, 1e-15);
  EXPECT_NEAR(s.values[3], 2.0, 1e-15);
  EXPECT_THROW(distributional_series(set, "other"), UnknownWord);
}

TEST(DistributionalSeries, ZeroWarpedVectorIsAnError) {
  Eigen::RowVectorXd base(2);
  base << 1.0, 0.0;
  const auto set = single_word_alignment(base, {Eigen::RowVectorXd::Zero(2)});
  EXPECT_THROW(distributional_series(set, "w"), InvalidArgument);
}

TEST(DistributionalSeries, SelfAlignmentIsZero) {
  Rng rng(4);
  const auto base = testing::random_space(80, 6, rng);
  const std::vector<EmbeddingSpace> spaces{base, base.relabeled("1"), base.relabeled("2")};
  AlignmentConfig cfg;
  cfg.ridge = 1e-8;
  const auto ensemble = distributional_ensemble(align_all_to_base(spaces, cfg));
  EXPECT_LT(ensemble.values().cwiseAbs().maxCoeff(), 1e-9);
}

TEST(CosineDistance, BoundsOnRandomVectors) {
  Rng rng(5);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> a(4), b(4);
    for (auto& x : a) x = rng.normal();
    for (auto& x : b) x = rng.normal();
    const double d = cosine_distance(a, b);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 2.0);
    EXPECT_NEAR(cosine_distance(a, a), 0.0, 1e-12);
    EXPECT_GT(d, 1e-12);
  }
  EXPECT_THROW(cosine_distance(std::vector<double>{0, 0}, std::vector<double>{1, 0}),
               InvalidArgument);
}

TEST(SeriesCsv, LongFormat) {
  RowMatrix values(2, 2);
  values << -1.0 / 3.0, 0.0, 2.0, 1e-10;
  const SeriesEnsemble ensemble(Method::distributional, {"a", "b,c"}, {"1990", "2000"}, values);
  std::ostringstream out;
  write_series_csv(out, ensemble);
  EXPECT_EQ(out.str(),
            "word,method,snapshot,value\n"
            "a,distributional,1990,-0.333333333\n"
            "a,distributional,2000,0\n"
            "\"b,c\",distributional,1990,2\n"
            "\"b,c\",distributional,2000,1e-10\n");
}

TEST(SeriesEnsemble, RejectsNonFiniteValues) {
  RowMatrix values(1, 2);
  values << 1.0, std::nan("");
  EXPECT_THROW(SeriesEnsemble(Method::frequency, {"a"}, {"0", "1"}, values), InvalidArgument);
  EXPECT_EQ(parse_method("syntactic"), Method::syntactic);
  EXPECT_EQ(to_string(Method::frequency), "frequency");
  EXPECT_THROW(parse_method("semantic"), InvalidArgument);
}

}  // namespace
}  // namespace lingshift
