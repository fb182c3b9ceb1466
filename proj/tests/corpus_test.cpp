#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lingshift/corpus.hpp"
#include "lingshift/error.hpp"

namespace lingshift {
namespace {

CorpusSnapshot parse(const std::string& text, CorpusFormat format = CorpusFormat::plain,
                     const std::string& label = "s", bool lowercase = false) {
  std::istringstream in(text);
  return parse_snapshot(in, {format, lowercase}, {label, 0});
}

TemporalCorpus corpus_of(std::initializer_list<std::string> texts) {
  std::vector<CorpusSnapshot> snaps;
  std::size_t i = 0;
  for (const auto& t : texts) snaps.push_back(parse(t, CorpusFormat::plain, std::to_string(i++)));
  return TemporalCorpus(std::move(snaps));
}

TEST(Corpus, PlainTokenCount) {
  const auto s = parse("a b\nc");
  EXPECT_EQ(s.token_count(), 3u);
  EXPECT_EQ(s.document_count(), 2u);
  EXPECT_EQ(s.document(0).size(), 2u);
  EXPECT_FALSE(s.tagged());
  EXPECT_EQ(s.count("a"), 1u);
  EXPECT_EQ(s.count("zzz"), 0u);
}

TEST(Corpus, TaggedTokens) {
  const auto s = parse("apple_NN pie_NN", CorpusFormat::tagged);
  ASSERT_EQ(s.token_count(), 2u);
  EXPECT_EQ(s.tags().at(s.token_tags()[0]), "NN");
  EXPECT_EQ(s.tags().at(s.token_tags()[1]), "NN");
  EXPECT_EQ(s.words().at(s.tokens()[1]), "pie");
}

TEST(Corpus, TaggedSplitsOnLastUnderscore) {
  const auto s = parse("new_york_NNP", CorpusFormat::tagged);
  ASSERT_EQ(s.token_count(), 1u);
  EXPECT_EQ(s.words().at(s.tokens()[0]), "new_york");
  EXPECT_EQ(s.tags().at(s.token_tags()[0]), "NNP");
}

TEST(Corpus, TaggedParseErrorNamesLine) {
  try {
    parse("ok_NN\nfine_JJ broken\n", CorpusFormat::tagged);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse("word_", CorpusFormat::tagged), ParseError);
  EXPECT_THROW(parse("_NN", CorpusFormat::tagged), ParseError);
}

TEST(Corpus, LowercaseIsUnicodeAware) {
  const auto s = parse("Apple ÉCOLE Straße", CorpusFormat::plain, "s", true);
  EXPECT_EQ(s.count("apple"), 1u);
  EXPECT_EQ(s.count("école"), 1u);
  EXPECT_EQ(s.count("straße"), 1u);
  const auto tagged = parse("Apple_NNP", CorpusFormat::tagged, "s", true);
  EXPECT_EQ(tagged.count("apple"), 1u);
  EXPECT_EQ(tagged.tags().at(0), "NNP");
}

TEST(Corpus, MissingFileIsIoError) {
  EXPECT_THROW(load_snapshot("/nonexistent/file.txt", {}), IoError);
}

TEST(Corpus, ReloadYieldsIdenticalSnapshot) {
  const auto dir = std::filesystem::temp_directory_path() / "lingshift_corpus_reload";
  std::filesystem::create_directories(dir);
  const auto path = dir / "snap.txt";
  std::ofstream(path) << "b a c\n\nd a\n";
  const auto a = load_snapshot(path, {}, {"t", 0});
  const auto b = load_snapshot(path, {}, {"t", 0});
  EXPECT_TRUE(a.same_content(b));
  EXPECT_TRUE(std::equal(a.tokens().begin(), a.tokens().end(), b.tokens().begin()));
  std::ostringstream out;
  write_snapshot(out, a);
  EXPECT_EQ(out.str(), "b a c\n\nd a\n");
}

TEST(Corpus, ManifestResolvesRelativePaths) {
  const auto dir = std::filesystem::temp_directory_path() / "lingshift_manifest_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "a.txt") << "x y\n";
  std::ofstream(dir / "b.txt") << "y z z\n";
  std::ofstream(dir / "manifest.tsv") << "# comment\n1950\ta.txt\n\n1960\tb.txt\n";
  const auto corpus = load_temporal_corpus(dir / "manifest.tsv", {});
  ASSERT_EQ(corpus.size(), 2u);
  EXPECT_EQ(corpus[1].label().label, "1960");
  EXPECT_EQ(corpus[1].label().index, 1u);
  EXPECT_EQ(corpus[1].token_count(), 3u);

  std::ofstream(dir / "bad.tsv") << "1950 a.txt\n";
  EXPECT_THROW(read_manifest(dir / "bad.tsv"), ParseError);
}

TEST(Corpus, DuplicateLabelsRejected) {
  std::vector<CorpusSnapshot> snaps{parse("a", CorpusFormat::plain, "x"),
                                    parse("a", CorpusFormat::plain, "x")};
  EXPECT_THROW(TemporalCorpus(std::move(snaps)), InvalidArgument);
}

TEST(Vocabulary, IntersectsSnapshots) {
  const auto v = build_common_vocabulary(corpus_of({"a b c", "b c d"}), 1);
  EXPECT_EQ(v.size(), 2u);
  EXPECT_TRUE(v.find("b"));
  EXPECT_TRUE(v.find("c"));
  EXPECT_FALSE(v.find("a"));
  EXPECT_FALSE(v.find("d"));
}

TEST(Vocabulary, ThresholdAppliesInEverySnapshot) {
  const auto v = build_common_vocabulary(corpus_of({"a a a b", "a a a b b b"}), 2);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.word(0), "a");
  EXPECT_EQ(v.count(0, 0), 3u);
  EXPECT_EQ(v.count(0, 1), 3u);
}

TEST(Vocabulary, SingleSnapshotIsIdentity) {
  const auto v = build_common_vocabulary(corpus_of({"a b"}), 1);
  EXPECT_EQ(v.size(), 2u);
}

TEST(Vocabulary, EmptyIntersectionIsAnError) {
  EXPECT_THROW(build_common_vocabulary(corpus_of({"a", "b"}), 1), InvalidArgument);
  EXPECT_THROW(build_common_vocabulary(TemporalCorpus({}), 1), InvalidArgument);
}

TEST(Vocabulary, IdsOrderedByTotalCount) {
  const auto v = build_common_vocabulary(corpus_of({"b a a c c c", "c a b"}), 1);
  EXPECT_EQ(v.words(), (std::vector<std::string>{"c", "a", "b"}));
  EXPECT_THROW(v.id("zzz"), UnknownWord);
}

TEST(Vocabulary, EveryWordMeetsMinCountProperty) {
  // Deterministic pseudo-random corpora: the invariant must hold for all.
  for (unsigned seed = 1; seed <= 20; ++seed) {
    std::vector<CorpusSnapshot> snaps;
    unsigned x = seed;
    for (int t = 0; t < 3; ++t) {
      std::string text;
      for (int i = 0; i < 200; ++i) {
        x = x * 1103515245u + 12345u;
        text += "w" + std::to_string((x >> 16) % 30) + ' ';
      }
      snaps.push_back(parse(text, CorpusFormat::plain, std::to_string(t)));
    }
    const TemporalCorpus corpus(std::move(snaps));
    const std::uint64_t m = 1 + seed % 7;
    const auto v = build_common_vocabulary(corpus, m);
    for (std::uint32_t w = 0; w < v.size(); ++w) {
      for (std::size_t t = 0; t < corpus.size(); ++t) {
        EXPECT_GE(v.count(w, t), m);
        EXPECT_EQ(v.count(w, t), corpus[t].count(v.word(w)));
      }
    }
  }
}

TEST(PosDistribution, CountRatios) {
  const auto s = parse("apple_NN apple_NN x_DT apple_NN apple_NNP", CorpusFormat::tagged);
  const auto q = pos_distribution(s, "apple");
  EXPECT_DOUBLE_EQ(q.probability("NN"), 0.75);
  EXPECT_DOUBLE_EQ(q.probability("NNP"), 0.25);
  EXPECT_DOUBLE_EQ(q.probability("DT"), 0.0);
  EXPECT_EQ(q.modal_tag(), "NN");
}

TEST(PosDistribution, SingleTag) {
  const auto s = parse("pie_NN", CorpusFormat::tagged);
  EXPECT_DOUBLE_EQ(pos_distribution(s, "pie").probability("NN"), 1.0);
}

TEST(PosDistribution, AbsentWordIsDistinctError) {
  const auto s = parse("pie_NN", CorpusFormat::tagged);
  EXPECT_THROW(pos_distribution(s, "cake"), UnknownWord);
  EXPECT_THROW(pos_distribution(parse("pie"), "pie"), InvalidArgument);
  EXPECT_THROW(PosDistribution(PosDistribution::Map{}), InvalidArgument);
  EXPECT_THROW(PosDistribution(PosDistribution::Map{{"NN", 0.5}}), InvalidArgument);
}

TEST(PosDistribution, BulkSumsToOne) {
  const auto s = parse("a_NN b_VB a_JJ a_NN b_VB c_DT\nc_IN a_NN", CorpusFormat::tagged);
  const TemporalCorpus corpus({s});
  const auto v = build_common_vocabulary(corpus, 1);
  const auto all = pos_distributions(corpus[0], v);
  ASSERT_EQ(all.size(), v.size());
  for (std::uint32_t w = 0; w < v.size(); ++w) {
    double sum = 0.0;
    for (const auto& kv : all[w].probabilities()) sum += kv.second;
    EXPECT_NEAR(sum, 1.0, 1e-9);
    EXPECT_EQ(all[w].probabilities(), pos_distribution(s, v.word(w)).probabilities());
  }
}

}  // namespace
}  // namespace lingshift
