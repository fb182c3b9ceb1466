#include "lingshift/synthetic_text.hpp"

#include <algorithm>
#include <cmath>

#include "lingshift/error.hpp"
#include "lingshift/random.hpp"

namespace lingshift {
namespace {

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

std::string syllables(std::size_t index, std::size_t count) {
  const std::size_t base = kConsonants.size() * kVowels.size();
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t s = index % base;
    index /= base;
    out.push_back(kConsonants[s / kVowels.size()]);
    out.push_back(kVowels[s % kVowels.size()]);
  }
  return out;
}

std::vector<double> zipf_cdf(std::size_t n, double exponent) {
  std::vector<double> cdf(n);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    total += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
    cdf[r] = total;
  }
  for (auto& c : cdf) c /= total;
  return cdf;
}

std::size_t draw(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()),
                               cdf.size() - 1);
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticCorpusConfig& config) {
  if (config.topics == 0 || config.words_per_topic == 0 ||
      config.function_words == 0) {
    throw InvalidArgument("synthetic corpus needs topics, topic words and function words");
  }
  if (config.min_document == 0 || config.min_document > config.max_document) {
    throw InvalidArgument("invalid synthetic document length range");
  }
  const std::size_t content = config.topics * config.words_per_topic;
  if (content > 70 * 70 * 70 || config.function_words > 70 * 70) {
    throw InvalidArgument("synthetic vocabulary too large for the word generator");
  }

  Rng rng(config.seed);
  auto words = std::make_shared<Lexicon>();
  auto tags = config.tagged ? std::make_shared<Lexicon>() : nullptr;

  static constexpr std::string_view kFunctionTags[] = {"DT", "IN", "CC", "PRP", "TO"};
  static constexpr std::string_view kContentTags[] = {"NN", "VB", "JJ", "NNP"};
  static constexpr std::string_view kAlternateTags[] = {"VB", "NN", "NN", "NN"};

  SyntheticCorpus out{CorpusSnapshot({"synthetic", 0}, words, tags, {}, {}, {0}),
                      {}, {}};
  std::vector<std::uint32_t> function_ids;
  std::vector<std::uint32_t> function_tag;
  for (std::size_t i = 0; i < config.function_words; ++i) {
    out.function_words.push_back(syllables(i, 2));
    function_ids.push_back(words->intern(out.function_words.back()));
    if (tags) function_tag.push_back(tags->intern(kFunctionTags[i % 5]));
  }
  // content_ids[topic][rank]; content kind selects the tag pair.
  std::vector<std::vector<std::uint32_t>> content_ids(config.topics);
  std::vector<std::vector<std::uint8_t>> content_kind(config.topics);
  out.topic_words.resize(config.topics);
  for (std::size_t t = 0; t < config.topics; ++t) {
    for (std::size_t r = 0; r < config.words_per_topic; ++r) {
      const std::string w = syllables(t * config.words_per_topic + r, 3);
      out.topic_words[t].push_back(w);
      content_ids[t].push_back(words->intern(w));
      const double u = rng.uniform();
      content_kind[t].push_back(u < 0.6 ? 0 : u < 0.8 ? 1 : u < 0.95 ? 2 : 3);
    }
  }
  std::vector<std::uint32_t> modal_tag;
  std::vector<std::uint32_t> alternate_tag;
  if (tags) {
    for (int k = 0; k < 4; ++k) {
      modal_tag.push_back(tags->intern(kContentTags[k]));
      alternate_tag.push_back(tags->intern(kAlternateTags[k]));
    }
  }

  const auto function_cdf = zipf_cdf(config.function_words, 1.0);
  const auto topic_cdf = zipf_cdf(config.words_per_topic, config.zipf_exponent);

  std::vector<std::uint32_t> tokens;
  std::vector<std::uint32_t> token_tags;
  std::vector<std::size_t> offsets{0};
  tokens.reserve(config.tokens + config.max_document);
  while (tokens.size() < config.tokens) {
    const std::size_t topic = rng.below(config.topics);
    const std::size_t length =
        config.min_document + rng.below(config.max_document - config.min_document + 1);
    for (std::size_t i = 0; i < length; ++i) {
      if (rng.uniform() < config.function_rate) {
        const std::size_t f = draw(function_cdf, rng);
        tokens.push_back(function_ids[f]);
        if (tags) token_tags.push_back(function_tag[f]);
        continue;
      }
      const std::size_t from =
          rng.uniform() < config.off_topic_rate ? rng.below(config.topics) : topic;
      const std::size_t r = draw(topic_cdf, rng);
      tokens.push_back(content_ids[from][r]);
      if (tags) {
        const auto kind = content_kind[from][r];
        token_tags.push_back(rng.uniform() < config.tag_fidelity ? modal_tag[kind]
                                                                 : alternate_tag[kind]);
      }
    }
    offsets.push_back(tokens.size());
  }
  out.snapshot = CorpusSnapshot({"synthetic", 0}, std::move(words), std::move(tags),
                                std::move(tokens), std::move(token_tags),
                                std::move(offsets));
  return out;
}

}  // namespace lingshift
