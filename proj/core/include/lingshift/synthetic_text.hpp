#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lingshift/corpus.hpp"

namespace lingshift {

// Parameters of a topic-mixture text generator. Each document draws one
// topic; every token is a function word with probability function_rate,
// otherwise a Zipf-distributed content word of the document topic (or, with
// probability off_topic_rate, of a random topic).
struct SyntheticCorpusConfig {
  std::size_t tokens = 1'000'000;
  std::size_t topics = 40;
  std::size_t words_per_topic = 150;
  std::size_t function_words = 100;
  double function_rate = 0.45;
  double off_topic_rate = 0.05;
  double zipf_exponent = 1.0;
  std::size_t min_document = 15;
  std::size_t max_document = 45;
  // Content words emit their modal tag with this probability.
  double tag_fidelity = 0.9;
  bool tagged = true;
  std::uint64_t seed = 7;
};

struct SyntheticCorpus {
  CorpusSnapshot snapshot;
  std::vector<std::string> function_words;
  // topic_words[t] lists topic t's words, most frequent first.
  std::vector<std::vector<std::string>> topic_words;
};

SyntheticCorpus generate_synthetic_corpus(const SyntheticCorpusConfig& config);

}  // namespace lingshift
