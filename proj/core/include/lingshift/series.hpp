#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lingshift/embedding.hpp"

namespace lingshift {

class AlignmentSet;
class PosDistribution;
class TemporalCorpus;
class Vocabulary;

enum class Method { frequency, syntactic, distributional };

std::string_view to_string(Method method);
// Throws InvalidArgument for an unknown name.
Method parse_method(std::string_view name);

struct WordTimeSeries {
  std::string word;
  Method method = Method::frequency;
  std::vector<double> values;  // one per snapshot
};

// |V| x n matrix of series, rows in vocabulary-id order.
class SeriesEnsemble {
 public:
  SeriesEnsemble(Method method, std::vector<std::string> words,
                 std::vector<std::string> labels, RowMatrix values);

  Method method() const noexcept { return method_; }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const RowMatrix& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return words_.size(); }
  std::size_t length() const noexcept { return labels_.size(); }

  std::span<const double> row(std::uint32_t word) const;
  WordTimeSeries series(std::uint32_t word) const;

 private:
  Method method_;
  std::vector<std::string> words_;
  std::vector<std::string> labels_;
  RowMatrix values_;
};

// ln(count_t(w) / |C_t|) per snapshot.
WordTimeSeries frequency_series(const Vocabulary& vocab,
                                const TemporalCorpus& corpus,
                                std::string_view word);
SeriesEnsemble frequency_ensemble(const Vocabulary& vocab,
                                  const TemporalCorpus& corpus);

// Jensen-Shannon divergence in bits, over the union of both tag sets.
double jsd(const PosDistribution& p, const PosDistribution& q);

// jsd(Q_0, Q_t) per snapshot; needs a tagged corpus.
WordTimeSeries syntactic_series(const TemporalCorpus& corpus,
                                std::string_view word);
SeriesEnsemble syntactic_ensemble(const TemporalCorpus& corpus,
                                  const Vocabulary& vocab);

// 1 - cos(a, b), in [0, 2]. Throws InvalidArgument on a zero-norm input.
double cosine_distance(std::span<const double> a, std::span<const double> b);

// 1 - cos(phi_t(w) W_{t->0}(w), phi_0(w)) per snapshot, 0 at the base.
WordTimeSeries distributional_series(const AlignmentSet& alignments,
                                     std::string_view word);
SeriesEnsemble distributional_ensemble(const AlignmentSet& alignments);

// Long form "word,method,snapshot,value", 9 significant digits.
void write_series_csv(std::ostream& out, const SeriesEnsemble& ensemble);

}  // namespace lingshift
