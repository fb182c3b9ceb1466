#include "lingshift/series.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "lingshift/alignment.hpp"
#include "lingshift/corpus.hpp"
#include "lingshift/csv.hpp"
#include "lingshift/error.hpp"

namespace lingshift {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::frequency:
      return "frequency";
    case Method::syntactic:
      return "syntactic";
    case Method::distributional:
      return "distributional";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "frequency") return Method::frequency;
  if (name == "syntactic") return Method::syntactic;
  if (name == "distributional") return Method::distributional;
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

SeriesEnsemble::SeriesEnsemble(Method method, std::vector<std::string> words,
                               std::vector<std::string> labels,
                               RowMatrix values)
    : method_(method),
      words_(std::move(words)),
      labels_(std::move(labels)),
      values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.rows()) != words_.size() ||
      static_cast<std::size_t>(values_.cols()) != labels_.size()) {
    throw InvalidArgument("series ensemble shape does not match its labels");
  }
  if (!values_.allFinite()) throw InvalidArgument("series values must be finite");
}

std::span<const double> SeriesEnsemble::row(std::uint32_t word) const {
  if (word >= words_.size()) throw InvalidArgument("series row out of range");
  return {values_.row(word).data(), labels_.size()};
}

WordTimeSeries SeriesEnsemble::series(std::uint32_t word) const {
  const auto r = row(word);
  return {words_[word], method_, std::vector<double>(r.begin(), r.end())};
}

WordTimeSeries frequency_series(const Vocabulary& vocab,
                                const TemporalCorpus& corpus,
                                std::string_view word) {
  const std::uint32_t id = vocab.id(word);
  if (vocab.snapshot_count() != corpus.size()) {
    throw InvalidArgument("vocabulary was built for a different corpus");
  }
  WordTimeSeries out{std::string(word), Method::frequency, {}};
  for (std::size_t t = 0; t < corpus.size(); ++t) {
    const double count = static_cast<double>(vocab.count(id, t));
    const double total = static_cast<double>(corpus[t].token_count());
    out.values.push_back(std::log(count / total));
  }
  return out;
}

SeriesEnsemble frequency_ensemble(const Vocabulary& vocab,
                                  const TemporalCorpus& corpus) {
  RowMatrix values(static_cast<Eigen::Index>(vocab.size()),
                   static_cast<Eigen::Index>(corpus.size()));
  for (std::uint32_t w = 0; w < vocab.size(); ++w) {
    const auto s = frequency_series(vocab, corpus, vocab.word(w));
    for (std::size_t t = 0; t < s.values.size(); ++t) {
      values(w, static_cast<Eigen::Index>(t)) = s.values[t];
    }
  }
  return SeriesEnsemble(Method::frequency, vocab.words(), corpus.labels(),
                        std::move(values));
}

double jsd(const PosDistribution& p, const PosDistribution& q) {
  std::set<std::string_view> tags;
  for (const auto& kv : p.probabilities()) tags.insert(kv.first);
  for (const auto& kv : q.probabilities()) tags.insert(kv.first);
  double kl_p = 0.0;
  double kl_q = 0.0;
  for (const auto tag : tags) {
    const double a = p.probability(tag);
    const double b = q.probability(tag);
    const double m = 0.5 * (a + b);
    if (a > 0.0) kl_p += a * std::log2(a / m);
    if (b > 0.0) kl_q += b * std::log2(b / m);
  }
  return std::clamp(0.5 * kl_p + 0.5 * kl_q, 0.0, 1.0);
}

WordTimeSeries syntactic_series(const TemporalCorpus& corpus,
                                std::string_view word) {
  if (corpus.size() == 0) throw InvalidArgument("corpus has no snapshots");
  const PosDistribution base = pos_distribution(corpus[0], word);
  WordTimeSeries out{std::string(word), Method::syntactic, {0.0}};
  for (std::size_t t = 1; t < corpus.size(); ++t) {
    out.values.push_back(jsd(base, pos_distribution(corpus[t], word)));
  }
  return out;
}

SeriesEnsemble syntactic_ensemble(const TemporalCorpus& corpus,
                                  const Vocabulary& vocab) {
  if (!corpus.tagged()) {
    throw InvalidArgument("the syntactic method needs a POS-tagged corpus");
  }
  const auto base = pos_distributions(corpus[0], vocab);
  RowMatrix values = RowMatrix::Zero(static_cast<Eigen::Index>(vocab.size()),
                                     static_cast<Eigen::Index>(corpus.size()));
  for (std::size_t t = 1; t < corpus.size(); ++t) {
    const auto dists = pos_distributions(corpus[t], vocab);
    for (std::uint32_t w = 0; w < vocab.size(); ++w) {
      values(w, static_cast<Eigen::Index>(t)) = jsd(base[w], dists[w]);
    }
  }
  return SeriesEnsemble(Method::syntactic, vocab.words(), corpus.labels(),
                        std::move(values));
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("cosine of vectors with different sizes");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw InvalidArgument("cosine distance of a zero-norm vector");
  }
  const double cosine = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
  return 1.0 - cosine;
}

namespace {

double displacement(const AlignmentSet& alignments, std::uint32_t w,
                    std::size_t t) {
  const auto d = static_cast<std::size_t>(alignments.warped(0).cols());
  const auto row = static_cast<Eigen::Index>(w);
  try {
    return cosine_distance({alignments.warped(t).row(row).data(), d},
                           {alignments.warped(0).row(row).data(), d});
  } catch (const InvalidArgument&) {
    throw InvalidArgument("warped vector of '" + alignments.words()[w] +
                          "' at snapshot '" + alignments.labels()[t] +
                          "' has zero norm");
  }
}

}  // namespace

WordTimeSeries distributional_series(const AlignmentSet& alignments,
                                     std::string_view word) {
  const auto& words = alignments.words();
  const auto it = std::find(words.begin(), words.end(), word);
  if (it == words.end()) {
    throw UnknownWord("word '" + std::string(word) + "' is not aligned");
  }
  const auto w = static_cast<std::uint32_t>(it - words.begin());
  WordTimeSeries out{std::string(word), Method::distributional, {}};
  for (std::size_t t = 0; t < alignments.snapshot_count(); ++t) {
    out.values.push_back(displacement(alignments, w, t));
  }
  return out;
}

SeriesEnsemble distributional_ensemble(const AlignmentSet& alignments) {
  RowMatrix values(static_cast<Eigen::Index>(alignments.size()),
                   static_cast<Eigen::Index>(alignments.snapshot_count()));
  for (std::uint32_t w = 0; w < alignments.size(); ++w) {
    for (std::size_t t = 0; t < alignments.snapshot_count(); ++t) {
      values(w, static_cast<Eigen::Index>(t)) = displacement(alignments, w, t);
    }
  }
  return SeriesEnsemble(Method::distributional, alignments.words(),
                        alignments.labels(), std::move(values));
}

void write_series_csv(std::ostream& out, const SeriesEnsemble& ensemble) {
  out << "word,method,snapshot,value\n";
  const std::string method(to_string(ensemble.method()));
  for (std::uint32_t w = 0; w < ensemble.size(); ++w) {
    const std::string word = csv::field(ensemble.words()[w]);
    const auto row = ensemble.row(w);
    for (std::size_t t = 0; t < ensemble.length(); ++t) {
      out << word << ',' << method << ',' << csv::field(ensemble.labels()[t])
          << ',' << csv::number(row[t], 9) << '\n';
    }
  }
  if (!out) throw IoError("failed to write series CSV");
}

}  // namespace lingshift
