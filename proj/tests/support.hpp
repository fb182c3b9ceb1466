#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "lingshift/corpus.hpp"
#include "lingshift/embedding.hpp"
#include "lingshift/random.hpp"

namespace lingshift::testing {

inline CorpusSnapshot snapshot_from(const std::string& text, const std::string& label = "0",
                                    CorpusFormat format = CorpusFormat::plain) {
  std::istringstream in(text);
  return parse_snapshot(in, {format, false}, {label, 0});
}

inline TemporalCorpus corpus_from(const std::vector<std::string>& texts,
                                  CorpusFormat format = CorpusFormat::plain) {
  std::vector<CorpusSnapshot> snaps;
  for (std::size_t t = 0; t < texts.size(); ++t) {
    snaps.push_back(snapshot_from(texts[t], std::to_string(t), format));
  }
  return TemporalCorpus(std::move(snaps));
}

// Documents drawn from two disjoint topics ("a0".."aN" and "b0".."bN").
inline std::string two_topic_text(std::size_t docs, std::size_t doc_len,
                                  std::size_t words_per_topic, std::uint64_t seed) {
  Rng rng(seed);
  std::string text;
  for (std::size_t d = 0; d < docs; ++d) {
    const char topic = d % 2 ? 'b' : 'a';
    for (std::size_t i = 0; i < doc_len; ++i) {
      text += topic;
      text += std::to_string(rng.below(words_per_topic));
      text += i + 1 < doc_len ? ' ' : '\n';
    }
  }
  return text;
}

inline RowMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  RowMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

// Q factor of a Gaussian matrix, sign-fixed so the draw is Haar-uniform.
inline RowMatrix random_orthogonal(Eigen::Index d, Rng& rng) {
  const Eigen::MatrixXd a = gaussian_matrix(d, d, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (r(i, i) < 0) q.col(i) *= -1.0;
  }
  return q;
}

inline std::vector<std::string> numbered_words(std::size_t n) {
  std::vector<std::string> words;
  for (std::size_t i = 0; i < n; ++i) words.push_back("w" + std::to_string(i));
  return words;
}

inline EmbeddingSpace random_space(std::size_t n, std::size_t d, Rng& rng,
                                   const std::string& label = "0") {
  return EmbeddingSpace(label, numbered_words(n),
                        gaussian_matrix(static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(d), rng),
                        false)
      .normalized_copy();
}

inline EmbeddingSpace rotated(const EmbeddingSpace& space, const RowMatrix& q,
                              const std::string& label) {
  return EmbeddingSpace(label, space.words(), space.vectors() * q, true);
}

}  // namespace lingshift::testing
