#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lingshift/huffman.hpp"

namespace lingshift {

class CorpusSnapshot;
class TemporalCorpus;
class Vocabulary;
class Rng;

// Vectors are rows.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct TrainingConfig {
  std::size_t dim = 200;
  std::size_t window = 10;
  double subsample = 1e-5;
  double alpha = 0.025;
  // Defaults to 1e-4 * alpha.
  std::optional<double> min_alpha;
  std::size_t max_epochs = 5;
  double tolerance = 1e-4;
  std::uint64_t seed = 1;

  double effective_min_alpha() const { return min_alpha.value_or(1e-4 * alpha); }
  // Throws InvalidArgument.
  void validate() const;
};

// Per-snapshot word vectors in vocabulary-id order.
class EmbeddingSpace {
 public:
  EmbeddingSpace(std::string label, std::vector<std::string> words,
                 RowMatrix vectors, bool normalized);

  const std::string& label() const noexcept { return label_; }
  const std::vector<std::string>& words() const noexcept { return words_; }
  std::size_t size() const noexcept { return words_.size(); }
  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(vectors_.cols());
  }
  bool normalized() const noexcept { return normalized_; }

  const RowMatrix& vectors() const noexcept { return vectors_; }
  auto row(std::uint32_t id) const { return vectors_.row(id); }
  std::optional<std::uint32_t> find(std::string_view word) const;

  // Rows scaled to unit L2 norm. Throws InvalidArgument on a zero row.
  EmbeddingSpace normalized_copy() const;
  EmbeddingSpace relabeled(std::string label) const;

  friend bool operator==(const EmbeddingSpace& a, const EmbeddingSpace& b) {
    return a.words_ == b.words_ && a.normalized_ == b.normalized_ &&
           a.vectors_.rows() == b.vectors_.rows() &&
           a.vectors_.cols() == b.vectors_.cols() && a.vectors_ == b.vectors_;
  }

 private:
  std::string label_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  RowMatrix vectors_;
  bool normalized_;
};

// Skipgram parameters: input (word) vectors and hierarchical-softmax node
// vectors.
struct SkipGramModel {
  RowMatrix input;  // |V| x d
  RowMatrix nodes;  // (|V|-1) x d

  // Word vectors uniform in [-0.5/d, 0.5/d], node vectors zero.
  static SkipGramModel initialize(std::size_t vocab_size, std::size_t dim,
                                  Rng& rng);
};

// log Pr(target | input) along the target's tree path, natural log.
double hs_log_prob(const HuffmanTree& tree, const RowMatrix& nodes,
                   std::span<const double> input, std::uint32_t target);

// min(1, sqrt(threshold / frequency)); throws for frequency <= 0.
double subsample_keep_probability(double frequency, double threshold);

// One SGD step on -log Pr(context | center). Updates the center's input
// vector and the node vectors on the context's path; returns the loss before
// the update. Throws DivergenceError if the loss or an update is not finite.
double sgd_step(SkipGramModel& model, const HuffmanTree& tree,
                std::uint32_t center, std::uint32_t context, double alpha);
// Same with a caller-owned scratch buffer of length dim.
double sgd_step(SkipGramModel& model, const HuffmanTree& tree,
                std::uint32_t center, std::uint32_t context, double alpha,
                std::span<double> scratch);

struct ConvergenceCheck {
  double rho = 0.0;
  bool converged = false;
  // Rows with a zero vector on either side; each contributes cosine 0.
  std::size_t zero_vectors = 0;
};

// rho = mean cosine between matching rows; converged when 1 - rho <= tolerance.
ConvergenceCheck check_convergence(const RowMatrix& previous,
                                   const RowMatrix& current, double tolerance);

struct EpochStats {
  double loss = 0.0;  // total J over the epoch, before each update
  std::uint64_t pairs = 0;
  double rho = 0.0;
  double final_alpha = 0.0;
};

struct TrainingResult {
  EmbeddingSpace space;
  std::vector<EpochStats> epochs;
  bool converged = false;
};

TrainingResult train_snapshot(const CorpusSnapshot& snapshot,
                              const Vocabulary& vocab, const HuffmanTree& tree,
                              const TrainingConfig& config);

struct CorpusTrainingOptions {
  // Snapshots trained concurrently; 1 means strictly sequential.
  std::size_t threads = 1;
  // A snapshot whose content equals an earlier one reuses that result. This
  // is exact because training depends only on content, vocabulary and seed.
  bool reuse_identical = true;
};

std::vector<TrainingResult> train_corpus(const TemporalCorpus& corpus,
                                         const Vocabulary& vocab,
                                         const TrainingConfig& config,
                                         const CorpusTrainingOptions& options = {});

// Text format: "<vocab_size> <dim>" then "<word> <v1> ... <vd>" per line,
// 6 significant digits.
void write_embeddings(std::ostream& out, const EmbeddingSpace& space);
// Loaded spaces are marked unnormalized; call normalized_copy() as needed.
EmbeddingSpace read_embeddings(std::istream& in, std::string label);

}  // namespace lingshift
