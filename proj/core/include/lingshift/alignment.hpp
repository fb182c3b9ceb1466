#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lingshift/embedding.hpp"

namespace lingshift {

struct Neighbor {
  std::uint32_t word = 0;
  double similarity = 0.0;
};

// Neighbors in non-increasing similarity order, no duplicates.
using NeighborSet = std::vector<Neighbor>;

// The query word first, then its k-1 most cosine-similar other words (ties by
// ascending id). Requires a normalized space and 1 <= k <= |V|.
NeighborSet k_nearest(const EmbeddingSpace& space, std::uint32_t word,
                      std::size_t k);
NeighborSet k_nearest(const EmbeddingSpace& space, std::string_view word,
                      std::size_t k);

// Neighbor ids for every word at once, same ordering rules as k_nearest.
std::vector<std::vector<std::uint32_t>> all_k_nearest(
    const EmbeddingSpace& space, std::size_t k, std::size_t threads = 1);

// Per-word linear warp from a source snapshot onto a target snapshot:
// row vectors map as x -> x * transform.
struct AlignmentMap {
  std::string word;
  std::string source_label;
  std::string target_label;
  RowMatrix transform;  // d x d
  double residual = 0.0;  // sum of squared errors, without the ridge term
};

// Ridge least squares over the word's k nearest neighbors in the source space:
//   argmin_W sum ||source(w_i) W - target(w_i)||^2 + ridge ||W||_F^2
// With ridge == 0 a rank-deficient neighbor matrix raises RankDeficiencyError.
AlignmentMap learn_alignment(const EmbeddingSpace& source,
                             const EmbeddingSpace& target, std::uint32_t word,
                             std::size_t k, double ridge);
AlignmentMap learn_alignment(const EmbeddingSpace& source,
                             const EmbeddingSpace& target,
                             std::string_view word, std::size_t k,
                             double ridge);

// Same fit with the neighbor rows supplied by the caller.
AlignmentMap fit_alignment(const EmbeddingSpace& source,
                           const EmbeddingSpace& target, std::uint32_t word,
                           std::span<const std::uint32_t> neighbors,
                           double ridge);

struct AlignmentConfig {
  // Defaults to min(4 * dim, |V|).
  std::optional<std::size_t> k;
  double ridge = 1e-3;
  std::size_t threads = 1;
  // Full d x d transforms cost |V| * n * d^2 doubles; off unless asked for.
  bool keep_transforms = false;

  std::size_t effective_k(std::size_t dim, std::size_t vocab_size) const;
};

// Every snapshot warped onto snapshot 0, word by word.
class AlignmentSet {
 public:
  AlignmentSet(std::vector<std::string> labels, std::vector<std::string> words,
               std::vector<RowMatrix> warped, std::vector<double> residuals,
               std::vector<std::vector<RowMatrix>> transforms);

  std::size_t snapshot_count() const noexcept { return labels_.size(); }
  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& words() const noexcept { return words_; }

  // Row w holds phi_t(w) * W_{t->0}(w); for t = 0 it is phi_0(w) itself.
  const RowMatrix& warped(std::size_t t) const { return warped_.at(t); }
  // Zero for t = 0.
  double residual(std::uint32_t word, std::size_t t) const;
  bool has_transforms() const noexcept { return !transforms_.empty(); }
  // Requires keep_transforms; identity for t = 0.
  const RowMatrix& transform(std::uint32_t word, std::size_t t) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::string> words_;
  std::vector<RowMatrix> warped_;
  std::vector<double> residuals_;  // |V| x n row-major
  std::vector<std::vector<RowMatrix>> transforms_;  // [t][word]
};

// Needs at least two spaces sharing vocabulary and dimension. Errors from a
// single fit are rethrown naming the word and snapshot.
AlignmentSet align_all_to_base(std::span<const EmbeddingSpace> spaces,
                               const AlignmentConfig& config = {});

// "word,snapshot,residual" for every word and every snapshot after the base.
void write_alignment_csv(std::ostream& out, const AlignmentSet& alignments);

}  // namespace lingshift
