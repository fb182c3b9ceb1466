#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lingshift {

enum class CorpusFormat { plain, tagged };

struct LoadOptions {
  CorpusFormat format = CorpusFormat::plain;
  // Unicode simple lowercasing of word forms (tags are left alone).
  bool lowercase = false;
};

struct SnapshotLabel {
  std::string label;
  std::size_t index = 0;
};

// Append-only string interner. Ids are dense in insertion order.
class Lexicon {
 public:
  std::uint32_t intern(std::string_view s);
  std::optional<std::uint32_t> find(std::string_view s) const;
  const std::string& at(std::uint32_t id) const { return strings_.at(id); }
  std::size_t size() const noexcept { return strings_.size(); }

 private:
  std::vector<std::string> strings_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

// One time slice of the corpus. Tokens are stored as ids into a lexicon that
// may be shared with other snapshots; documents are contiguous token ranges.
// Immutable once built, so it can be shared freely across threads.
class CorpusSnapshot {
 public:
  CorpusSnapshot(SnapshotLabel label, std::shared_ptr<const Lexicon> words,
                 std::shared_ptr<const Lexicon> tags,
                 std::vector<std::uint32_t> tokens,
                 std::vector<std::uint32_t> token_tags,
                 std::vector<std::size_t> doc_offsets);

  const SnapshotLabel& label() const noexcept { return label_; }
  bool tagged() const noexcept { return tags_ != nullptr; }

  std::size_t token_count() const noexcept { return tokens_.size(); }
  std::size_t document_count() const noexcept {
    return doc_offsets_.size() - 1;
  }
  std::span<const std::uint32_t> document(std::size_t d) const;
  // Empty span for untagged snapshots.
  std::span<const std::uint32_t> document_tags(std::size_t d) const;
  std::span<const std::uint32_t> tokens() const noexcept { return tokens_; }
  std::span<const std::uint32_t> token_tags() const noexcept {
    return token_tags_;
  }
  std::span<const std::size_t> document_offsets() const noexcept {
    return doc_offsets_;
  }

  const Lexicon& words() const noexcept { return *words_; }
  const Lexicon& tags() const;
  const std::shared_ptr<const Lexicon>& shared_words() const noexcept {
    return words_;
  }
  const std::shared_ptr<const Lexicon>& shared_tags() const noexcept {
    return tags_;
  }

  // Occurrences of a surface form (0 when absent).
  std::uint64_t count(std::string_view word) const;
  std::uint64_t count(std::uint32_t lexicon_id) const {
    return lexicon_id < counts_.size() ? counts_[lexicon_id] : 0;
  }

  CorpusSnapshot relabeled(SnapshotLabel label) const;

  // Same token and tag streams, compared by surface form.
  bool same_content(const CorpusSnapshot& other) const;

 private:
  SnapshotLabel label_;
  std::shared_ptr<const Lexicon> words_;
  std::shared_ptr<const Lexicon> tags_;
  std::vector<std::uint32_t> tokens_;
  std::vector<std::uint32_t> token_tags_;
  std::vector<std::size_t> doc_offsets_;
  std::vector<std::uint64_t> counts_;
};

// Parses whitespace-tokenized text, one document per line. In tagged format
// each token is "word_TAG" split on the final underscore.
CorpusSnapshot parse_snapshot(std::istream& in, const LoadOptions& options,
                              SnapshotLabel label = {});
CorpusSnapshot load_snapshot(const std::filesystem::path& path,
                             const LoadOptions& options,
                             SnapshotLabel label = {});

// Writes the snapshot back in the on-disk format it was loaded from.
void write_snapshot(std::ostream& out, const CorpusSnapshot& snapshot);

struct ManifestEntry {
  std::string label;
  std::filesystem::path path;
};

// "label<TAB>path" per line; relative paths resolve against the manifest's
// directory. Blank lines and '#' comments are skipped.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

class TemporalCorpus {
 public:
  // Re-indexes snapshots 0..n-1 in the given order; labels must be unique.
  explicit TemporalCorpus(std::vector<CorpusSnapshot> snapshots);

  std::size_t size() const noexcept { return snapshots_.size(); }
  const CorpusSnapshot& operator[](std::size_t t) const {
    return snapshots_[t];
  }
  const CorpusSnapshot& at(std::size_t t) const { return snapshots_.at(t); }
  auto begin() const noexcept { return snapshots_.begin(); }
  auto end() const noexcept { return snapshots_.end(); }

  bool tagged() const noexcept;
  std::vector<std::string> labels() const;

 private:
  std::vector<CorpusSnapshot> snapshots_;
};

TemporalCorpus load_temporal_corpus(const std::filesystem::path& manifest,
                                    const LoadOptions& options);

// Words that occur at least min_count times in every snapshot, with
// per-snapshot counts. Ids are ordered by descending total count, then by
// byte order of the word.
class Vocabulary {
 public:
  static constexpr std::int32_t kOutOfVocabulary = -1;

  Vocabulary(std::vector<std::string> words,
             std::vector<std::uint64_t> counts, std::size_t snapshot_count,
             std::uint64_t min_count);

  std::size_t size() const noexcept { return words_.size(); }
  std::size_t snapshot_count() const noexcept { return snapshot_count_; }
  std::uint64_t min_count() const noexcept { return min_count_; }

  const std::string& word(std::uint32_t id) const { return words_.at(id); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  std::optional<std::uint32_t> find(std::string_view word) const;
  // Throws UnknownWord.
  std::uint32_t id(std::string_view word) const;

  std::uint64_t count(std::uint32_t id, std::size_t snapshot) const;
  // Counts of every word in one snapshot, indexed by word id.
  std::vector<std::uint64_t> counts_in(std::size_t snapshot) const;

  // Maps a snapshot's lexicon ids to vocabulary ids (kOutOfVocabulary for
  // words outside the vocabulary).
  std::vector<std::int32_t> index_map(const CorpusSnapshot& snapshot) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::uint64_t> counts_;  // row-major |V| x n
  std::size_t snapshot_count_;
  std::uint64_t min_count_;
};

// Throws InvalidArgument on an empty corpus or empty intersection.
Vocabulary build_common_vocabulary(const TemporalCorpus& corpus,
                                   std::uint64_t min_count);

// Maximum-likelihood tag distribution; probabilities sum to 1.
class PosDistribution {
 public:
  using Map = std::map<std::string, double, std::less<>>;

  explicit PosDistribution(Map probabilities);
  static PosDistribution from_counts(
      const std::map<std::string, std::uint64_t, std::less<>>& counts);

  double probability(std::string_view tag) const;
  const Map& probabilities() const noexcept { return probabilities_; }
  // Most probable tag; ties go to the lexicographically smallest tag.
  const std::string& modal_tag() const;

 private:
  Map probabilities_;
};

// Throws UnknownWord when the word is absent and InvalidArgument for an
// untagged snapshot.
PosDistribution pos_distribution(const CorpusSnapshot& snapshot,
                                 std::string_view word);
// One distribution per vocabulary id. Every vocabulary word must occur.
std::vector<PosDistribution> pos_distributions(const CorpusSnapshot& snapshot,
                                               const Vocabulary& vocab);

}  // namespace lingshift
