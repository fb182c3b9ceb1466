#include "lingshift/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "lingshift/error.hpp"
#include "lingshift/text.hpp"

namespace lingshift {

std::uint32_t Lexicon::intern(std::string_view s) {
  std::string key(s);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(strings_.size());
  strings_.push_back(key);
  ids_.emplace(std::move(key), id);
  return id;
}

std::optional<std::uint32_t> Lexicon::find(std::string_view s) const {
  auto it = ids_.find(std::string(s));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

CorpusSnapshot::CorpusSnapshot(SnapshotLabel label,
                               std::shared_ptr<const Lexicon> words,
                               std::shared_ptr<const Lexicon> tags,
                               std::vector<std::uint32_t> tokens,
                               std::vector<std::uint32_t> token_tags,
                               std::vector<std::size_t> doc_offsets)
    : label_(std::move(label)),
      words_(std::move(words)),
      tags_(std::move(tags)),
      tokens_(std::move(tokens)),
      token_tags_(std::move(token_tags)),
      doc_offsets_(std::move(doc_offsets)) {
  if (!words_) throw InvalidArgument("snapshot requires a lexicon");
  if (doc_offsets_.empty()) doc_offsets_.push_back(0);
  if (doc_offsets_.front() != 0 || doc_offsets_.back() != tokens_.size() ||
      !std::is_sorted(doc_offsets_.begin(), doc_offsets_.end())) {
    throw InvalidArgument("document offsets do not cover the token stream");
  }
  if (tags_ && token_tags_.size() != tokens_.size()) {
    throw InvalidArgument("tagged snapshot needs one tag per token");
  }
  if (!tags_ && !token_tags_.empty()) {
    throw InvalidArgument("tags given without a tag lexicon");
  }
  counts_.assign(words_->size(), 0);
  for (auto id : tokens_) {
    if (id >= counts_.size()) throw InvalidArgument("token id out of range");
    ++counts_[id];
  }
}

std::span<const std::uint32_t> CorpusSnapshot::document(std::size_t d) const {
  const std::size_t b = doc_offsets_.at(d);
  const std::size_t e = doc_offsets_.at(d + 1);
  return std::span<const std::uint32_t>(tokens_).subspan(b, e - b);
}

std::span<const std::uint32_t> CorpusSnapshot::document_tags(
    std::size_t d) const {
  if (!tagged()) return {};
  const std::size_t b = doc_offsets_.at(d);
  const std::size_t e = doc_offsets_.at(d + 1);
  return std::span<const std::uint32_t>(token_tags_).subspan(b, e - b);
}

const Lexicon& CorpusSnapshot::tags() const {
  if (!tags_) throw InvalidArgument("snapshot '" + label_.label + "' is untagged");
  return *tags_;
}

std::uint64_t CorpusSnapshot::count(std::string_view word) const {
  const auto id = words_->find(word);
  return id ? counts_[*id] : 0;
}

CorpusSnapshot CorpusSnapshot::relabeled(SnapshotLabel label) const {
  CorpusSnapshot copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

bool CorpusSnapshot::same_content(const CorpusSnapshot& other) const {
  if (tokens_.size() != other.tokens_.size() ||
      doc_offsets_ != other.doc_offsets_ || tagged() != other.tagged()) {
    return false;
  }
  if (words_ == other.words_ && tags_ == other.tags_) {
    return tokens_ == other.tokens_ && token_tags_ == other.token_tags_;
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (words_->at(tokens_[i]) != other.words_->at(other.tokens_[i])) {
      return false;
    }
    if (tagged() &&
        tags_->at(token_tags_[i]) != other.tags_->at(other.token_tags_[i])) {
      return false;
    }
  }
  return true;
}

CorpusSnapshot parse_snapshot(std::istream& in, const LoadOptions& options,
                              SnapshotLabel label) {
  const bool tagged = options.format == CorpusFormat::tagged;
  auto words = std::make_shared<Lexicon>();
  std::shared_ptr<Lexicon> tags = tagged ? std::make_shared<Lexicon>() : nullptr;
  std::vector<std::uint32_t> tokens;
  std::vector<std::uint32_t> token_tags;
  std::vector<std::size_t> offsets{0};

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (std::string_view field : text::split_whitespace(line)) {
      std::string_view word = field;
      if (tagged) {
        const auto cut = field.rfind('_');
        if (cut == std::string_view::npos || cut == 0 ||
            cut + 1 == field.size()) {
          throw ParseError("token '" + std::string(field) +
                               "' is not of the form word_TAG",
                           line_no);
        }
        word = field.substr(0, cut);
        token_tags.push_back(tags->intern(field.substr(cut + 1)));
      }
      tokens.push_back(options.lowercase
                           ? words->intern(text::to_lower_utf8(word))
                           : words->intern(word));
    }
    offsets.push_back(tokens.size());
  }
  if (in.bad()) throw IoError("read failure in snapshot '" + label.label + "'");
  return CorpusSnapshot(std::move(label), std::move(words), std::move(tags),
                        std::move(tokens), std::move(token_tags),
                        std::move(offsets));
}

CorpusSnapshot load_snapshot(const std::filesystem::path& path,
                             const LoadOptions& options, SnapshotLabel label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file " + path.string());
  if (label.label.empty()) label.label = path.stem().string();
  try {
    return parse_snapshot(in, options, std::move(label));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_snapshot(std::ostream& out, const CorpusSnapshot& snapshot) {
  for (std::size_t d = 0; d < snapshot.document_count(); ++d) {
    const auto doc = snapshot.document(d);
    const auto tags = snapshot.document_tags(d);
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (i) out << ' ';
      out << snapshot.words().at(doc[i]);
      if (snapshot.tagged()) out << '_' << snapshot.tags().at(tags[i]);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failure for snapshot " + snapshot.label().label);
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw ParseError("manifest line must be 'label<TAB>path'", line_no);
    }
    std::filesystem::path p = line.substr(tab + 1);
    if (p.is_relative()) p = path.parent_path() / p;
    entries.push_back({line.substr(0, tab), p});
  }
  if (entries.empty()) throw ParseError("manifest " + path.string() + " is empty");
  return entries;
}

TemporalCorpus::TemporalCorpus(std::vector<CorpusSnapshot> snapshots) {
  std::set<std::string> seen;
  snapshots_.reserve(snapshots.size());
  for (std::size_t t = 0; t < snapshots.size(); ++t) {
    SnapshotLabel label = snapshots[t].label();
    if (label.label.empty()) label.label = std::to_string(t);
    if (!seen.insert(label.label).second) {
      throw InvalidArgument("duplicate snapshot label '" + label.label + "'");
    }
    label.index = t;
    snapshots_.push_back(snapshots[t].relabeled(std::move(label)));
  }
}

bool TemporalCorpus::tagged() const noexcept {
  return !snapshots_.empty() &&
         std::all_of(snapshots_.begin(), snapshots_.end(),
                     [](const CorpusSnapshot& s) { return s.tagged(); });
}

std::vector<std::string> TemporalCorpus::labels() const {
  std::vector<std::string> out;
  for (const auto& s : snapshots_) out.push_back(s.label().label);
  return out;
}

TemporalCorpus load_temporal_corpus(const std::filesystem::path& manifest,
                                    const LoadOptions& options) {
  std::vector<CorpusSnapshot> snapshots;
  for (const auto& entry : read_manifest(manifest)) {
    snapshots.push_back(load_snapshot(entry.path, options,
                                      {entry.label, snapshots.size()}));
  }
  return TemporalCorpus(std::move(snapshots));
}

Vocabulary::Vocabulary(std::vector<std::string> words,
                       std::vector<std::uint64_t> counts,
                       std::size_t snapshot_count, std::uint64_t min_count)
    : words_(std::move(words)),
      counts_(std::move(counts)),
      snapshot_count_(snapshot_count),
      min_count_(min_count) {
  if (counts_.size() != words_.size() * snapshot_count_) {
    throw InvalidArgument("vocabulary count table has the wrong shape");
  }
  for (std::uint32_t id = 0; id < words_.size(); ++id) {
    if (!ids_.emplace(words_[id], id).second) {
      throw InvalidArgument("duplicate vocabulary word '" + words_[id] + "'");
    }
  }
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t Vocabulary::id(std::string_view word) const {
  if (auto id = find(word)) return *id;
  throw UnknownWord("word '" + std::string(word) + "' is not in the vocabulary");
}

std::uint64_t Vocabulary::count(std::uint32_t id, std::size_t snapshot) const {
  if (id >= words_.size() || snapshot >= snapshot_count_) {
    throw InvalidArgument("vocabulary count index out of range");
  }
  return counts_[static_cast<std::size_t>(id) * snapshot_count_ + snapshot];
}

std::vector<std::uint64_t> Vocabulary::counts_in(std::size_t snapshot) const {
  std::vector<std::uint64_t> out(words_.size());
  for (std::uint32_t id = 0; id < words_.size(); ++id) out[id] = count(id, snapshot);
  return out;
}

std::vector<std::int32_t> Vocabulary::index_map(
    const CorpusSnapshot& snapshot) const {
  const Lexicon& lex = snapshot.words();
  std::vector<std::int32_t> out(lex.size(), kOutOfVocabulary);
  for (std::uint32_t i = 0; i < lex.size(); ++i) {
    if (auto id = find(lex.at(i))) out[i] = static_cast<std::int32_t>(*id);
  }
  return out;
}

Vocabulary build_common_vocabulary(const TemporalCorpus& corpus,
                                   std::uint64_t min_count) {
  if (corpus.size() == 0) throw InvalidArgument("corpus has no snapshots");
  if (min_count == 0) throw InvalidArgument("min_count must be positive");

  struct Candidate {
    std::string word;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
  };
  std::vector<Candidate> candidates;
  const CorpusSnapshot& first = corpus[0];
  for (std::uint32_t i = 0; i < first.words().size(); ++i) {
    const std::string& w = first.words().at(i);
    Candidate c{w, {}, 0};
    bool keep = true;
    for (const auto& snap : corpus) {
      const std::uint64_t n = snap.count(w);
      if (n < min_count) {
        keep = false;
        break;
      }
      c.counts.push_back(n);
      c.total += n;
    }
    if (keep) candidates.push_back(std::move(c));
  }
  if (candidates.empty()) {
    throw InvalidArgument("no word reaches min_count=" +
                          std::to_string(min_count) + " in every snapshot");
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.total != b.total) return a.total > b.total;
              return a.word < b.word;
            });
  std::vector<std::string> words;
  std::vector<std::uint64_t> counts;
  for (auto& c : candidates) {
    words.push_back(std::move(c.word));
    counts.insert(counts.end(), c.counts.begin(), c.counts.end());
  }
  return Vocabulary(std::move(words), std::move(counts), corpus.size(),
                    min_count);
}

PosDistribution::PosDistribution(Map probabilities)
    : probabilities_(std::move(probabilities)) {
  if (probabilities_.empty()) throw InvalidArgument("empty POS distribution");
  double sum = 0.0;
  for (const auto& [tag, p] : probabilities_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidArgument("POS probability for '" + tag + "' is invalid");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidArgument("POS probabilities do not sum to 1");
  }
}

PosDistribution PosDistribution::from_counts(
    const std::map<std::string, std::uint64_t, std::less<>>& counts) {
  std::uint64_t total = 0;
  for (const auto& kv : counts) total += kv.second;
  if (total == 0) throw InvalidArgument("empty POS distribution");
  Map probs;
  for (const auto& [tag, n] : counts) {
    if (n > 0) probs.emplace(tag, static_cast<double>(n) / static_cast<double>(total));
  }
  return PosDistribution(std::move(probs));
}

double PosDistribution::probability(std::string_view tag) const {
  auto it = probabilities_.find(tag);
  return it == probabilities_.end() ? 0.0 : it->second;
}

const std::string& PosDistribution::modal_tag() const {
  auto best = probabilities_.begin();
  for (auto it = probabilities_.begin(); it != probabilities_.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

PosDistribution pos_distribution(const CorpusSnapshot& snapshot,
                                 std::string_view word) {
  const Lexicon& tags = snapshot.tags();
  const auto id = snapshot.words().find(word);
  if (!id || snapshot.count(*id) == 0) {
    throw UnknownWord("word '" + std::string(word) + "' does not occur in snapshot '" +
                      snapshot.label().label + "'");
  }
  std::vector<std::uint64_t> per_tag(tags.size(), 0);
  const auto tokens = snapshot.tokens();
  const auto token_tags = snapshot.token_tags();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == *id) ++per_tag[token_tags[i]];
  }
  std::map<std::string, std::uint64_t, std::less<>> counts;
  for (std::uint32_t t = 0; t < per_tag.size(); ++t) {
    if (per_tag[t]) counts.emplace(tags.at(t), per_tag[t]);
  }
  return PosDistribution::from_counts(counts);
}

std::vector<PosDistribution> pos_distributions(const CorpusSnapshot& snapshot,
                                               const Vocabulary& vocab) {
  const Lexicon& tags = snapshot.tags();
  const auto map = vocab.index_map(snapshot);
  std::vector<std::map<std::uint32_t, std::uint64_t>> per_word(vocab.size());
  const auto tokens = snapshot.tokens();
  const auto token_tags = snapshot.token_tags();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::int32_t v = map[tokens[i]];
    if (v != Vocabulary::kOutOfVocabulary) ++per_word[v][token_tags[i]];
  }
  std::vector<PosDistribution> out;
  out.reserve(vocab.size());
  for (std::uint32_t v = 0; v < vocab.size(); ++v) {
    if (per_word[v].empty()) {
      throw UnknownWord("word '" + vocab.word(v) + "' does not occur in snapshot '" +
                        snapshot.label().label + "'");
    }
    std::map<std::string, std::uint64_t, std::less<>> counts;
    for (const auto& [tag, n] : per_word[v]) counts.emplace(tags.at(tag), n);
    out.push_back(PosDistribution::from_counts(counts));
  }
  return out;
}

}  // namespace lingshift
