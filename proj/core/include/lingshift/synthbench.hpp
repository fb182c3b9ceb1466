#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lingshift/alignment.hpp"
#include "lingshift/changepoint.hpp"
#include "lingshift/corpus.hpp"
#include "lingshift/embedding.hpp"
#include "lingshift/series.hpp"

namespace lingshift {

class Rng;

// Replace donor occurrences by the receptor with probability p_replacement in
// snapshots [begin, end).
struct PerturbationPlan {
  std::string donor;
  std::string receptor;
  double p_replacement = 0.0;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::uint64_t seed = 0;

  void validate(std::size_t snapshot_count) const;
};

// n identical copies labeled "0".."n-1". Needs n >= 2.
TemporalCorpus duplicate_corpus(const CorpusSnapshot& base, std::size_t n);

// Each donor occurrence in range is replaced independently, drawing from a
// sub-stream per snapshot. Token counts are preserved. In tagged corpora a
// replaced token takes the receptor's modal tag in that snapshot.
TemporalCorpus perturb(const TemporalCorpus& corpus,
                       const PerturbationPlan& plan);
TemporalCorpus perturb(const TemporalCorpus& corpus,
                       std::span<const PerturbationPlan> plans);

struct WordPair {
  std::string donor;
  std::string receptor;
};

// One word per line; blank lines and '#' comments ignored.
std::set<std::string, std::less<>> read_stopwords(std::istream& in);

// `count` pairs over 2*count distinct non-stopword vocabulary words drawn
// uniformly. With same_pos both words of a pair share their modal tag in the
// (tagged) base snapshot. Throws InvalidArgument when too few words qualify.
std::vector<WordPair> sample_word_pairs(
    const Vocabulary& vocab, const CorpusSnapshot& base, std::size_t count,
    bool same_pos, const std::set<std::string, std::less<>>& stopwords,
    Rng& rng);

// Mean of 1/rank. Throws on an empty list or a rank below 1.
double mrr(std::span<const std::size_t> ranks);

// Ascending p-value, then descending max z-score, then word id.
std::vector<std::string> rank_words_by_pvalue(
    std::span<const ChangePointResult> results);

struct BenchConfig {
  std::size_t snapshots = 20;
  // First perturbed snapshot; defaults to snapshots / 2.
  std::optional<std::size_t> perturb_from;
  std::size_t pairs = 20;
  bool same_pos = false;
  std::vector<double> p_grid{0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<Method> methods{Method::frequency, Method::distributional};
  std::uint64_t min_count = 5;
  TrainingConfig training;
  AlignmentConfig alignment;
  DetectorConfig detector;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

struct BenchRow {
  Method method = Method::frequency;
  double p_replacement = 0.0;
  std::size_t pair_id = 0;
  std::string donor;
  std::string receptor;
  std::size_t rank = 0;
  double mrr_contrib = 0.0;  // 1 / (rank * pairs)
};

struct BenchResult {
  Method method = Method::frequency;
  double p_replacement = 0.0;
  std::vector<std::size_t> ranks;
  double mrr = 0.0;
};

struct BenchReport {
  std::vector<WordPair> pairs;
  std::vector<BenchRow> rows;
  std::vector<BenchResult> summaries;

  // Summary for (method, p); throws InvalidArgument if absent.
  const BenchResult& summary(Method method, double p_replacement) const;
};

using BenchProgress = std::function<void(const std::string&)>;

// Duplicates the base snapshot, samples pairs once, then for every
// p_replacement perturbs the later snapshots, builds each method's series,
// runs the detector and ranks the receptors.
BenchReport run_bench(const CorpusSnapshot& base,
                      const std::set<std::string, std::less<>>& stopwords,
                      const BenchConfig& config,
                      const BenchProgress& progress = {});

// "method,p_replacement,pair_id,donor,receptor,rank,mrr_contrib" rows, then a
// summary row per (method, p_replacement) with pair_id "all" and the MRR in
// the last column.
void write_bench_csv(std::ostream& out, const BenchReport& report);

}  // namespace lingshift
