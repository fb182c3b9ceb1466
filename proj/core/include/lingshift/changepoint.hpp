#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lingshift/series.hpp"

namespace lingshift {

// Cross-word z-scores: Z_t(w) = (T_t(w) - mean_t) / stddev_t, with the
// population standard deviation over words. A column with zero spread is
// all zeros.
struct NormalizedEnsemble {
  Method method = Method::frequency;
  std::vector<std::string> words;
  std::vector<std::string> labels;
  RowMatrix z;
  std::vector<double> mean;
  std::vector<double> stddev;

  std::span<const double> row(std::uint32_t word) const {
    return {z.row(word).data(), labels.size()};
  }
};

// Needs at least two words.
NormalizedEnsemble normalize_ensemble(const SeriesEnsemble& ensemble);

// K_j = mean(S[j..n-1]) - mean(S[0..j-1]) for pivots j = 1..n-1, returned
// at index j-1. Needs n >= 2.
std::vector<double> mean_shift(std::span<const double> series);

// Identifies the random sub-streams used for one word's bootstrap: sample s
// draws from substream_seed(seed, word, s).
struct BootstrapStream {
  std::uint64_t seed = 0;
  std::uint64_t word = 0;
};

// Fraction of `samples` uniform random permutations P of the series with
// K_j(P) strictly greater than the observed K_j, per pivot (length n-1).
std::vector<double> bootstrap_pvalues(std::span<const double> z,
                                      std::size_t samples,
                                      BootstrapStream stream);

struct DetectorConfig {
  std::size_t bootstrap = 1000;
  // Z-score gate. +inf closes it, -inf disables it.
  double gamma = 1.75;
  // Reporting threshold: significant when the word's p-value is below it.
  double significance = 0.05;
  std::uint64_t seed = 1;

  void validate() const;
};

struct ChangePointResult {
  std::string word;
  std::uint32_t word_id = 0;
  bool significant = false;
  // Pivot j in 1..n-1: the first snapshot after the shift.
  std::optional<std::size_t> change_index;
  std::string change_label;
  // Minimum over the gated pivots; 1 when no pivot passes the gate.
  double p_value = 1.0;
  std::vector<double> pvalues;  // per pivot, index j-1
  double max_zscore = 0.0;
};

// Gate C = {j in 1..n-1 : z[j] >= gamma}; the change point is the gated pivot
// with the smallest p-value, the earliest on ties.
ChangePointResult detect(std::span<const double> z,
                         const DetectorConfig& config, BootstrapStream stream);

// detect() for every word, each on its own sub-stream (word id). The result
// does not depend on the thread count.
std::vector<ChangePointResult> detect_all(const NormalizedEnsemble& ensemble,
                                          const DetectorConfig& config,
                                          std::size_t threads = 1);

// "word,method,significant,ecp_label,p_value,max_zscore", sorted by ascending
// p-value, then descending max z-score, then word.
void write_report_csv(std::ostream& out, Method method,
                      std::vector<ChangePointResult> results);

}  // namespace lingshift
