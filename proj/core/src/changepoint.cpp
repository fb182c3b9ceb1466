#include "lingshift/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "lingshift/csv.hpp"
#include "lingshift/error.hpp"
#include "lingshift/random.hpp"
#include "parallel.hpp"

namespace lingshift {
namespace {

// Writes K_j for j = 1..n-1 into out[j-1]; prefix/suffix are scratch.
void mean_shift_into(std::span<const double> s, std::span<double> out,
                     std::vector<double>& suffix) {
  const std::size_t n = s.size();
  suffix.assign(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + s[i];
  double prefix = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    prefix += s[j - 1];
    out[j - 1] = suffix[j] / static_cast<double>(n - j) -
                 prefix / static_cast<double>(j);
  }
}

}  // namespace

NormalizedEnsemble normalize_ensemble(const SeriesEnsemble& ensemble) {
  if (ensemble.size() < 2) {
    throw InvalidArgument("normalization needs at least two words");
  }
  const RowMatrix& v = ensemble.values();
  NormalizedEnsemble out{ensemble.method(), ensemble.words(), ensemble.labels(),
                         RowMatrix(v.rows(), v.cols()), {}, {}};
  const auto words = static_cast<double>(v.rows());
  for (Eigen::Index t = 0; t < v.cols(); ++t) {
    const double mean = v.col(t).sum() / words;
    const double var = (v.col(t).array() - mean).square().sum() / words;
    const double sd = std::sqrt(var);
    out.mean.push_back(mean);
    out.stddev.push_back(sd);
    if (sd > 0.0 && v.col(t).maxCoeff() > v.col(t).minCoeff()) {
      out.z.col(t) = (v.col(t).array() - mean) / sd;
    } else {
      out.z.col(t).setZero();
    }
  }
  return out;
}

std::vector<double> mean_shift(std::span<const double> series) {
  if (series.size() < 2) throw InvalidArgument("mean shift needs at least two points");
  std::vector<double> out(series.size() - 1);
  std::vector<double> suffix;
  mean_shift_into(series, out, suffix);
  return out;
}

std::vector<double> bootstrap_pvalues(std::span<const double> z,
                                      std::size_t samples,
                                      BootstrapStream stream) {
  if (samples < 1) throw InvalidArgument("bootstrap needs at least one sample");
  if (z.size() < 2) throw InvalidArgument("bootstrap needs at least two points");
  const std::size_t n = z.size();
  std::vector<double> suffix;
  std::vector<double> observed(n - 1);
  mean_shift_into(z, observed, suffix);
  // Exceedance thresholds, with a relative tolerance for rounding.
  std::vector<double> bound(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    bound[j] = observed[j] + 1e-12 * (1.0 + std::abs(observed[j]));
  }

  std::vector<std::uint64_t> exceed(n - 1, 0);
  std::vector<double> perm(n);
  std::vector<double> shifted(n - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    SplitMix64 rng(substream_seed(stream.seed, stream.word, s));
    std::copy(z.begin(), z.end(), perm.begin());
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.below(i + 1)]);
    }
    mean_shift_into(perm, shifted, suffix);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      if (shifted[j] > bound[j]) ++exceed[j];
    }
  }
  std::vector<double> p(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    p[j] = static_cast<double>(exceed[j]) / static_cast<double>(samples);
  }
  return p;
}

void DetectorConfig::validate() const {
  if (bootstrap < 1) throw InvalidArgument("bootstrap count must be >= 1");
  if (std::isnan(gamma)) throw InvalidArgument("gamma must be a number");
  if (!(significance > 0.0 && significance <= 1.0)) {
    throw InvalidArgument("significance threshold must be in (0, 1]");
  }
}

ChangePointResult detect(std::span<const double> z,
                         const DetectorConfig& config, BootstrapStream stream) {
  config.validate();
  if (z.size() < 2) throw InvalidArgument("change point detection needs n >= 2");
  ChangePointResult out;
  out.word_id = static_cast<std::uint32_t>(stream.word);
  out.max_zscore = *std::max_element(z.begin(), z.end());
  out.pvalues = bootstrap_pvalues(z, config.bootstrap, stream);
  // A constant series has no change point to locate.
  const bool constant = *std::min_element(z.begin(), z.end()) == out.max_zscore;
  for (std::size_t j = 1; j < z.size() && !constant; ++j) {
    if (!(z[j] >= config.gamma)) continue;
    if (!out.change_index || out.pvalues[j - 1] < out.p_value) {
      out.change_index = j;
      out.p_value = out.pvalues[j - 1];
    }
  }
  out.significant = out.change_index.has_value() && out.p_value < config.significance;
  return out;
}

std::vector<ChangePointResult> detect_all(const NormalizedEnsemble& ensemble,
                                          const DetectorConfig& config,
                                          std::size_t threads) {
  config.validate();
  std::vector<ChangePointResult> results(ensemble.words.size());
  detail::parallel_for(results.size(), threads, [&](std::size_t w) {
    const auto id = static_cast<std::uint32_t>(w);
    ChangePointResult r = detect(ensemble.row(id), config, {config.seed, w});
    r.word = ensemble.words[w];
    if (r.change_index) r.change_label = ensemble.labels[*r.change_index];
    results[w] = std::move(r);
  });
  return results;
}

void write_report_csv(std::ostream& out, Method method,
                      std::vector<ChangePointResult> results) {
  std::sort(results.begin(), results.end(),
            [](const ChangePointResult& a, const ChangePointResult& b) {
              if (a.p_value != b.p_value) return a.p_value < b.p_value;
              if (a.max_zscore != b.max_zscore) return a.max_zscore > b.max_zscore;
              return a.word < b.word;
            });
  out << "word,method,significant,ecp_label,p_value,max_zscore\n";
  const std::string name(to_string(method));
  for (const auto& r : results) {
    out << csv::field(r.word) << ',' << name << ','
        << (r.significant ? "true" : "false") << ','
        << csv::field(r.change_label) << ',' << csv::number(r.p_value, 9)
        << ',' << csv::number(r.max_zscore, 9) << '\n';
  }
  if (!out) throw IoError("failed to write detection report");
}

}  // namespace lingshift
