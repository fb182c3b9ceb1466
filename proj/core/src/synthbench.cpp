#include "lingshift/synthbench.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "lingshift/csv.hpp"
#include "lingshift/error.hpp"
#include "lingshift/random.hpp"
#include "lingshift/text.hpp"

namespace lingshift {

void PerturbationPlan::validate(std::size_t snapshot_count) const {
  if (donor.empty() || receptor.empty()) {
    throw InvalidArgument("perturbation needs a donor and a receptor");
  }
  if (donor == receptor) throw InvalidArgument("donor and receptor must differ");
  if (!(p_replacement >= 0.0 && p_replacement <= 1.0)) {
    throw InvalidArgument("p_replacement must be in [0, 1]");
  }
  if (begin > end || end > snapshot_count) {
    throw InvalidArgument("perturbed snapshot range is outside the corpus");
  }
}

TemporalCorpus duplicate_corpus(const CorpusSnapshot& base, std::size_t n) {
  if (n < 2) throw InvalidArgument("a temporal corpus needs at least two snapshots");
  std::vector<CorpusSnapshot> snapshots;
  snapshots.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    snapshots.push_back(base.relabeled({std::to_string(t), t}));
  }
  return TemporalCorpus(std::move(snapshots));
}

namespace {

CorpusSnapshot perturb_snapshot(const CorpusSnapshot& snap,
                                const PerturbationPlan& plan) {
  const auto donor = snap.words().find(plan.donor);
  if (!donor || snap.count(*donor) == 0 || plan.p_replacement == 0.0) {
    return snap;
  }
  auto words = snap.shared_words();
  auto receptor = words->find(plan.receptor);
  if (!receptor) {
    auto extended = std::make_shared<Lexicon>(*words);
    receptor = extended->intern(plan.receptor);
    words = std::move(extended);
  }

  std::optional<std::uint32_t> receptor_tag;
  if (snap.tagged() && snap.count(*receptor) > 0) {
    receptor_tag = *snap.tags().find(pos_distribution(snap, plan.receptor).modal_tag());
  }

  std::vector<std::uint32_t> tokens(snap.tokens().begin(), snap.tokens().end());
  std::vector<std::uint32_t> tags(snap.token_tags().begin(), snap.token_tags().end());
  Rng rng(substream_seed(plan.seed, snap.label().index));
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] != *donor || !rng.bernoulli(plan.p_replacement)) continue;
    tokens[i] = *receptor;
    if (receptor_tag) tags[i] = *receptor_tag;
  }
  const auto offsets = snap.document_offsets();
  return CorpusSnapshot(snap.label(), std::move(words), snap.shared_tags(),
                        std::move(tokens), std::move(tags),
                        std::vector<std::size_t>(offsets.begin(), offsets.end()));
}

}  // namespace

TemporalCorpus perturb(const TemporalCorpus& corpus,
                       const PerturbationPlan& plan) {
  plan.validate(corpus.size());
  std::uint64_t donor_count = 0;
  for (const auto& snap : corpus) donor_count += snap.count(plan.donor);
  if (donor_count == 0) {
    throw InvalidArgument("donor '" + plan.donor + "' does not occur in the corpus");
  }
  std::vector<CorpusSnapshot> snapshots;
  snapshots.reserve(corpus.size());
  for (std::size_t t = 0; t < corpus.size(); ++t) {
    snapshots.push_back(t >= plan.begin && t < plan.end
                            ? perturb_snapshot(corpus[t], plan)
                            : corpus[t]);
  }
  return TemporalCorpus(std::move(snapshots));
}

TemporalCorpus perturb(const TemporalCorpus& corpus,
                       std::span<const PerturbationPlan> plans) {
  TemporalCorpus out = corpus;
  for (const auto& plan : plans) out = perturb(out, plan);
  return out;
}

std::set<std::string, std::less<>> read_stopwords(std::istream& in) {
  std::set<std::string, std::less<>> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto fields = text::split_whitespace(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    out.emplace(fields.front());
  }
  return out;
}

std::vector<WordPair> sample_word_pairs(
    const Vocabulary& vocab, const CorpusSnapshot& base, std::size_t count,
    bool same_pos, const std::set<std::string, std::less<>>& stopwords,
    Rng& rng) {
  if (count == 0) return {};
  std::vector<std::uint32_t> eligible;
  for (std::uint32_t w = 0; w < vocab.size(); ++w) {
    if (!stopwords.contains(vocab.word(w))) eligible.push_back(w);
  }
  for (std::size_t i = eligible.size(); i > 1; --i) {
    std::swap(eligible[i - 1], eligible[rng.below(i)]);
  }

  std::vector<WordPair> pairs;
  if (!same_pos) {
    for (std::size_t i = 0; i + 1 < eligible.size() && pairs.size() < count; i += 2) {
      pairs.push_back({vocab.word(eligible[i]), vocab.word(eligible[i + 1])});
    }
  } else {
    if (!base.tagged()) {
      throw InvalidArgument("same-POS pair sampling needs a tagged base snapshot");
    }
    std::map<std::string, std::uint32_t> waiting;
    for (auto w : eligible) {
      const std::string tag = pos_distribution(base, vocab.word(w)).modal_tag();
      auto it = waiting.find(tag);
      if (it == waiting.end()) {
        waiting.emplace(tag, w);
        continue;
      }
      pairs.push_back({vocab.word(it->second), vocab.word(w)});
      waiting.erase(it);
      if (pairs.size() == count) break;
    }
  }
  if (pairs.size() < count) {
    throw InvalidArgument("only " + std::to_string(pairs.size()) +
                          " eligible word pairs for " + std::to_string(count) +
                          " requested");
  }
  return pairs;
}

double mrr(std::span<const std::size_t> ranks) {
  if (ranks.empty()) throw InvalidArgument("MRR of an empty rank list");
  double sum = 0.0;
  for (auto r : ranks) {
    if (r < 1) throw InvalidArgument("ranks start at 1");
    sum += 1.0 / static_cast<double>(r);
  }
  return sum / static_cast<double>(ranks.size());
}

std::vector<std::string> rank_words_by_pvalue(
    std::span<const ChangePointResult> results) {
  std::vector<const ChangePointResult*> order;
  order.reserve(results.size());
  for (const auto& r : results) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const ChangePointResult* a, const ChangePointResult* b) {
              if (a->p_value != b->p_value) return a->p_value < b->p_value;
              if (a->max_zscore != b->max_zscore) return a->max_zscore > b->max_zscore;
              return a->word_id < b->word_id;
            });
  std::vector<std::string> out;
  out.reserve(order.size());
  for (const auto* r : order) out.push_back(r->word);
  return out;
}

const BenchResult& BenchReport::summary(Method method,
                                        double p_replacement) const {
  for (const auto& s : summaries) {
    if (s.method == method && s.p_replacement == p_replacement) return s;
  }
  throw InvalidArgument("no bench summary for " + std::string(to_string(method)));
}

namespace {

SeriesEnsemble build_series(Method method, const TemporalCorpus& corpus,
                            const Vocabulary& vocab, const BenchConfig& config) {
  switch (method) {
    case Method::frequency:
      return frequency_ensemble(vocab, corpus);
    case Method::syntactic:
      return syntactic_ensemble(corpus, vocab);
    case Method::distributional: {
      CorpusTrainingOptions options;
      options.threads = config.threads;
      const auto trained = train_corpus(corpus, vocab, config.training, options);
      std::vector<EmbeddingSpace> spaces;
      for (const auto& r : trained) spaces.push_back(r.space);
      AlignmentConfig align = config.alignment;
      align.threads = config.threads;
      return distributional_ensemble(align_all_to_base(spaces, align));
    }
  }
  throw InvalidArgument("unknown method");
}

}  // namespace

BenchReport run_bench(const CorpusSnapshot& base,
                      const std::set<std::string, std::less<>>& stopwords,
                      const BenchConfig& config,
                      const BenchProgress& progress) {
  if (config.pairs == 0) throw InvalidArgument("bench needs at least one pair");
  if (config.methods.empty()) throw InvalidArgument("bench needs at least one method");
  for (double p : config.p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p_replacement must be in [0, 1]");
  }
  auto say = [&](const std::string& msg) {
    if (progress) progress(msg);
  };

  const TemporalCorpus clean = duplicate_corpus(base, config.snapshots);
  const std::size_t from = config.perturb_from.value_or(config.snapshots / 2);
  if (from >= config.snapshots) {
    throw InvalidArgument("perturbed range starts past the last snapshot");
  }
  const Vocabulary base_vocab = build_common_vocabulary(clean, config.min_count);
  Rng rng(substream_seed(config.seed, 0x70616972));
  BenchReport report;
  report.pairs = sample_word_pairs(base_vocab, base, config.pairs,
                                   config.same_pos, stopwords, rng);

  std::vector<PerturbationPlan> plans;
  for (std::size_t i = 0; i < report.pairs.size(); ++i) {
    plans.push_back({report.pairs[i].donor, report.pairs[i].receptor, 0.0, from,
                     config.snapshots, substream_seed(config.seed, 0x706c616e, i)});
  }

  for (double p : config.p_grid) {
    for (auto& plan : plans) plan.p_replacement = p;
    const TemporalCorpus corpus = perturb(clean, plans);
    const Vocabulary vocab = build_common_vocabulary(corpus, config.min_count);
    for (Method method : config.methods) {
      say(std::string(to_string(method)) + " p_replacement=" + csv::number(p, 6));
      const SeriesEnsemble series = build_series(method, corpus, vocab, config);
      const auto results =
          detect_all(normalize_ensemble(series), config.detector, config.threads);
      const auto ranking = rank_words_by_pvalue(results);

      BenchResult summary{method, p, {}, 0.0};
      for (std::size_t i = 0; i < report.pairs.size(); ++i) {
        const auto& pair = report.pairs[i];
        const auto it = std::find(ranking.begin(), ranking.end(), pair.receptor);
        if (it == ranking.end()) {
          throw Error("receptor '" + pair.receptor + "' missing from the ranking");
        }
        const auto rank = static_cast<std::size_t>(it - ranking.begin()) + 1;
        summary.ranks.push_back(rank);
        report.rows.push_back({method, p, i, pair.donor, pair.receptor, rank,
                               1.0 / (static_cast<double>(rank) *
                                      static_cast<double>(report.pairs.size()))});
      }
      summary.mrr = mrr(summary.ranks);
      report.summaries.push_back(std::move(summary));
    }
  }
  return report;
}

void write_bench_csv(std::ostream& out, const BenchReport& report) {
  out << "method,p_replacement,pair_id,donor,receptor,rank,mrr_contrib\n";
  for (const auto& r : report.rows) {
    out << to_string(r.method) << ',' << csv::number(r.p_replacement, 6) << ','
        << r.pair_id << ',' << csv::field(r.donor) << ','
        << csv::field(r.receptor) << ',' << r.rank << ','
        << csv::number(r.mrr_contrib, 9) << '\n';
  }
  for (const auto& s : report.summaries) {
    out << to_string(s.method) << ',' << csv::number(s.p_replacement, 6)
        << ",all,,,," << csv::number(s.mrr, 9) << '\n';
  }
  if (!out) throw IoError("failed to write bench report");
}

}  // namespace lingshift
