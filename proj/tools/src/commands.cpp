#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "artifacts.hpp"
#include "lingshift/csv.hpp"
#include "lingshift/error.hpp"
#include "lingshift/synthbench.hpp"

namespace lingshift::cli {

namespace fs = std::filesystem;

namespace {

class Progress {
 public:
  explicit Progress(bool quiet) : quiet_(quiet) {}
  void operator()(const std::string& message) const {
    if (!quiet_) std::cerr << "lingshift: " << message << '\n';
  }

 private:
  bool quiet_;
};

void check_label(const std::string& label) {
  const bool safe = !label.empty() && label != "." && label != ".." &&
                    label.find_first_of("/\\") == std::string::npos;
  if (!safe) throw InvalidArgument("snapshot label '" + label + "' is not usable as a file name");
}

struct LoadedCorpus {
  TemporalCorpus corpus;
  Vocabulary vocab;
};

LoadedCorpus load_corpus(const RunConfig& config, const Progress& say) {
  if (config.manifest.empty()) throw UsageError("--manifest is required");
  TemporalCorpus corpus = load_temporal_corpus(config.manifest, config.load);
  for (const auto& label : corpus.labels()) check_label(label);
  Vocabulary vocab = build_common_vocabulary(corpus, config.min_count);
  say("loaded " + std::to_string(corpus.size()) + " snapshots, " +
      std::to_string(vocab.size()) + " shared words");
  return {std::move(corpus), std::move(vocab)};
}

std::vector<EmbeddingSpace> train_and_stage(const LoadedCorpus& loaded, const RunConfig& config,
                                            ArtifactWriter& writer, const Progress& say) {
  CorpusTrainingOptions options;
  options.threads = config.threads;
  const auto results = train_corpus(loaded.corpus, loaded.vocab, config.training, options);
  std::vector<EmbeddingSpace> spaces;
  for (const auto& r : results) {
    const auto& last = r.epochs.back();
    char line[160];
    std::snprintf(line, sizeof line, "snapshot %s: %zu epochs, rho %.6f, loss/pair %.4f%s",
                  r.space.label().c_str(), r.epochs.size(), last.rho,
                  last.pairs ? last.loss / static_cast<double>(last.pairs) : 0.0,
                  r.converged ? "" : " (epoch limit)");
    say(line);
    writer.stage("embeddings", embedding_path(fs::path(), r.space.label()),
                 [&](std::ostream& out) { write_embeddings(out, r.space); });
    spaces.push_back(r.space);
  }
  return spaces;
}

std::vector<EmbeddingSpace> read_spaces(const LoadedCorpus& loaded, const RunConfig& config) {
  std::vector<EmbeddingSpace> spaces;
  for (const auto& snap : loaded.corpus) {
    const fs::path path = embedding_path(config.out, snap.label().label);
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    EmbeddingSpace space = read_embeddings(in, snap.label().label);
    if (space.words() != loaded.vocab.words()) {
      throw InvalidArgument(path.string() +
                            " does not match the corpus vocabulary; rerun train with the same "
                            "--manifest and --min-count");
    }
    spaces.push_back(space.normalized_copy());
  }
  return spaces;
}

SeriesEnsemble build_ensemble(Method method, const LoadedCorpus& loaded,
                              const std::vector<EmbeddingSpace>& spaces, const RunConfig& config,
                              ArtifactWriter& writer) {
  switch (method) {
    case Method::frequency:
      return frequency_ensemble(loaded.vocab, loaded.corpus);
    case Method::syntactic:
      if (!loaded.corpus.tagged()) {
        throw InvalidArgument("the syntactic method needs --format tagged");
      }
      return syntactic_ensemble(loaded.corpus, loaded.vocab);
    case Method::distributional: {
      const AlignmentSet alignments = align_all_to_base(spaces, config.alignment);
      if (config.write_alignment) {
        writer.stage("alignment", "alignment.csv",
                     [&](std::ostream& out) { write_alignment_csv(out, alignments); });
      }
      return distributional_ensemble(alignments);
    }
  }
  throw InvalidArgument("unknown method");
}

}  // namespace

fs::path embedding_path(const fs::path& out_dir, const std::string& label) {
  return out_dir / "embeddings" / (label + ".vec");
}

void cmd_train(const RunConfig& config) {
  const Progress say(config.quiet);
  const LoadedCorpus loaded = load_corpus(config, say);
  ArtifactWriter writer(config.out);
  train_and_stage(loaded, config, writer, say);
  writer.commit();
  say("wrote embeddings for " + std::to_string(loaded.corpus.size()) + " snapshots to " +
      (config.out / "embeddings").string());
}

void cmd_detect(const RunConfig& config) {
  const Progress say(config.quiet);
  const LoadedCorpus loaded = load_corpus(config, say);
  const bool distributional = std::find(config.methods.begin(), config.methods.end(),
                                        Method::distributional) != config.methods.end();
  if (distributional && !config.end_to_end) {
    for (const auto& snap : loaded.corpus) {
      const fs::path path = embedding_path(config.out, snap.label().label);
      if (!fs::exists(path)) {
        throw MissingArtifact("missing " + path.string() +
                              "; run 'lingshift train' first or pass --end-to-end");
      }
    }
  }

  ArtifactWriter writer(config.out);
  std::vector<EmbeddingSpace> spaces;
  if (distributional) {
    spaces = config.end_to_end ? train_and_stage(loaded, config, writer, say)
                               : read_spaces(loaded, config);
  }
  for (Method method : config.methods) {
    const std::string name(to_string(method));
    const SeriesEnsemble series = build_ensemble(method, loaded, spaces, config, writer);
    const auto results =
        detect_all(normalize_ensemble(series), config.detector, config.threads);
    const auto significant = std::count_if(results.begin(), results.end(),
                                           [](const auto& r) { return r.significant; });
    say(name + ": " + std::to_string(significant) + " of " + std::to_string(results.size()) +
        " words significant");
    writer.stage("series", fs::path("series") / (name + ".csv"),
                 [&](std::ostream& out) { write_series_csv(out, series); });
    writer.stage("report", fs::path("reports") / (name + ".csv"),
                 [&](std::ostream& out) { write_report_csv(out, method, results); });
  }
  writer.commit();
}

void cmd_bench(const RunConfig& config) {
  const Progress say(config.quiet);
  if (config.base.empty()) throw UsageError("--base is required");
  const CorpusSnapshot base = load_snapshot(config.base, config.load, {"base", 0});
  std::set<std::string, std::less<>> stopwords;
  if (!config.stopwords.empty()) {
    std::ifstream in(config.stopwords);
    if (!in) throw IoError("cannot read " + config.stopwords.string());
    stopwords = read_stopwords(in);
  } else {
    say("no --stopwords given; every vocabulary word may be sampled");
  }

  BenchConfig bench;
  bench.snapshots = config.snapshots;
  bench.perturb_from = config.perturb_from;
  bench.pairs = config.pairs;
  bench.same_pos = config.same_pos;
  bench.p_grid = config.p_grid;
  bench.methods = config.methods;
  bench.min_count = config.min_count;
  bench.training = config.training;
  bench.alignment = config.alignment;
  bench.detector = config.detector;
  bench.seed = config.seed;
  bench.threads = config.threads;
  const BenchReport report = run_bench(base, stopwords, bench, say);

  ArtifactWriter writer(config.out);
  writer.stage("bench", "bench.csv", [&](std::ostream& out) { write_bench_csv(out, report); });
  writer.commit();
  for (const auto& s : report.summaries) {
    std::cout << to_string(s.method) << "\tp=" << csv::number(s.p_replacement, 6)
              << "\tMRR=" << csv::number(s.mrr, 6) << '\n';
  }
}

void cmd_synth(const RunConfig& config) {
  const Progress say(config.quiet);
  const SyntheticCorpus corpus = generate_synthetic_corpus(config.synthetic);
  ArtifactWriter writer(config.out);
  writer.stage("corpus", "synthetic.txt",
               [&](std::ostream& out) { write_snapshot(out, corpus.snapshot); });
  writer.stage("stopwords", "stopwords.txt", [&](std::ostream& out) {
    for (const auto& w : corpus.function_words) out << w << '\n';
  });
  writer.commit();
  say("wrote " + std::to_string(corpus.snapshot.token_count()) + " tokens to " +
      (config.out / "synthetic.txt").string());
}

}  // namespace lingshift::cli
