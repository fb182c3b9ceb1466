#include "run_config.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <algorithm>

namespace lingshift::cli {

void register_options(CLI::App& app, RunConfig& c, RawOptions& raw) {
  app.set_config("--config", "", "Read options from a 'key = value' file");
  app.allow_config_extras(CLI::config_extras_mode::error);

  app.add_option("--manifest", c.manifest, "Snapshot list: 'label<TAB>path' per line");
  app.add_option("--base", c.base, "Base corpus file for bench");
  app.add_option("--stopwords", c.stopwords, "Stopword list for bench, one word per line");
  app.add_option("--out", c.out, "Output directory")->capture_default_str();
  app.add_option("--method", raw.methods, "frequency, syntactic, distributional")
      ->delimiter(',')
      ->check(CLI::IsMember({"frequency", "syntactic", "distributional"}))
      ->capture_default_str();
  app.add_option("--format", raw.format, "Corpus format")
      ->check(CLI::IsMember({"plain", "tagged"}))
      ->capture_default_str();
  app.add_flag("--lowercase", c.load.lowercase, "Lowercase word forms");
  app.add_option("--min-count", c.min_count, "Minimum count in every snapshot")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  app.add_option("--dim", c.training.dim, "Embedding dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--window", c.training.window, "Context window")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--subsample", c.training.subsample, "Subsampling threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--epochs", c.training.max_epochs, "Maximum training epochs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--alpha", c.training.alpha, "Initial learning rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tolerance", c.training.tolerance, "Convergence tolerance on 1 - rho")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  app.add_option("--k", raw.k, "Alignment neighbours (default min(4*dim, |V|))");
  app.add_option("--ridge", c.alignment.ridge, "Alignment ridge penalty")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_flag("--write-alignment", c.write_alignment, "Also write per-word alignment residuals");

  app.add_option("--bootstrap", c.detector.bootstrap, "Bootstrap permutations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--gamma", raw.gamma, "Z-score gate (inf closes it, -inf disables it)")
      ->capture_default_str();
  app.add_option("--threshold", c.detector.significance, "Significance threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  app.add_option("--seed", c.seed, "Seed for every random stream")->capture_default_str();
  app.add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--deterministic", c.deterministic, "Single-threaded, reproducible run");
  app.add_flag("--end-to-end", c.end_to_end, "detect: train missing embeddings first");
  app.add_flag("-q,--quiet", c.quiet, "No progress messages");

  app.add_option("--pairs", c.pairs, "bench: donor/receptor pairs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--snapshots", c.snapshots, "bench: copies of the base corpus")
      ->check(CLI::Range(2, 100000))
      ->capture_default_str();
  app.add_option("--perturb-from", raw.perturb_from, "bench: first perturbed snapshot (default half)");
  app.add_option("--p-grid", c.p_grid, "bench: replacement probabilities")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_flag("--same-pos", c.same_pos, "bench: pair words sharing their modal tag");

  app.add_option("--tokens", c.synthetic.tokens, "synth: corpus size in tokens")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--topics", c.synthetic.topics, "synth: number of topics")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--untagged", raw.untagged, "synth: omit POS tags");
}

void finalize(RunConfig& c, const RawOptions& raw) {
  c.methods.clear();
  for (const auto& m : raw.methods) {
    const Method method = parse_method(m);
    if (std::find(c.methods.begin(), c.methods.end(), method) == c.methods.end()) {
      c.methods.push_back(method);
    }
  }
  if (c.methods.empty()) throw UsageError("--method needs at least one method");
  c.load.format = raw.format == "tagged" ? CorpusFormat::tagged : CorpusFormat::plain;

  char* end = nullptr;
  const double gamma = std::strtod(raw.gamma.c_str(), &end);
  if (raw.gamma.empty() || end != raw.gamma.c_str() + raw.gamma.size() || std::isnan(gamma)) {
    throw UsageError("--gamma must be a number, inf or -inf");
  }
  c.detector.gamma = gamma;

  if (raw.k > 0) c.alignment.k = raw.k;
  if (raw.perturb_from > 0) c.perturb_from = raw.perturb_from;
  if (c.perturb_from && *c.perturb_from >= c.snapshots) {
    throw UsageError("--perturb-from must be below --snapshots");
  }
  c.synthetic.tagged = !raw.untagged;

  c.training.seed = c.seed;
  c.detector.seed = c.seed;
  c.synthetic.seed = c.seed;
  if (c.deterministic) c.threads = 1;
  c.alignment.threads = c.threads;
  try {
    c.training.validate();
    c.detector.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

}  // namespace lingshift::cli
