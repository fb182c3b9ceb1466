#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lingshift/alignment.hpp"
#include "lingshift/changepoint.hpp"
#include "lingshift/corpus.hpp"
#include "lingshift/embedding.hpp"
#include "lingshift/series.hpp"
#include "lingshift/synthetic_text.hpp"

namespace CLI {
class App;
}

namespace lingshift::cli {

// Invalid flag values that only surface after parsing (exit code 64).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An upstream artifact a command depends on is absent (exit code 3).
class MissingArtifact : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path base;
  std::filesystem::path stopwords;
  std::filesystem::path out = "out";

  std::vector<Method> methods{Method::frequency, Method::distributional};
  LoadOptions load;
  std::uint64_t min_count = 5;
  TrainingConfig training;
  AlignmentConfig alignment;
  DetectorConfig detector;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool deterministic = false;
  bool end_to_end = false;
  bool write_alignment = false;
  bool quiet = false;

  std::size_t pairs = 20;
  std::size_t snapshots = 20;
  std::optional<std::size_t> perturb_from;
  std::vector<double> p_grid{0.2, 0.4, 0.6, 0.8, 1.0};
  bool same_pos = false;

  SyntheticCorpusConfig synthetic;
};

// Flag values as typed, before validation.
struct RawOptions {
  std::vector<std::string> methods{"frequency", "distributional"};
  std::string format = "plain";
  std::string gamma = "1.75";
  std::size_t k = 0;
  std::size_t perturb_from = 0;
  bool untagged = false;
};

// Registers every flag on the top-level app; subcommands fall through to it.
void register_options(CLI::App& app, RunConfig& config, RawOptions& raw);

// Applies raw values and the global seed, checks cross-field constraints.
// Throws UsageError.
void finalize(RunConfig& config, const RawOptions& raw);

}  // namespace lingshift::cli
