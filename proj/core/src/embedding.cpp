#include "lingshift/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "lingshift/corpus.hpp"
#include "lingshift/error.hpp"
#include "lingshift/random.hpp"

namespace lingshift {
namespace {

double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

}  // namespace

void TrainingConfig::validate() const {
  if (dim < 1) throw InvalidArgument("dim must be >= 1");
  if (window < 1) throw InvalidArgument("window must be >= 1");
  if (!(subsample > 0.0 && subsample <= 1.0)) {
    throw InvalidArgument("subsample threshold must be in (0, 1]");
  }
  const double floor = effective_min_alpha();
  if (!(floor > 0.0 && alpha > floor)) {
    throw InvalidArgument("learning rate must satisfy alpha > min_alpha > 0");
  }
  if (max_epochs < 1) throw InvalidArgument("max_epochs must be >= 1");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
}

EmbeddingSpace::EmbeddingSpace(std::string label,
                               std::vector<std::string> words,
                               RowMatrix vectors, bool normalized)
    : label_(std::move(label)),
      words_(std::move(words)),
      vectors_(std::move(vectors)),
      normalized_(normalized) {
  if (static_cast<std::size_t>(vectors_.rows()) != words_.size()) {
    throw InvalidArgument("embedding space needs one vector per word");
  }
  for (std::uint32_t i = 0; i < words_.size(); ++i) {
    if (!ids_.emplace(words_[i], i).second) {
      throw InvalidArgument("duplicate word '" + words_[i] + "' in embedding space");
    }
  }
}

std::optional<std::uint32_t> EmbeddingSpace::find(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

EmbeddingSpace EmbeddingSpace::normalized_copy() const {
  RowMatrix v = vectors_;
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    const double norm = v.row(i).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw InvalidArgument("cannot normalize zero vector of '" + words_[i] + "'");
    }
    v.row(i) /= norm;
  }
  return EmbeddingSpace(label_, words_, std::move(v), true);
}

EmbeddingSpace EmbeddingSpace::relabeled(std::string label) const {
  EmbeddingSpace copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

SkipGramModel SkipGramModel::initialize(std::size_t vocab_size,
                                        std::size_t dim, Rng& rng) {
  if (vocab_size < 2) throw InvalidArgument("skipgram needs at least two words");
  SkipGramModel model;
  model.input.resize(static_cast<Eigen::Index>(vocab_size),
                     static_cast<Eigen::Index>(dim));
  const double half = 0.5 / static_cast<double>(dim);
  for (Eigen::Index i = 0; i < model.input.size(); ++i) {
    model.input.data()[i] = rng.uniform(-half, half);
  }
  model.nodes = RowMatrix::Zero(static_cast<Eigen::Index>(vocab_size - 1),
                                static_cast<Eigen::Index>(dim));
  return model;
}

double hs_log_prob(const HuffmanTree& tree, const RowMatrix& nodes,
                   std::span<const double> input, std::uint32_t target) {
  if (static_cast<Eigen::Index>(input.size()) != nodes.cols()) {
    throw InvalidArgument("input vector dimension does not match the model");
  }
  if (target >= tree.leaf_count()) throw InvalidArgument("target word out of range");
  const auto code = tree.code(target);
  const auto path = tree.path(target);
  Eigen::Map<const Eigen::VectorXd> v(input.data(),
                                      static_cast<Eigen::Index>(input.size()));
  double logp = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double x = nodes.row(path[i]).dot(v.transpose());
    logp += log_sigmoid(code[i] ? -x : x);
  }
  return logp;
}

double subsample_keep_probability(double frequency, double threshold) {
  if (!(frequency > 0.0)) throw InvalidArgument("word frequency must be positive");
  if (!(threshold > 0.0)) throw InvalidArgument("subsample threshold must be positive");
  return std::min(1.0, std::sqrt(threshold / frequency));
}

double sgd_step(SkipGramModel& model, const HuffmanTree& tree,
                std::uint32_t center, std::uint32_t context, double alpha) {
  std::vector<double> scratch(static_cast<std::size_t>(model.input.cols()));
  return sgd_step(model, tree, center, context, alpha, scratch);
}

double sgd_step(SkipGramModel& model, const HuffmanTree& tree,
                std::uint32_t center, std::uint32_t context, double alpha,
                std::span<double> scratch) {
  const auto dim = static_cast<std::size_t>(model.input.cols());
  if (center >= static_cast<std::size_t>(model.input.rows()) ||
      context >= tree.leaf_count()) {
    throw InvalidArgument("sgd_step word id out of range");
  }
  if (scratch.size() < dim) throw InvalidArgument("scratch buffer too small");

  double* v = model.input.row(center).data();
  double* grad = scratch.data();
  std::fill(grad, grad + dim, 0.0);

  const auto code = tree.code(context);
  const auto path = tree.path(context);
  double loss = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    double* node = model.nodes.row(path[i]).data();
    double x = 0.0;
    for (std::size_t k = 0; k < dim; ++k) x += node[k] * v[k];
    loss -= log_sigmoid(code[i] ? -x : x);
    // d log Pr / dx
    const double g = (1.0 - code[i]) - sigmoid(x);
    for (std::size_t k = 0; k < dim; ++k) grad[k] += g * node[k];
    const double step = alpha * g;
    for (std::size_t k = 0; k < dim; ++k) node[k] += step * v[k];
  }
  double norm = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    v[k] += alpha * grad[k];
    norm += v[k] * v[k];
  }
  if (!std::isfinite(loss) || !std::isfinite(norm)) {
    throw DivergenceError("non-finite skipgram loss or gradient");
  }
  return loss;
}

ConvergenceCheck check_convergence(const RowMatrix& previous,
                                   const RowMatrix& current, double tolerance) {
  if (previous.rows() != current.rows() || previous.cols() != current.cols()) {
    throw InvalidArgument("convergence check needs parameter sets of equal shape");
  }
  if (previous.rows() == 0) throw InvalidArgument("convergence check on empty model");
  ConvergenceCheck out;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < previous.rows(); ++i) {
    const double na = previous.row(i).norm();
    const double nb = current.row(i).norm();
    if (na == 0.0 || nb == 0.0) {
      ++out.zero_vectors;
      continue;
    }
    const double c = previous.row(i).dot(current.row(i)) / (na * nb);
    sum += std::clamp(c, -1.0, 1.0);
  }
  out.rho = std::clamp(sum / static_cast<double>(previous.rows()), -1.0, 1.0);
  out.converged = 1.0 - out.rho <= tolerance;
  return out;
}

TrainingResult train_snapshot(const CorpusSnapshot& snapshot,
                              const Vocabulary& vocab, const HuffmanTree& tree,
                              const TrainingConfig& config) {
  config.validate();
  if (snapshot.token_count() == 0) {
    throw InvalidArgument("snapshot '" + snapshot.label().label + "' is empty");
  }
  if (tree.leaf_count() != vocab.size()) {
    throw InvalidArgument("Huffman tree does not match the vocabulary");
  }

  const auto to_vocab = vocab.index_map(snapshot);
  const double total_tokens = static_cast<double>(snapshot.token_count());
  std::vector<double> keep(vocab.size(), 1.0);
  for (std::uint32_t lex = 0; lex < to_vocab.size(); ++lex) {
    const std::int32_t v = to_vocab[lex];
    if (v == Vocabulary::kOutOfVocabulary) continue;
    const auto n = snapshot.count(lex);
    if (n == 0) {
      throw InvalidArgument("vocabulary word '" + vocab.word(v) +
                            "' does not occur in snapshot '" +
                            snapshot.label().label + "'");
    }
    keep[v] = subsample_keep_probability(static_cast<double>(n) / total_tokens,
                                         config.subsample);
  }

  Rng rng(config.seed);
  SkipGramModel model = SkipGramModel::initialize(vocab.size(), config.dim, rng);
  RowMatrix previous = model.input;

  const double alpha0 = config.alpha;
  const double alpha_min = config.effective_min_alpha();
  const double planned = total_tokens * static_cast<double>(config.max_epochs);
  const auto window = static_cast<std::ptrdiff_t>(config.window);
  std::vector<double> scratch(config.dim);
  std::vector<std::int32_t> kept;

  TrainingResult result{EmbeddingSpace(snapshot.label().label, vocab.words(),
                                       RowMatrix(vocab.size(), config.dim), false),
                        {},
                        false};
  double processed = 0.0;
  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    EpochStats stats;
    double alpha = alpha0;
    for (std::size_t d = 0; d < snapshot.document_count(); ++d) {
      const auto doc = snapshot.document(d);
      alpha = std::max(alpha_min, alpha0 - (alpha0 - alpha_min) * processed / planned);
      processed += static_cast<double>(doc.size());

      kept.clear();
      for (auto lex : doc) {
        const std::int32_t v = to_vocab[lex];
        if (v == Vocabulary::kOutOfVocabulary) {
          kept.push_back(v);
        } else if (keep[v] >= 1.0 || rng.uniform() < keep[v]) {
          kept.push_back(v);
        }
      }
      const auto len = static_cast<std::ptrdiff_t>(kept.size());
      for (std::ptrdiff_t i = 0; i < len; ++i) {
        if (kept[i] == Vocabulary::kOutOfVocabulary) continue;
        const auto center = static_cast<std::uint32_t>(kept[i]);
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - window);
        const std::ptrdiff_t hi = std::min(len - 1, i + window);
        for (std::ptrdiff_t j = lo; j <= hi; ++j) {
          if (j == i || kept[j] == Vocabulary::kOutOfVocabulary) continue;
          stats.loss += sgd_step(model, tree, center,
                                 static_cast<std::uint32_t>(kept[j]), alpha,
                                 scratch);
          ++stats.pairs;
        }
      }
    }
    if (!std::isfinite(stats.loss)) {
      throw DivergenceError("training diverged on snapshot '" +
                            snapshot.label().label + "'");
    }
    const ConvergenceCheck check =
        check_convergence(previous, model.input, config.tolerance);
    stats.rho = check.rho;
    stats.final_alpha = alpha;
    result.epochs.push_back(stats);
    if (check.converged) {
      result.converged = true;
      break;
    }
    previous = model.input;
  }

  result.space = EmbeddingSpace(snapshot.label().label, vocab.words(),
                                std::move(model.input), false)
                     .normalized_copy();
  return result;
}

std::vector<TrainingResult> train_corpus(const TemporalCorpus& corpus,
                                         const Vocabulary& vocab,
                                         const TrainingConfig& config,
                                         const CorpusTrainingOptions& options) {
  const std::size_t n = corpus.size();
  // source[t] is the earliest snapshot with identical content.
  std::vector<std::size_t> source(n);
  for (std::size_t t = 0; t < n; ++t) {
    source[t] = t;
    if (!options.reuse_identical) continue;
    for (std::size_t u = 0; u < t; ++u) {
      if (source[u] == u && corpus[u].same_content(corpus[t])) {
        source[t] = u;
        break;
      }
    }
  }

  std::vector<std::optional<TrainingResult>> results(n);
  std::vector<std::size_t> jobs;
  for (std::size_t t = 0; t < n; ++t) {
    if (source[t] == t) jobs.push_back(t);
  }

  auto run = [&](std::size_t t) {
    const HuffmanTree tree = build_huffman_tree(vocab, t);
    try {
      results[t] = train_snapshot(corpus[t], vocab, tree, config);
    } catch (const Error& e) {
      throw Error("snapshot '" + corpus[t].label().label + "': " + e.what());
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, jobs.size()));
  if (threads == 1) {
    for (auto t : jobs) run(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) {
          try {
            run(jobs[j]);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<TrainingResult> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    TrainingResult r = *results[source[t]];
    r.space = r.space.relabeled(corpus[t].label().label);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace lingshift
