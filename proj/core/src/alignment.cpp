#include "lingshift/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "lingshift/csv.hpp"
#include "lingshift/error.hpp"
#include "parallel.hpp"

namespace lingshift {
namespace {

void require_normalized(const EmbeddingSpace& space) {
  if (!space.normalized()) {
    throw InvalidArgument("k-NN needs a normalized embedding space ('" +
                          space.label() + "')");
  }
}

// Self first, then the top k-1 others by (similarity desc, id asc).
std::vector<std::uint32_t> select_neighbors(std::span<const double> sims,
                                            std::uint32_t self, std::size_t k,
                                            std::vector<std::uint32_t>& order) {
  order.resize(sims.size());
  std::iota(order.begin(), order.end(), 0u);
  order.erase(order.begin() + self);
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    if (sims[a] != sims[b]) return sims[a] > sims[b];
    return a < b;
  };
  const std::size_t others = k - 1;
  if (others > 0) {
    std::nth_element(order.begin(), order.begin() + (others - 1), order.end(), better);
    std::sort(order.begin(), order.begin() + others, better);
  }
  std::vector<std::uint32_t> out;
  out.reserve(k);
  out.push_back(self);
  out.insert(out.end(), order.begin(), order.begin() + others);
  return out;
}

void check_k(const EmbeddingSpace& space, std::size_t k) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (k > space.size()) {
    throw InvalidArgument("k=" + std::to_string(k) + " exceeds vocabulary size " +
                          std::to_string(space.size()));
  }
}

}  // namespace

NeighborSet k_nearest(const EmbeddingSpace& space, std::uint32_t word,
                      std::size_t k) {
  require_normalized(space);
  check_k(space, k);
  if (word >= space.size()) throw InvalidArgument("word id out of range");
  const Eigen::VectorXd sims = space.vectors() * space.row(word).transpose();
  std::vector<std::uint32_t> order;
  const auto ids = select_neighbors(
      std::span<const double>(sims.data(), static_cast<std::size_t>(sims.size())),
      word, k, order);
  NeighborSet out;
  out.reserve(k);
  for (auto id : ids) out.push_back({id, sims[id]});
  return out;
}

NeighborSet k_nearest(const EmbeddingSpace& space, std::string_view word,
                      std::size_t k) {
  const auto id = space.find(word);
  if (!id) throw UnknownWord("word '" + std::string(word) + "' not in embedding space");
  return k_nearest(space, *id, k);
}

std::vector<std::vector<std::uint32_t>> all_k_nearest(
    const EmbeddingSpace& space, std::size_t k, std::size_t threads) {
  require_normalized(space);
  check_k(space, k);
  const auto n = static_cast<Eigen::Index>(space.size());
  constexpr Eigen::Index kBlock = 256;
  const auto blocks = static_cast<std::size_t>((n + kBlock - 1) / kBlock);
  std::vector<std::vector<std::uint32_t>> out(space.size());
  detail::parallel_for(blocks, threads, [&](std::size_t b) {
    const Eigen::Index begin = static_cast<Eigen::Index>(b) * kBlock;
    const Eigen::Index rows = std::min(kBlock, n - begin);
    const RowMatrix sims =
        space.vectors().middleRows(begin, rows) * space.vectors().transpose();
    std::vector<std::uint32_t> order;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto row = sims.row(r);
      out[static_cast<std::size_t>(begin + r)] = select_neighbors(
          std::span<const double>(row.data(), static_cast<std::size_t>(n)),
          static_cast<std::uint32_t>(begin + r), k, order);
    }
  });
  return out;
}

AlignmentMap fit_alignment(const EmbeddingSpace& source,
                           const EmbeddingSpace& target, std::uint32_t word,
                           std::span<const std::uint32_t> neighbors,
                           double ridge) {
  if (source.dim() != target.dim() || source.words() != target.words()) {
    throw InvalidArgument("alignment needs spaces with the same vocabulary and dimension");
  }
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    throw InvalidArgument("ridge must be finite and non-negative");
  }
  if (neighbors.empty()) throw InvalidArgument("alignment needs at least one neighbor");
  const auto d = static_cast<Eigen::Index>(source.dim());
  const auto k = static_cast<Eigen::Index>(neighbors.size());
  RowMatrix a(k, d);
  RowMatrix b(k, d);
  for (Eigen::Index i = 0; i < k; ++i) {
    a.row(i) = source.row(neighbors[static_cast<std::size_t>(i)]);
    b.row(i) = target.row(neighbors[static_cast<std::size_t>(i)]);
  }
  if (ridge == 0.0) {
    Eigen::ColPivHouseholderQR<RowMatrix> qr(a);
    if (qr.rank() < d) {
      throw RankDeficiencyError(
          "neighbor matrix for '" + source.words()[word] + "' has rank " +
          std::to_string(qr.rank()) + " < " + std::to_string(d) +
          "; use a positive ridge");
    }
  }
  Eigen::MatrixXd gram = a.transpose() * a;
  gram.diagonal().array() += ridge;
  const Eigen::MatrixXd rhs = a.transpose() * b;
  Eigen::LDLT<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success) {
    throw RankDeficiencyError("normal equations for '" + source.words()[word] +
                              "' could not be factored; use a positive ridge");
  }
  RowMatrix w = solver.solve(rhs);
  if (!w.allFinite()) {
    throw RankDeficiencyError("alignment for '" + source.words()[word] +
                              "' is not finite; use a positive ridge");
  }
  const double residual = (a * w - b).squaredNorm();
  return {source.words()[word], source.label(), target.label(), std::move(w),
          residual};
}

AlignmentMap learn_alignment(const EmbeddingSpace& source,
                             const EmbeddingSpace& target, std::uint32_t word,
                             std::size_t k, double ridge) {
  const NeighborSet nn = k_nearest(source, word, k);
  std::vector<std::uint32_t> ids;
  ids.reserve(nn.size());
  for (const auto& n : nn) ids.push_back(n.word);
  return fit_alignment(source, target, word, ids, ridge);
}

AlignmentMap learn_alignment(const EmbeddingSpace& source,
                             const EmbeddingSpace& target,
                             std::string_view word, std::size_t k,
                             double ridge) {
  const auto id = source.find(word);
  if (!id) throw UnknownWord("word '" + std::string(word) + "' not in embedding space");
  return learn_alignment(source, target, *id, k, ridge);
}

std::size_t AlignmentConfig::effective_k(std::size_t dim,
                                         std::size_t vocab_size) const {
  return k.value_or(std::min(4 * dim, vocab_size));
}

AlignmentSet::AlignmentSet(std::vector<std::string> labels,
                           std::vector<std::string> words,
                           std::vector<RowMatrix> warped,
                           std::vector<double> residuals,
                           std::vector<std::vector<RowMatrix>> transforms)
    : labels_(std::move(labels)),
      words_(std::move(words)),
      warped_(std::move(warped)),
      residuals_(std::move(residuals)),
      transforms_(std::move(transforms)) {
  if (warped_.size() != labels_.size() ||
      residuals_.size() != words_.size() * labels_.size()) {
    throw InvalidArgument("alignment set has inconsistent shape");
  }
}

double AlignmentSet::residual(std::uint32_t word, std::size_t t) const {
  if (word >= words_.size() || t >= labels_.size()) {
    throw InvalidArgument("alignment index out of range");
  }
  return residuals_[static_cast<std::size_t>(word) * labels_.size() + t];
}

const RowMatrix& AlignmentSet::transform(std::uint32_t word,
                                         std::size_t t) const {
  if (transforms_.empty()) throw InvalidArgument("alignment transforms were not kept");
  return transforms_.at(t).at(word);
}

AlignmentSet align_all_to_base(std::span<const EmbeddingSpace> spaces,
                               const AlignmentConfig& config) {
  if (spaces.size() < 2) throw InvalidArgument("alignment needs at least two snapshots");
  const EmbeddingSpace& base = spaces[0];
  for (const auto& s : spaces) {
    if (s.words() != base.words() || s.dim() != base.dim()) {
      throw InvalidArgument("snapshot '" + s.label() +
                            "' does not share the base vocabulary and dimension");
    }
  }
  const std::size_t n = spaces.size();
  const std::size_t vocab = base.size();
  const std::size_t d = base.dim();
  const std::size_t k = config.effective_k(d, vocab);

  std::vector<std::string> labels;
  for (const auto& s : spaces) labels.push_back(s.label());
  std::vector<RowMatrix> warped(n);
  std::vector<double> residuals(vocab * n, 0.0);
  std::vector<std::vector<RowMatrix>> transforms;
  if (config.keep_transforms) {
    transforms.resize(n);
    transforms[0].assign(vocab, RowMatrix::Identity(static_cast<Eigen::Index>(d),
                                                    static_cast<Eigen::Index>(d)));
  }
  warped[0] = base.vectors();

  for (std::size_t t = 1; t < n; ++t) {
    const EmbeddingSpace& source = spaces[t];
    // Identical spaces give identical fits.
    std::size_t same = t;
    for (std::size_t u = 1; u < t; ++u) {
      if (spaces[u] == source) {
        same = u;
        break;
      }
    }
    if (same != t) {
      warped[t] = warped[same];
      for (std::size_t w = 0; w < vocab; ++w) residuals[w * n + t] = residuals[w * n + same];
      if (config.keep_transforms) transforms[t] = transforms[same];
      continue;
    }

    const auto neighbors = all_k_nearest(source, k, config.threads);
    warped[t].resize(static_cast<Eigen::Index>(vocab), static_cast<Eigen::Index>(d));
    if (config.keep_transforms) transforms[t].resize(vocab);
    detail::parallel_for(vocab, config.threads, [&](std::size_t w) {
      const auto word = static_cast<std::uint32_t>(w);
      AlignmentMap map;
      try {
        map = fit_alignment(source, base, word, neighbors[w], config.ridge);
      } catch (const RankDeficiencyError& e) {
        throw RankDeficiencyError("word '" + base.words()[w] + "', snapshot '" +
                                  source.label() + "': " + e.what());
      } catch (const Error& e) {
        throw Error("word '" + base.words()[w] + "', snapshot '" +
                    source.label() + "': " + e.what());
      }
      warped[t].row(static_cast<Eigen::Index>(w)) =
          source.row(word) * map.transform;
      residuals[w * n + t] = map.residual;
      if (config.keep_transforms) transforms[t][w] = std::move(map.transform);
    });
  }
  return AlignmentSet(std::move(labels), base.words(), std::move(warped),
                      std::move(residuals), std::move(transforms));
}

void write_alignment_csv(std::ostream& out, const AlignmentSet& alignments) {
  out << "word,snapshot,residual\n";
  for (std::uint32_t w = 0; w < alignments.size(); ++w) {
    for (std::size_t t = 1; t < alignments.snapshot_count(); ++t) {
      out << csv::field(alignments.words()[w]) << ','
          << csv::field(alignments.labels()[t]) << ','
          << csv::number(alignments.residual(w, t), 9) << '\n';
    }
  }
  if (!out) throw IoError("failed to write alignment CSV");
}

}  // namespace lingshift
