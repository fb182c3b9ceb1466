#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "lingshift/alignment.hpp"
#include "lingshift/error.hpp"
#include "lingshift/random.hpp"
#include "support.hpp"

namespace lingshift {
namespace {

using testing::gaussian_matrix;
using testing::random_orthogonal;
using testing::random_space;
using testing::rotated;

EmbeddingSpace basis_space() {
  RowMatrix v(3, 2);
  v << 1, 0, 0, 1, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  return EmbeddingSpace("0", {"x", "y", "diag"}, v, true);
}

double ridge_objective(const EmbeddingSpace& source, const EmbeddingSpace& target,
                       const std::vector<std::uint32_t>& rows, const RowMatrix& w, double ridge) {
  double total = ridge * w.squaredNorm();
  for (auto r : rows) total += (source.row(r) * w - target.row(r)).squaredNorm();
  return total;
}

TEST(KNearest, SelfComesFirst) {
  RowMatrix v = RowMatrix::Identity(3, 3);
  const EmbeddingSpace space("0", {"a", "b", "c"}, v, true);
  const auto nn = k_nearest(space, "a", 1);
  ASSERT_EQ(nn.size(), 1u);
  EXPECT_EQ(nn[0].word, 0u);
  EXPECT_DOUBLE_EQ(nn[0].similarity, 1.0);
}

TEST(KNearest, DiagonalIsSecond) {
  const auto nn = k_nearest(basis_space(), "x", 2);
  ASSERT_EQ(nn.size(), 2u);
  EXPECT_EQ(nn[0].word, 0u);
  EXPECT_EQ(nn[1].word, 2u);
  EXPECT_NEAR(nn[1].similarity, 1 / std::sqrt(2.0), 1e-15);
}

TEST(KNearest, WholeVocabularyIsSorted) {
  Rng rng(2);
  const auto space = random_space(40, 5, rng);
  const auto nn = k_nearest(space, 7u, 40);
  ASSERT_EQ(nn.size(), 40u);
  EXPECT_EQ(nn[0].word, 7u);
  std::set<std::uint32_t> seen;
  for (std::size_t i = 0; i < nn.size(); ++i) {
    seen.insert(nn[i].word);
    if (i > 1) EXPECT_GE(nn[i - 1].similarity, nn[i].similarity);
  }
  EXPECT_EQ(seen.size(), 40u);
}

TEST(KNearest, TiesGoToSmallerId) {
  RowMatrix v(4, 2);
  v << 1, 0, 0, 1, 0, 1, 0, -1;
  const EmbeddingSpace space("0", {"a", "b", "c", "d"}, v, true);
  const auto nn = k_nearest(space, 0u, 3);
  EXPECT_EQ(nn[1].word, 1u);
  EXPECT_EQ(nn[2].word, 2u);
}

TEST(KNearest, Preconditions) {
  const auto space = basis_space();
  EXPECT_THROW(k_nearest(space, 0u, 4), InvalidArgument);
  EXPECT_THROW(k_nearest(space, 0u, 0), InvalidArgument);
  EXPECT_THROW(k_nearest(space, "nope", 1), UnknownWord);
  const EmbeddingSpace raw("0", {"a", "b"}, RowMatrix::Identity(2, 2) * 2.0, false);
  EXPECT_THROW(k_nearest(raw, 0u, 1), InvalidArgument);
}

TEST(KNearest, BatchedMatchesSingleQueries) {
  Rng rng(3);
  const auto space = random_space(300, 6, rng);
  for (std::size_t threads : {1u, 3u}) {
    const auto all = all_k_nearest(space, 12, threads);
    ASSERT_EQ(all.size(), 300u);
    for (std::uint32_t w = 0; w < 300; w += 7) {
      const auto single = k_nearest(space, w, 12);
      ASSERT_EQ(all[w].size(), 12u);
      for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(all[w][i], single[i].word);
    }
  }
}

TEST(LearnAlignment, IdentityWithoutRidge) {
  Rng rng(4);
  const auto space = random_space(30, 4, rng);
  const auto map = learn_alignment(space, space, 5u, 10, 0.0);
  EXPECT_NEAR(map.residual, 0.0, 1e-20);
  EXPECT_LT((map.transform - RowMatrix::Identity(4, 4)).norm(), 1e-10);
  for (const auto& n : k_nearest(space, 5u, 10)) {
    EXPECT_LT((space.row(n.word) * map.transform - space.row(n.word)).norm(), 1e-12);
  }
}

TEST(LearnAlignment, RecoversRotation) {
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto source = random_space(120, 8, rng);
    const RowMatrix q = random_orthogonal(8, rng);
    const auto target = rotated(source, q, "1");
    const auto map = learn_alignment(source, target, static_cast<std::uint32_t>(trial * 11), 32, 1e-8);
    EXPECT_LT((map.transform - q).norm(), 1e-6);
    EXPECT_GE(map.residual, 0.0);
  }
}

TEST(LearnAlignment, FewNeighborsWithRidge) {
  Rng rng(6);
  const auto source = random_space(50, 10, rng);
  const auto target = random_space(50, 10, rng, "1");
  const auto map = learn_alignment(source, target, 0u, 4, 1e-3);
  EXPECT_GE(map.residual, 0.0);
  EXPECT_TRUE(map.transform.allFinite());
  EXPECT_EQ(map.source_label, "0");
  EXPECT_EQ(map.target_label, "1");
  EXPECT_EQ(map.word, "w0");
}

TEST(LearnAlignment, RankDeficientWithoutRidge) {
  Rng rng(7);
  const auto source = random_space(50, 10, rng);
  EXPECT_THROW(learn_alignment(source, source, 0u, 4, 0.0), RankDeficiencyError);
  EXPECT_THROW(learn_alignment(source, source, 0u, 4, -1.0), InvalidArgument);
}

TEST(LearnAlignment, SolutionIsRidgeOptimal) {
  Rng rng(8);
  const auto source = random_space(80, 6, rng);
  const auto target = random_space(80, 6, rng, "1");
  const double ridge = 1e-3;
  const auto nn = k_nearest(source, 3u, 20);
  std::vector<std::uint32_t> rows;
  for (const auto& n : nn) rows.push_back(n.word);
  const auto map = fit_alignment(source, target, 3u, rows, ridge);
  const double best = ridge_objective(source, target, rows, map.transform, ridge);
  double fitted = 0.0;
  for (auto r : rows) fitted += (source.row(r) * map.transform - target.row(r)).squaredNorm();
  EXPECT_NEAR(map.residual, fitted, 1e-12);
  for (int dir = 0; dir < 100; ++dir) {
    RowMatrix delta = gaussian_matrix(6, 6, rng);
    delta *= 1e-3 / delta.norm();
    EXPECT_GE(ridge_objective(source, target, rows, map.transform + delta, ridge), best);
  }
}

TEST(LearnAlignment, MismatchedSpacesRejected) {
  Rng rng(9);
  const auto a = random_space(20, 4, rng);
  const auto b = random_space(20, 5, rng);
  EXPECT_THROW(learn_alignment(a, b, 0u, 10, 1e-3), InvalidArgument);
}

TEST(AlignAll, IdenticalSpacesHaveZeroResidual) {
  Rng rng(10);
  const auto base = random_space(60, 5, rng);
  const std::vector<EmbeddingSpace> spaces{base, base.relabeled("1"), base.relabeled("2")};
  AlignmentConfig cfg;
  cfg.ridge = 1e-9;
  const auto set = align_all_to_base(spaces, cfg);
  ASSERT_EQ(set.snapshot_count(), 3u);
  for (std::uint32_t w = 0; w < 60; ++w) {
    for (std::size_t t = 0; t < 3; ++t) {
      EXPECT_NEAR(set.residual(w, t), 0.0, 1e-12);
      EXPECT_LT((set.warped(t).row(w) - base.row(w)).norm(), 1e-6);
    }
  }
}

TEST(AlignAll, RecoversRotationPerSnapshot) {
  Rng rng(11);
  const auto base = random_space(100, 6, rng);
  const RowMatrix q = random_orthogonal(6, rng);
  const RowMatrix q2 = random_orthogonal(6, rng);
  const std::vector<EmbeddingSpace> spaces{base, rotated(base, q, "1"), rotated(base, q2, "2")};
  AlignmentConfig cfg;
  cfg.k = 24;
  cfg.ridge = 1e-8;
  cfg.keep_transforms = true;
  cfg.threads = 2;
  const auto set = align_all_to_base(spaces, cfg);
  for (std::uint32_t w = 0; w < 100; w += 9) {
    // Maps go from snapshot t back onto the base, so they invert the rotation.
    EXPECT_LT((set.transform(w, 1) - q.transpose()).norm(), 1e-6);
    EXPECT_LT((set.transform(w, 2) - q2.transpose()).norm(), 1e-6);
    EXPECT_LT((set.transform(w, 0) - RowMatrix::Identity(6, 6)).norm(), 1e-15);
  }
}

TEST(AlignAll, NeedsTwoSpaces) {
  Rng rng(12);
  const std::vector<EmbeddingSpace> one{random_space(10, 3, rng)};
  EXPECT_THROW(align_all_to_base(one), InvalidArgument);
}

TEST(AlignAll, ErrorsNameWordAndSnapshot) {
  Rng rng(13);
  const auto base = random_space(30, 8, rng);
  const std::vector<EmbeddingSpace> spaces{base, base.relabeled("later")};
  AlignmentConfig cfg;
  cfg.k = 3;
  cfg.ridge = 0.0;
  try {
    align_all_to_base(spaces, cfg);
    FAIL() << "expected RankDeficiencyError";
  } catch (const RankDeficiencyError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("later"), std::string::npos) << msg;
    EXPECT_NE(msg.find("w0"), std::string::npos) << msg;
  }
}

TEST(AlignAll, NeighborhoodsSurviveRotation) {
  Rng rng(14);
  const auto base = random_space(200, 7, rng);
  const auto turned = rotated(base, random_orthogonal(7, rng), "1");
  const auto a = all_k_nearest(base, 15);
  const auto b = all_k_nearest(turned, 15);
  for (std::uint32_t w = 0; w < 200; ++w) {
    EXPECT_EQ(std::set<std::uint32_t>(a[w].begin(), a[w].end()),
              std::set<std::uint32_t>(b[w].begin(), b[w].end()));
  }
}

TEST(AlignmentConfig, DefaultNeighborCount) {
  AlignmentConfig cfg;
  EXPECT_EQ(cfg.effective_k(50, 10000), 200u);
  EXPECT_EQ(cfg.effective_k(50, 120), 120u);
  cfg.k = 7;
  EXPECT_EQ(cfg.effective_k(50, 10000), 7u);
}

TEST(AlignmentCsv, OneRowPerWordAfterBase) {
  Rng rng(15);
  const auto base = random_space(5, 3, rng);
  const std::vector<EmbeddingSpace> spaces{base, base.relabeled("1990"), base.relabeled("2000")};
  std::ostringstream out;
  write_alignment_csv(out, align_all_to_base(spaces));
  const std::string csv = out.str();
  EXPECT_EQ(csv.rfind("word,snapshot,residual\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
  EXPECT_NE(csv.find("w0,1990,"), std::string::npos);
}

}  // namespace
}  // namespace lingshift
