#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "lingshift/alignment.hpp"
#include "lingshift/changepoint.hpp"
#include "lingshift/embedding.hpp"
#include "lingshift/huffman.hpp"
#include "lingshift/random.hpp"

namespace {

using namespace lingshift;

RowMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  RowMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

std::vector<std::uint64_t> zipf_counts(std::size_t n) {
  std::vector<std::uint64_t> counts(n);
  for (std::size_t i = 0; i < n; ++i) counts[i] = 1'000'000 / (i + 1) + 1;
  return counts;
}

EmbeddingSpace random_space(std::size_t n, std::size_t d, Rng& rng, const std::string& label) {
  std::vector<std::string> words;
  for (std::size_t i = 0; i < n; ++i) words.push_back("w" + std::to_string(i));
  return EmbeddingSpace(label, std::move(words),
                        random_matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d), rng),
                        false)
      .normalized_copy();
}

void BM_HuffmanBuild(benchmark::State& state) {
  const auto counts = zipf_counts(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(HuffmanTree::build(counts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HuffmanBuild)->Arg(1'000)->Arg(100'000);

void BM_SgdStep(benchmark::State& state) {
  const std::size_t n = 50'000;
  const auto dim = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const auto tree = HuffmanTree::build(zipf_counts(n));
  auto model = SkipGramModel::initialize(n, dim, rng);
  std::vector<double> scratch(dim);
  for (auto _ : state) {
    const auto center = static_cast<std::uint32_t>(rng.below(n));
    const auto context = static_cast<std::uint32_t>(rng.below(n));
    benchmark::DoNotOptimize(sgd_step(model, tree, center, context, 0.025, scratch));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SgdStep)->Arg(50)->Arg(200);

void BM_AllKNearest(benchmark::State& state) {
  Rng rng(2);
  const auto space = random_space(static_cast<std::size_t>(state.range(0)), 50, rng, "0");
  for (auto _ : state) benchmark::DoNotOptimize(all_k_nearest(space, 200));
}
BENCHMARK(BM_AllKNearest)->Arg(2'000)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_LearnAlignment(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  const auto source = random_space(5'000, dim, rng, "0");
  const auto target = random_space(5'000, dim, rng, "1");
  std::uint32_t word = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(learn_alignment(source, target, word, 4 * dim, 1e-3));
    word = (word + 1) % 5'000;
  }
}
BENCHMARK(BM_LearnAlignment)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_BootstrapPvalues(benchmark::State& state) {
  Rng rng(4);
  std::vector<double> z(static_cast<std::size_t>(state.range(0)));
  for (auto& v : z) v = rng.normal();
  std::uint64_t word = 0;
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_pvalues(z, 1000, {1, word++}));
}
BENCHMARK(BM_BootstrapPvalues)->Arg(20)->Arg(100)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
