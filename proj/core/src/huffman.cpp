#include "lingshift/huffman.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

#include "lingshift/corpus.hpp"
#include "lingshift/error.hpp"

namespace lingshift {

HuffmanTree HuffmanTree::build(std::span<const std::uint64_t> counts) {
  const std::size_t leaves = counts.size();
  if (leaves == 0) throw InvalidArgument("cannot build a Huffman tree over no words");
  if (leaves < 2) {
    throw InvalidArgument("hierarchical softmax needs at least two words");
  }
  if (std::any_of(counts.begin(), counts.end(),
                  [](std::uint64_t c) { return c == 0; })) {
    throw InvalidArgument("Huffman weights must be positive");
  }

  // Node ids: leaves 0..leaves-1, merged nodes leaves..2*leaves-2.
  using Entry = std::tuple<std::uint64_t, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::uint32_t i = 0; i < leaves; ++i) heap.emplace(counts[i], i);

  const std::size_t total = 2 * leaves - 1;
  std::vector<std::uint32_t> parent(total, 0);
  std::vector<std::uint8_t> branch(total, 0);
  auto next = static_cast<std::uint32_t>(leaves);
  while (heap.size() > 1) {
    const auto [w0, a] = heap.top();
    heap.pop();
    const auto [w1, b] = heap.top();
    heap.pop();
    parent[a] = next;
    parent[b] = next;
    branch[a] = 0;
    branch[b] = 1;
    heap.emplace(w0 + w1, next);
    ++next;
  }
  const std::uint32_t root = next - 1;

  HuffmanTree tree;
  tree.offsets_.reserve(leaves + 1);
  tree.offsets_.push_back(0);
  std::vector<std::uint8_t> bits;
  std::vector<std::uint32_t> nodes;
  for (std::uint32_t leaf = 0; leaf < leaves; ++leaf) {
    bits.clear();
    nodes.clear();
    for (std::uint32_t n = leaf; n != root; n = parent[n]) {
      bits.push_back(branch[n]);
      nodes.push_back(parent[n] - static_cast<std::uint32_t>(leaves));
    }
    tree.bits_.insert(tree.bits_.end(), bits.rbegin(), bits.rend());
    tree.nodes_.insert(tree.nodes_.end(), nodes.rbegin(), nodes.rend());
    tree.offsets_.push_back(tree.bits_.size());
  }
  return tree;
}

std::span<const std::uint8_t> HuffmanTree::code(std::uint32_t word) const {
  const std::size_t b = offsets_.at(word);
  return std::span<const std::uint8_t>(bits_).subspan(b, offsets_.at(word + 1) - b);
}

std::span<const std::uint32_t> HuffmanTree::path(std::uint32_t word) const {
  const std::size_t b = offsets_.at(word);
  return std::span<const std::uint32_t>(nodes_).subspan(b, offsets_.at(word + 1) - b);
}

HuffmanTree build_huffman_tree(const Vocabulary& vocab,
                               std::size_t snapshot_index) {
  if (vocab.size() == 0) throw InvalidArgument("empty vocabulary");
  const auto counts = vocab.counts_in(snapshot_index);
  return HuffmanTree::build(counts);
}

}  // namespace lingshift
