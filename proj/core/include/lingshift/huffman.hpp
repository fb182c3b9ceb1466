#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lingshift {

class Vocabulary;

// Frequency-weighted binary prefix code over word ids, used as the
// hierarchical-softmax tree. Internal nodes are numbered 0..|V|-2 in the
// order they are created; the root is |V|-2. A word's path lists the
// internal nodes from the root down to its parent, and code[i] is the branch
// taken at path[i].
class HuffmanTree {
 public:
  // Ties between equal weights go to the smaller node id (leaves are ids
  // 0..|V|-1, merged nodes follow). Needs at least two positive counts.
  static HuffmanTree build(std::span<const std::uint64_t> counts);

  std::size_t leaf_count() const noexcept { return offsets_.size() - 1; }
  std::size_t internal_count() const noexcept { return leaf_count() - 1; }

  std::span<const std::uint8_t> code(std::uint32_t word) const;
  std::span<const std::uint32_t> path(std::uint32_t word) const;
  std::size_t code_length(std::uint32_t word) const {
    return offsets_.at(word + 1) - offsets_.at(word);
  }

 private:
  std::vector<std::uint8_t> bits_;
  std::vector<std::uint32_t> nodes_;
  std::vector<std::size_t> offsets_;
};

// Tree over the vocabulary weighted by one snapshot's counts.
HuffmanTree build_huffman_tree(const Vocabulary& vocab,
                               std::size_t snapshot_index);

}  // namespace lingshift
