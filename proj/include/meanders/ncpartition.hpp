#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "meanders/errors.hpp"
#include "meanders/pairing.hpp"

namespace meanders {

// Non-crossing partition of {0,...,n-1}. Canonical storage is the
// element -> block id map with blocks numbered by smallest element.
class NCPartition {
 public:
  static NCPartition from_block_of(std::vector<Index> block_of) {
    validate(block_of);
    canonicalize(block_of);
    return NCPartition(std::move(block_of));
  }

  static NCPartition from_blocks(Index n, const std::vector<std::vector<Index>>& blocks) {
    std::vector<Index> block_of(static_cast<std::size_t>(n), -1);
    Index bid = 0;
    for (const auto& block : blocks) {
      if (block.empty()) throw ValidationError("empty block");
      for (Index e : block) {
        if (e < 0 || e >= n) throw ValidationError("element out of range");
        if (block_of[static_cast<std::size_t>(e)] != -1)
          throw ValidationError("element in two blocks");
        block_of[static_cast<std::size_t>(e)] = bid;
      }
      ++bid;
    }
    for (Index e = 0; e < n; ++e)
      if (block_of[static_cast<std::size_t>(e)] == -1)
        throw ValidationError("element " + std::to_string(e) + " uncovered");
    return from_block_of(std::move(block_of));
  }

  Index n() const { return static_cast<Index>(block_of_.size()); }
  Index block_count() const { return block_count_; }
  Index block_of(Index e) const { return block_of_[static_cast<std::size_t>(e)]; }
  const std::vector<Index>& block_index_sequence() const { return block_of_; }

  std::vector<std::vector<Index>> blocks() const {
    std::vector<std::vector<Index>> out(static_cast<std::size_t>(block_count_));
    for (Index e = 0; e < n(); ++e)
      out[static_cast<std::size_t>(block_of_[static_cast<std::size_t>(e)])].push_back(e);
    return out;
  }

  std::vector<Index> block_sizes() const {
    std::vector<Index> s(static_cast<std::size_t>(block_count_), 0);
    for (Index b : block_of_) ++s[static_cast<std::size_t>(b)];
    return s;
  }

  Index max_block_size() const {
    auto s = block_sizes();
    return *std::max_element(s.begin(), s.end());
  }

  friend bool operator==(const NCPartition&, const NCPartition&) = default;

 private:
  explicit NCPartition(std::vector<Index> block_of) : block_of_(std::move(block_of)) {
    block_count_ = 0;
    for (Index b : block_of_) block_count_ = std::max(block_count_, b + 1);
  }

  // Stack scan: an element of an already-open block must continue the top
  // block, otherwise two blocks interleave.
  static void validate(const std::vector<Index>& block_of) {
    const std::size_t n = block_of.size();
    if (n == 0) throw ValidationError("partition of the empty set");
    Index maxb = -1;
    for (Index b : block_of) {
      if (b < 0) throw ValidationError("negative block id");
      maxb = std::max(maxb, b);
    }
    std::vector<Index> remaining(static_cast<std::size_t>(maxb) + 1, 0);
    for (Index b : block_of) ++remaining[static_cast<std::size_t>(b)];
    for (Index r : remaining)
      if (r == 0) throw ValidationError("block ids not contiguous");
    std::vector<char> opened(static_cast<std::size_t>(maxb) + 1, 0);
    std::vector<Index> open;
    for (std::size_t i = 0; i < n; ++i) {
      const Index b = block_of[i];
      if (!opened[static_cast<std::size_t>(b)]) {
        opened[static_cast<std::size_t>(b)] = 1;
        open.push_back(b);
      } else if (open.empty() || open.back() != b) {
        throw ValidationError("blocks cross at element " + std::to_string(i));
      }
      if (--remaining[static_cast<std::size_t>(b)] == 0) {
        open.pop_back();
      }
    }
  }

  // Renumber blocks by smallest element.
  static void canonicalize(std::vector<Index>& block_of) {
    Index maxb = 0;
    for (Index b : block_of) maxb = std::max(maxb, b);
    std::vector<Index> relabel(static_cast<std::size_t>(maxb) + 1, -1);
    Index next = 0;
    for (Index& b : block_of) {
      if (relabel[static_cast<std::size_t>(b)] == -1) relabel[static_cast<std::size_t>(b)] = next++;
      b = relabel[static_cast<std::size_t>(b)];
    }
  }

  std::vector<Index> block_of_;
  Index block_count_ = 0;
};

}  // namespace meanders
