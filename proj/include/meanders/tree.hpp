#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "meanders/errors.hpp"
#include "meanders/pairing.hpp"

namespace meanders {

// Nonnegative +/-1 walk returning to zero.
class DyckPath {
 public:
  static DyckPath from_steps(std::vector<std::int8_t> steps) {
    long h = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (steps[i] != 1 && steps[i] != -1)
        throw ValidationError("Dyck step must be +1 or -1");
      h += steps[i];
      if (h < 0) throw ValidationError("Dyck prefix sum negative at " + std::to_string(i));
    }
    if (h != 0) throw ValidationError("Dyck path does not return to zero");
    return DyckPath(std::move(steps));
  }

  static DyckPath trusted(std::vector<std::int8_t> steps) {
#ifndef NDEBUG
    return from_steps(std::move(steps));
#else
    return DyckPath(std::move(steps));
#endif
  }

  Index half_length() const { return static_cast<Index>(steps_.size() / 2); }
  const std::vector<std::int8_t>& steps() const { return steps_; }

  friend bool operator==(const DyckPath&, const DyckPath&) = default;

 private:
  explicit DyckPath(std::vector<std::int8_t> steps) : steps_(std::move(steps)) {}
  std::vector<std::int8_t> steps_;
};

// Rooted ordered (plane) tree. Vertices are indices 0..v-1; children lists
// keep left-to-right order. Root is vertex 0 and vertices are numbered in
// preorder by every constructor in this library, so the preorder out-degree
// sequence doubles as a canonical key.
class PlanarTree {
 public:
  // Builds from the preorder out-degree sequence (d_0,...,d_{v-1}),
  // sum d_i = v-1. Throws ValidationError if the sequence is not a valid
  // preorder code.
  static PlanarTree from_preorder_degrees(const std::vector<Index>& degrees) {
    const std::size_t v = degrees.size();
    if (v == 0) throw ValidationError("tree needs at least one vertex");
    std::vector<std::vector<Index>> children(v);
    std::vector<Index> stack;     // vertices with unfilled child slots
    std::vector<Index> remaining(v);
    stack.reserve(v);
    long total = 0;
    for (std::size_t i = 0; i < v; ++i) {
      if (degrees[i] < 0 || static_cast<std::size_t>(degrees[i]) >= v)
        throw ValidationError("out-degree outside [0, v)");
      total += degrees[i];
      children[i].reserve(static_cast<std::size_t>(degrees[i]));
      if (i > 0) {
        if (stack.empty())
          throw ValidationError("preorder degree sequence exhausted early");
        const Index parent = stack.back();
        children[static_cast<std::size_t>(parent)].push_back(static_cast<Index>(i));
        if (--remaining[static_cast<std::size_t>(parent)] == 0) stack.pop_back();
      }
      remaining[i] = degrees[i];
      if (degrees[i] > 0) stack.push_back(static_cast<Index>(i));
    }
    if (total != static_cast<long>(v) - 1 || !stack.empty())
      throw ValidationError("degree sequence does not encode a tree");
    return PlanarTree(std::move(children));
  }

  static PlanarTree single_vertex() {
    return PlanarTree(std::vector<std::vector<Index>>(1));
  }

  Index vertex_count() const { return static_cast<Index>(children_.size()); }
  Index root() const { return 0; }
  Index out_degree(Index v) const {
    return static_cast<Index>(children_[static_cast<std::size_t>(v)].size());
  }
  const std::vector<Index>& children(Index v) const {
    return children_[static_cast<std::size_t>(v)];
  }

  Index leaf_count() const {
    Index c = 0;
    for (const auto& ch : children_) c += ch.empty() ? 1 : 0;
    return c;
  }

  // Preorder out-degree sequence; canonical, mirrors from_preorder_degrees.
  std::vector<Index> preorder_degrees() const {
    std::vector<Index> out;
    out.reserve(children_.size());
    std::vector<std::pair<Index, std::size_t>> stack;  // (vertex, next child)
    stack.emplace_back(0, 0);
    out.push_back(out_degree(0));
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      const auto& ch = children(v);
      if (next == ch.size()) {
        stack.pop_back();
        continue;
      }
      const Index c = ch[next++];
      out.push_back(out_degree(c));
      stack.emplace_back(c, 0);
    }
    return out;
  }

  friend bool operator==(const PlanarTree&, const PlanarTree&) = default;

 private:
  explicit PlanarTree(std::vector<std::vector<Index>> children)
      : children_(std::move(children)) {}
  std::vector<std::vector<Index>> children_;
};

}  // namespace meanders
