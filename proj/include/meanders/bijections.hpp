#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "meanders/cycles.hpp"
#include "meanders/errors.hpp"
#include "meanders/ncpartition.hpp"
#include "meanders/pairing.hpp"
#include "meanders/tree.hpp"

namespace meanders {

// Depth-first contour: +1 entering an edge, -1 leaving it, children visited
// left to right. Tree on n+1 vertices <-> path of length 2n.
inline DyckPath tree_to_dyck(const PlanarTree& t) {
  std::vector<std::int8_t> steps;
  steps.reserve(static_cast<std::size_t>(2 * (t.vertex_count() - 1)));
  std::vector<std::pair<Index, std::size_t>> stack;  // (vertex, next child slot)
  stack.emplace_back(t.root(), 0);
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    const auto& ch = t.children(v);
    if (next == ch.size()) {
      stack.pop_back();
      if (!stack.empty()) steps.push_back(-1);
      continue;
    }
    steps.push_back(1);
    const Index c = ch[next++];
    stack.emplace_back(c, 0);
  }
  return DyckPath::trusted(std::move(steps));
}

inline PlanarTree dyck_to_tree(const DyckPath& p) {
  std::vector<Index> degrees;
  degrees.reserve(static_cast<std::size_t>(p.half_length()) + 1);
  degrees.push_back(0);
  std::vector<std::size_t> stack{0};  // positions into degrees
  for (std::int8_t s : p.steps()) {
    if (s == 1) {
      ++degrees[stack.back()];
      stack.push_back(degrees.size());
      degrees.push_back(0);
    } else {
      stack.pop_back();
    }
  }
  return PlanarTree::from_preorder_degrees(degrees);
}

// +1 at position i opens an arc, -1 closes the most recent open arc.
inline Pairing dyck_to_pairing(const DyckPath& p) {
  const auto& steps = p.steps();
  std::vector<Index> partner(steps.size());
  std::vector<Index> open;
  open.reserve(steps.size() / 2);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i] == 1) {
      open.push_back(static_cast<Index>(i));
    } else {
      const Index j = open.back();
      open.pop_back();
      partner[i] = j;
      partner[static_cast<std::size_t>(j)] = static_cast<Index>(i);
    }
  }
  return Pairing::trusted(std::move(partner));
}

inline DyckPath pairing_to_dyck(const Pairing& pr) {
  std::vector<std::int8_t> steps(static_cast<std::size_t>(pr.points()));
  for (Index i = 0; i < pr.points(); ++i)
    steps[static_cast<std::size_t>(i)] = pr.partner(i) > i ? 1 : -1;
  return DyckPath::trusted(std::move(steps));
}

// The bijection beta between rooted plane trees on n+1 vertices and
// non-crossing pairings of [2n], composed through Dyck paths. Every pair
// (x, x+1) of beta(t) corresponds to a leaf of t.
inline Pairing tree_to_pairing(const PlanarTree& t) {
  return dyck_to_pairing(tree_to_dyck(t));
}

inline PlanarTree pairing_to_tree(const Pairing& p) {
  return dyck_to_tree(pairing_to_dyck(p));
}

// (0,1)(2,3)...(2n-2,2n-1).
inline Pairing comb_pairing(Index n) {
  if (n < 1) throw ValidationError("comb pairing needs n >= 1");
  std::vector<Index> partner(static_cast<std::size_t>(2 * n));
  for (Index i = 0; i < n; ++i) {
    partner[static_cast<std::size_t>(2 * i)] = 2 * i + 1;
    partner[static_cast<std::size_t>(2 * i + 1)] = 2 * i;
  }
  return Pairing::trusted(std::move(partner));
}

// Concatenation of fully nested rainbow blocks of sizes 2*alpha_i; block i
// starts at offset 2*(alpha_1 + ... + alpha_{i-1}).
inline Pairing rainbow_pairing(const std::vector<Index>& alpha) {
  long total = 0;
  for (Index a : alpha) {
    if (a < 1) throw ValidationError("rainbow part must be positive");
    total += a;
  }
  if (total < 1) throw ValidationError("rainbow needs at least one part");
  std::vector<Index> partner(static_cast<std::size_t>(2 * total));
  Index offset = 0;
  for (Index a : alpha) {
    for (Index i = 0; i < a; ++i) {
      const Index x = offset + i;
      const Index y = offset + 2 * a - 1 - i;
      partner[static_cast<std::size_t>(x)] = y;
      partner[static_cast<std::size_t>(y)] = x;
    }
    offset += 2 * a;
  }
  return Pairing::trusted(std::move(partner));
}

// Comb-like meander systems (lower pairing fixed to the comb) are in
// bijection with NC partitions of [n]: comb pair i is element i, a block
// {b_1 < ... < b_k} becomes one cycle of half-length k whose upper arcs are
// the outer arc (2b_1, 2b_k+1) and the chain (2b_i+1, 2b_{i+1}).
inline MeanderSystem ncpartition_to_comb_meander(const NCPartition& p) {
  const Index n = p.n();
  std::vector<Index> upper(static_cast<std::size_t>(2 * n));
  for (const auto& block : p.blocks()) {
    auto link = [&](Index x, Index y) {
      upper[static_cast<std::size_t>(x)] = y;
      upper[static_cast<std::size_t>(y)] = x;
    };
    link(2 * block.front(), 2 * block.back() + 1);
    for (std::size_t i = 0; i + 1 < block.size(); ++i)
      link(2 * block[i] + 1, 2 * block[i + 1]);
  }
  return MeanderSystem(Pairing::trusted(std::move(upper)), comb_pairing(n));
}

inline NCPartition comb_meander_to_ncpartition(const MeanderSystem& ms) {
  if (ms.lower != comb_pairing(ms.n()))
    throw NotCombLikeError("lower pairing is not the comb");
  std::vector<Index> block_of(static_cast<std::size_t>(ms.n()), -1);
  Index bid = 0;
  CycleScratch scratch;
  for_each_cycle(ms, scratch, [&](const std::vector<Index>& sup) {
    for (std::size_t i = 0; i < sup.size(); i += 2)
      block_of[static_cast<std::size_t>(sup[i] / 2)] = bid;
    ++bid;
  });
  return NCPartition::from_block_of(std::move(block_of));
}

// NC partitions of [n] <-> rooted plane trees on n+1 vertices; a block of
// size k corresponds to a vertex of out-degree k. Elements are the non-root
// vertices in preorder; the block of an element is its parent's child set.
inline PlanarTree ncpartition_to_tree(const NCPartition& p) {
  const Index n = p.n();
  const auto blocks = p.blocks();
  std::vector<Index> degrees(static_cast<std::size_t>(n) + 1, 0);
  // Walk elements in preorder position; the children of the vertex that owns
  // interval [lo, hi) are the block of element lo.
  struct Frame {
    Index parent_vertex;
    Index lo, hi;
  };
  std::vector<Frame> stack{{0, 0, n}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.lo >= f.hi) continue;
    const auto& block = blocks[static_cast<std::size_t>(p.block_of(f.lo))];
    degrees[static_cast<std::size_t>(f.parent_vertex)] =
        static_cast<Index>(block.size());
    for (std::size_t i = 0; i < block.size(); ++i) {
      const Index child_vertex = block[i] + 1;  // preorder slot of element
      const Index lo = block[i] + 1;
      const Index hi = i + 1 < block.size() ? block[i + 1] : f.hi;
      stack.push_back({child_vertex, lo, hi});
    }
  }
  return PlanarTree::from_preorder_degrees(degrees);
}

inline NCPartition tree_to_ncpartition(const PlanarTree& t) {
  const Index n = t.vertex_count() - 1;
  if (n < 1) throw ValidationError("tree must have at least 2 vertices");
  // Element of a non-root vertex = its preorder position - 1.
  std::vector<Index> element(static_cast<std::size_t>(t.vertex_count()), -1);
  std::vector<std::pair<Index, std::size_t>> walk;
  walk.emplace_back(t.root(), 0);
  Index pos = 0;
  while (!walk.empty()) {
    auto& [v, next] = walk.back();
    const auto& ch = t.children(v);
    if (next == ch.size()) {
      walk.pop_back();
      continue;
    }
    const Index c = ch[next++];
    element[static_cast<std::size_t>(c)] = pos++;
    walk.emplace_back(c, 0);
  }
  std::vector<Index> block_of(static_cast<std::size_t>(n));
  Index bid = 0;
  for (Index v = 0; v < t.vertex_count(); ++v) {
    if (t.out_degree(v) == 0) continue;
    for (Index c : t.children(v))
      block_of[static_cast<std::size_t>(element[static_cast<std::size_t>(c)])] = bid;
    ++bid;
  }
  return NCPartition::from_block_of(std::move(block_of));
}

}  // namespace meanders
