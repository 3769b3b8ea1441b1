#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "meanders/errors.hpp"
#include "meanders/pairing.hpp"

namespace meanders {

// One connected component of a meander system.
struct Cycle {
  std::vector<Index> support;  // strictly increasing
  Index half_length = 0;       // support.size() / 2

  bool is_cluster() const {
    return support.back() - support.front() + 1 == static_cast<Index>(support.size());
  }
};

struct CycleDecomposition {
  Index n = 0;
  std::vector<Cycle> cycles;
};

// Reusable scratch so tight sampling loops do not allocate per cycle.
struct CycleScratch {
  std::vector<char> visited;
  std::vector<Index> support;
};

// Calls f(support) for every cycle, where support is a sorted span valid only
// during the call. Traversal: from a point follow the upper arc, then the
// lower arc, alternating until the walk closes. O(n) total.
template <class F>
inline void for_each_cycle(const MeanderSystem& ms, CycleScratch& scratch, F&& f) {
  const auto& up = ms.upper.partner_array();
  const auto& low = ms.lower.partner_array();
  const std::size_t m = up.size();
  scratch.visited.assign(m, 0);
  auto& sup = scratch.support;
  for (std::size_t start = 0; start < m; ++start) {
    if (scratch.visited[start]) continue;
    sup.clear();
    Index p = static_cast<Index>(start);
    do {
      scratch.visited[static_cast<std::size_t>(p)] = 1;
      sup.push_back(p);
      const Index q = up[static_cast<std::size_t>(p)];
      scratch.visited[static_cast<std::size_t>(q)] = 1;
      sup.push_back(q);
      p = low[static_cast<std::size_t>(q)];
    } while (p != static_cast<Index>(start));
    std::sort(sup.begin(), sup.end());
    f(static_cast<const std::vector<Index>&>(sup));
  }
}

inline CycleDecomposition decompose(const MeanderSystem& ms) {
  CycleDecomposition d;
  d.n = ms.n();
  CycleScratch scratch;
  for_each_cycle(ms, scratch, [&](const std::vector<Index>& sup) {
    Cycle c;
    c.support = sup;
    c.half_length = static_cast<Index>(sup.size() / 2);
    d.cycles.push_back(std::move(c));
  });
  return d;
}

inline std::int64_t count_cycles(const MeanderSystem& ms) {
  const auto& up = ms.upper.partner_array();
  const auto& low = ms.lower.partner_array();
  const std::size_t m = up.size();
  std::vector<char> visited(m, 0);
  std::int64_t count = 0;
  for (std::size_t start = 0; start < m; ++start) {
    if (visited[start]) continue;
    ++count;
    Index p = static_cast<Index>(start);
    do {
      visited[static_cast<std::size_t>(p)] = 1;
      const Index q = up[static_cast<std::size_t>(p)];
      visited[static_cast<std::size_t>(q)] = 1;
      p = low[static_cast<std::size_t>(q)];
    } while (p != static_cast<Index>(start));
  }
  return count;
}

inline std::map<Index, std::int64_t> half_length_histogram(const MeanderSystem& ms) {
  std::map<Index, std::int64_t> hist;
  CycleScratch scratch;
  for_each_cycle(ms, scratch, [&](const std::vector<Index>& sup) {
    ++hist[static_cast<Index>(sup.size() / 2)];
  });
  return hist;
}

inline Cycle largest_cycle(const MeanderSystem& ms) {
  Cycle best;
  CycleScratch scratch;
  for_each_cycle(ms, scratch, [&](const std::vector<Index>& sup) {
    if (sup.size() > best.support.size()) {
      best.support = sup;
      best.half_length = static_cast<Index>(sup.size() / 2);
    }
  });
  return best;
}

// Visit-order permutation of the support ranks, 0-based one-line form:
// perm[i] = rank visited right after support[i]. The walk starts at the
// smallest support point and moves first along the upper arc, which realizes
// the clockwise orientation (ring -> (1 2), upper staple -> (1 4 3 2),
// lower staple -> (1 2 3 4) in 1-based cycle notation).
inline std::vector<Index> shape_permutation(const MeanderSystem& ms, const Cycle& cycle) {
  const auto& sup = cycle.support;
  const std::size_t len = sup.size();
  std::vector<Index> perm(len);
  auto rank_of = [&](Index point) {
    return static_cast<Index>(std::lower_bound(sup.begin(), sup.end(), point) - sup.begin());
  };
  Index p = sup.front();
  for (std::size_t step = 0; step < len; ++step) {
    const bool along_upper = step % 2 == 0;
    const Index q = along_upper ? ms.upper.partner(p) : ms.lower.partner(p);
    perm[static_cast<std::size_t>(rank_of(p))] = rank_of(q);
    p = q;
  }
  return perm;
}

struct SpecialCounts {
  std::int64_t ringlets = 0;
  std::int64_t rings = 0;
  std::int64_t staples = 0;
  std::map<Index, std::int64_t> cluster_by_halflength;
};

namespace detail {
// Upper staple [x,y] (0-based): lower holds (x,x+1),(y,y+1); upper holds
// (x,y+1),(x+1,y); y >= x+2. A lower staple swaps the roles.
inline std::int64_t count_staples_oriented(const std::vector<Index>& holder,
                                           const std::vector<Index>& crosser) {
  const Index m = static_cast<Index>(holder.size());
  std::int64_t count = 0;
  for (Index x = 0; x + 3 < m; ++x) {
    if (holder[static_cast<std::size_t>(x)] != x + 1) continue;
    const Index y1 = crosser[static_cast<std::size_t>(x)];
    const Index y = y1 - 1;
    if (y < x + 2) continue;
    if (crosser[static_cast<std::size_t>(x + 1)] == y &&
        holder[static_cast<std::size_t>(y)] == y + 1)
      ++count;
  }
  return count;
}
}  // namespace detail

inline SpecialCounts special_counts(const MeanderSystem& ms) {
  SpecialCounts out;
  const auto& up = ms.upper.partner_array();
  const auto& low = ms.lower.partner_array();
  const Index m = ms.points();
  for (Index x = 0; x < m; ++x) {
    const Index y = up[static_cast<std::size_t>(x)];
    if (y > x && y == low[static_cast<std::size_t>(x)]) {
      ++out.rings;
      if (y == x + 1) ++out.ringlets;
    }
  }
  out.staples = detail::count_staples_oriented(low, up) +
                detail::count_staples_oriented(up, low);
  CycleScratch scratch;
  for_each_cycle(ms, scratch, [&](const std::vector<Index>& sup) {
    if (sup.back() - sup.front() + 1 == static_cast<Index>(sup.size()))
      ++out.cluster_by_halflength[static_cast<Index>(sup.size() / 2)];
  });
  return out;
}

// Gaps x_{j+1} - x_j of the sorted support (2k-1 values).
inline std::vector<Index> spacings(const Cycle& cycle) {
  std::vector<Index> gaps;
  gaps.reserve(cycle.support.size() - 1);
  for (std::size_t i = 0; i + 1 < cycle.support.size(); ++i)
    gaps.push_back(cycle.support[i + 1] - cycle.support[i]);
  return gaps;
}

// Closed-form cycle counts for rainbow meander systems:
//   type (2,1): gcd(alpha_1, alpha_2)
//   type (3,1): gcd(alpha_1 + alpha_2, alpha_2 + alpha_3)
// Other types have no known formula; callers fall back to decompose.
inline std::int64_t rainbow_cycle_count(const RainbowSpec& spec) {
  auto law = [](const std::vector<Index>& parts) -> std::int64_t {
    if (parts.size() == 2) return std::gcd<long, long>(parts[0], parts[1]);
    return std::gcd<long, long>(parts[0] + parts[1], parts[1] + parts[2]);
  };
  const std::size_t s = spec.alpha.size(), t = spec.beta.size();
  if (t == 1 && (s == 2 || s == 3)) return law(spec.alpha);
  if (s == 1 && (t == 2 || t == 3)) return law(spec.beta);
  throw UnsupportedTypeError("gcd law covers types (2,1) and (3,1) only");
}

// Independent cycle counter kept as an oracle for decompose-equivalence
// checks (union-find over the 2n points).
inline std::int64_t union_find_cycle_count(const MeanderSystem& ms) {
  const Index m = ms.points();
  std::vector<Index> parent(static_cast<std::size_t>(m));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Index a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  auto unite = [&](Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(a)] = b;
  };
  for (Index i = 0; i < m; ++i) {
    unite(i, ms.upper.partner(i));
    unite(i, ms.lower.partner(i));
  }
  std::int64_t roots = 0;
  for (Index i = 0; i < m; ++i)
    if (find(i) == i) ++roots;
  return roots;
}

}  // namespace meanders
