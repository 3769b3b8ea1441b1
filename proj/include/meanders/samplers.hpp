#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "meanders/analytic.hpp"
#include "meanders/bijections.hpp"
#include "meanders/errors.hpp"
#include "meanders/pairing.hpp"
#include "meanders/rng.hpp"
#include "meanders/tree.hpp"
#include "meanders/weights.hpp"

namespace meanders {

// Exactly uniform Dyck path of length 2n in O(n): shuffle a word of n up and
// n+1 down steps (sum -1), take the unique cycle-lemma rotation whose proper
// prefixes are nonnegative, and drop its trailing down step. Each Dyck path
// corresponds to exactly 2n+1 such words.
inline DyckPath sample_uniform_dyck(Index n, RngStream& rng) {
  if (n < 1) throw RangeError("needs n >= 1");
  const std::size_t len = static_cast<std::size_t>(2 * n) + 1;
  std::vector<std::int8_t> word(len, -1);
  std::fill(word.begin(), word.begin() + n, std::int8_t{1});
  rng.shuffle(word);
  long sum = 0, min_sum = 0;
  std::size_t cut = 0;  // first position attaining the minimum prefix sum
  for (std::size_t i = 0; i < len; ++i) {
    sum += word[i];
    if (sum < min_sum) {
      min_sum = sum;
      cut = i + 1;
    }
  }
  std::vector<std::int8_t> steps;
  steps.reserve(len - 1);
  for (std::size_t i = cut; i < len; ++i) steps.push_back(word[i]);
  for (std::size_t i = 0; i + 1 < cut; ++i) steps.push_back(word[i]);
  return DyckPath::trusted(std::move(steps));
}

// Exactly uniform over all Catalan(n) non-crossing pairings.
inline Pairing sample_uniform_pairing(Index n, RngStream& rng) {
  return dyck_to_pairing(sample_uniform_dyck(n, rng));
}

// Upper and lower pairings independent and uniform (upper drawn first).
inline MeanderSystem sample_uniform_meander(Index n, RngStream& rng) {
  Pairing upper = sample_uniform_pairing(n, rng);
  Pairing lower = sample_uniform_pairing(n, rng);
  return MeanderSystem(std::move(upper), std::move(lower));
}

// Simply-generated tree sampler: draws an offspring sequence (d_0,...,d_n)
// i.i.d. from the tilted law q_d ~ w_d tau^d by rejection on sum d_i = n
// (tilting leaves the conditional law unchanged; the mean-one tilt just
// maximizes acceptance), then rotates it into the unique valid preorder
// sequence via the cycle lemma.
class SgTreeSampler {
 public:
  explicit SgTreeSampler(WeightSequence weights) : weights_(std::move(weights)) {
    if (weights_.degenerate()) return;  // handled without tilting
    const double tau = weight_analysis(weights_).tau;
    double norm = 0.0;
    for (int d = 0; d <= weights_.max_degree(); ++d) {
      if (weights_.w[static_cast<std::size_t>(d)] <= 0.0) continue;
      support_.push_back(d);
      norm += weights_.w[static_cast<std::size_t>(d)] * std::pow(tau, d);
      cdf_.push_back(norm);
    }
    for (double& c : cdf_) c /= norm;
    cdf_.back() = 1.0;
  }

  const WeightSequence& weights() const { return weights_; }

  // Throws InadmissibleSizeError when no degree multiset over the support
  // sums to n over n+1 slots.
  PlanarTree sample(Index vertices, RngStream& rng) const {
    if (vertices < 1) throw RangeError("needs vertices >= 1");
    const Index n = vertices - 1;
    if (n == 0) return PlanarTree::single_vertex();
    if (weights_.degenerate()) {
      // Deterministic path: n vertices of out-degree 1 plus the final leaf.
      if (weights_.w.size() < 2 || weights_.w[1] <= 0.0)
        throw InadmissibleSizeError("support {0} admits only the single vertex");
      std::vector<Index> degrees(static_cast<std::size_t>(vertices), 1);
      degrees.back() = 0;
      return PlanarTree::from_preorder_degrees(degrees);
    }
    if (!admissible(n)) throw InadmissibleSizeError("no degree sequence sums to n");
    std::vector<Index> degrees(static_cast<std::size_t>(vertices));
    while (true) {
      long sum = 0;
      bool overshoot = false;
      for (Index i = 0; i < vertices; ++i) {
        const Index d = draw(rng);
        degrees[static_cast<std::size_t>(i)] = d;
        sum += d;
        if (sum > n) {
          overshoot = true;
          break;
        }
      }
      if (!overshoot && sum == n) break;
    }
    rotate_to_preorder(degrees);
    return PlanarTree::from_preorder_degrees(degrees);
  }

 private:
  Index draw(RngStream& rng) const {
    const double u = rng.next_unit();
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t idx = std::min(static_cast<std::size_t>(it - cdf_.begin()),
                                     cdf_.size() - 1);
    return static_cast<Index>(support_[idx]);
  }

  bool admissible(Index n) const {
    // Coin-problem DP over the positive support (zeros are free).
    std::vector<char> reach(static_cast<std::size_t>(n) + 1, 0);
    reach[0] = 1;
    for (Index v = 1; v <= n; ++v)
      for (int d : support_)
        if (d >= 1 && d <= v && reach[static_cast<std::size_t>(v - d)]) {
          reach[static_cast<std::size_t>(v)] = 1;
          break;
        }
    return reach[static_cast<std::size_t>(n)] != 0;
  }

  // Unique rotation making (d_i - 1) a Lukasiewicz path (all proper prefix
  // sums >= 0, total -1): start right after the first prefix minimum.
  static void rotate_to_preorder(std::vector<Index>& degrees) {
    long sum = 0, min_sum = 0;
    std::size_t cut = 0;
    for (std::size_t i = 0; i < degrees.size(); ++i) {
      sum += degrees[i] - 1;
      if (sum < min_sum) {
        min_sum = sum;
        cut = i + 1;
      }
    }
    if (cut != degrees.size())
      std::rotate(degrees.begin(), degrees.begin() + static_cast<std::ptrdiff_t>(cut),
                  degrees.end());
  }

  WeightSequence weights_;
  std::vector<int> support_;
  std::vector<double> cdf_;
};

inline PlanarTree sample_sg_tree(const WeightSequence& w, Index vertices, RngStream& rng) {
  return SgTreeSampler(w).sample(vertices, rng);
}

// Two independent simply-generated trees mapped through the tree <-> pairing
// bijection (upper drawn first).
inline MeanderSystem sample_sg_meander(const SgTreeSampler& upper, const SgTreeSampler& lower,
                                       Index n, RngStream& rng) {
  Pairing up = tree_to_pairing(upper.sample(n + 1, rng));
  Pairing low = tree_to_pairing(lower.sample(n + 1, rng));
  return MeanderSystem(std::move(up), std::move(low));
}

inline MeanderSystem sample_sg_meander(const WeightSequence& w_up, const WeightSequence& w_low,
                                       Index n, RngStream& rng) {
  return sample_sg_meander(SgTreeSampler(w_up), SgTreeSampler(w_low), n, rng);
}

// Lower pairing fixed to the comb, upper uniform.
inline MeanderSystem sample_comb_meander(Index n, RngStream& rng) {
  Pairing upper = sample_uniform_pairing(n, rng);
  return MeanderSystem(std::move(upper), comb_pairing(n));
}

// Lower pairing fixed to the full rainbow, upper uniform.
inline MeanderSystem sample_semimeander(Index n, RngStream& rng) {
  Pairing upper = sample_uniform_pairing(n, rng);
  return MeanderSystem(std::move(upper), rainbow_pairing({n}));
}

// Uniform positive composition of n into parts parts (uniform subset of the
// n-1 gaps via Floyd's sampling).
inline std::vector<Index> sample_composition(Index n, Index parts, RngStream& rng) {
  if (parts < 1 || parts > n) throw InvalidTypeError("composition needs 1 <= parts <= n");
  std::vector<Index> cuts;
  if (parts > 1) {
    std::unordered_set<Index> chosen;
    for (Index j = n - parts + 1; j <= n - 1; ++j) {
      const Index t = static_cast<Index>(rng.below(static_cast<std::uint64_t>(j))) + 1;
      if (!chosen.insert(t).second) chosen.insert(j);
      // insert returns false if t was taken; then j itself is free
    }
    cuts.assign(chosen.begin(), chosen.end());
    std::sort(cuts.begin(), cuts.end());
  }
  std::vector<Index> alpha;
  alpha.reserve(static_cast<std::size_t>(parts));
  Index prev = 0;
  for (Index c : cuts) {
    alpha.push_back(c - prev);
    prev = c;
  }
  alpha.push_back(n - prev);
  return alpha;
}

inline RainbowSpec sample_rainbow_spec(Index s, Index t, Index n, RngStream& rng) {
  if (s > n || t > n) throw InvalidTypeError("rainbow type needs s, t <= n");
  std::vector<Index> alpha = sample_composition(n, s, rng);
  std::vector<Index> beta = sample_composition(n, t, rng);
  return RainbowSpec(std::move(alpha), std::move(beta));
}

inline MeanderSystem rainbow_meander(const RainbowSpec& spec) {
  return MeanderSystem(rainbow_pairing(spec.alpha), rainbow_pairing(spec.beta));
}

// Random rainbow meander system of type (s, t): alpha and beta uniform and
// independent over the positive compositions of n.
inline MeanderSystem sample_rainbow_meander(Index s, Index t, Index n, RngStream& rng) {
  return rainbow_meander(sample_rainbow_spec(s, t, n, rng));
}

// Relaxed rainbow of type (s, 1): alpha_i i.i.d. uniform on {1,...,N}, lower
// side a single rainbow of size sum(alpha).
inline RainbowSpec sample_relaxed_rainbow_spec(Index s, Index N, RngStream& rng) {
  if (s < 2 || N < 1) throw InvalidTypeError("relaxed rainbow needs s >= 2, N >= 1");
  std::vector<Index> alpha(static_cast<std::size_t>(s));
  long total = 0;
  for (auto& a : alpha) {
    a = static_cast<Index>(rng.below(static_cast<std::uint64_t>(N))) + 1;
    total += a;
  }
  return RainbowSpec(std::move(alpha), {static_cast<Index>(total)});
}

inline MeanderSystem sample_relaxed_rainbow(Index s, Index N, RngStream& rng) {
  return rainbow_meander(sample_relaxed_rainbow_spec(s, N, rng));
}

}  // namespace meanders
