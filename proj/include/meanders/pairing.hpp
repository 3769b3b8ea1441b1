#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "meanders/errors.hpp"

namespace meanders {

using Index = std::int32_t;

// A non-crossing perfect matching of {0, ..., 2n-1}, stored as a partner
// array. Immutable after construction; safe to share across threads.
class Pairing {
 public:
  // Validates the matching and the non-crossing invariant (O(n) stack scan).
  // Throws NotAMatchingError or CrossingError.
  static Pairing from_partner(std::vector<Index> partner) {
    validate(partner);
    return Pairing(std::move(partner));
  }

  // Constructive fast path for internal producers whose output is valid by
  // construction (bijections, samplers). Checked in debug builds.
  static Pairing trusted(std::vector<Index> partner) {
#ifndef NDEBUG
    validate(partner);
#endif
    return Pairing(std::move(partner));
  }

  Index n() const { return static_cast<Index>(partner_.size() / 2); }
  Index points() const { return static_cast<Index>(partner_.size()); }
  Index partner(Index i) const { return partner_[static_cast<std::size_t>(i)]; }
  const std::vector<Index>& partner_array() const { return partner_; }

  friend bool operator==(const Pairing&, const Pairing&) = default;

  // The full scan, also used by tests as a brute-force property check.
  static void validate(const std::vector<Index>& partner) {
    const std::size_t m = partner.size();
    if (m == 0 || m % 2 != 0)
      throw NotAMatchingError("partner array must have positive even length");
    for (std::size_t i = 0; i < m; ++i) {
      const Index p = partner[i];
      if (p < 0 || static_cast<std::size_t>(p) >= m)
        throw NotAMatchingError("partner index out of range at " + std::to_string(i));
      if (static_cast<std::size_t>(p) == i)
        throw NotAMatchingError("fixed point at " + std::to_string(i));
      if (partner[static_cast<std::size_t>(p)] != static_cast<Index>(i))
        throw NotAMatchingError("involution violated at " + std::to_string(i));
    }
    // Non-crossing: push at the smaller endpoint, the matching open arc must
    // be on top at the larger endpoint.
    std::vector<Index> open;
    open.reserve(m / 2);
    for (std::size_t i = 0; i < m; ++i) {
      const Index p = partner[i];
      if (static_cast<std::size_t>(p) > i) {
        open.push_back(static_cast<Index>(i));
      } else {
        if (open.empty() || open.back() != p) {
          const Index b = open.back();
          throw CrossingError(p, b, static_cast<Index>(i), partner[static_cast<std::size_t>(b)]);
        }
        open.pop_back();
      }
    }
  }

 private:
  explicit Pairing(std::vector<Index> partner) : partner_(std::move(partner)) {}
  std::vector<Index> partner_;
};

// Compositions of n describing a rainbow meander system of type (s, t):
// the upper pairing is a union of s shifted rainbows of sizes alpha, the
// lower a union of t shifted rainbows of sizes beta.
struct RainbowSpec {
  std::vector<Index> alpha;
  std::vector<Index> beta;

  RainbowSpec(std::vector<Index> a, std::vector<Index> b)
      : alpha(std::move(a)), beta(std::move(b)) {
    long sa = 0, sb = 0;
    for (Index x : alpha) {
      if (x < 1) throw ValidationError("rainbow part must be positive");
      sa += x;
    }
    for (Index x : beta) {
      if (x < 1) throw ValidationError("rainbow part must be positive");
      sb += x;
    }
    if (alpha.empty() || beta.empty() || sa != sb)
      throw ValidationError("rainbow compositions must be nonempty with equal sums");
  }

  Index n() const {
    long s = 0;
    for (Index x : alpha) s += x;
    return static_cast<Index>(s);
  }
};

// Upper and lower non-crossing pairings of the same 2n points.
struct MeanderSystem {
  MeanderSystem(Pairing up, Pairing low)
      : upper(std::move(up)), lower(std::move(low)) {
    if (upper.n() != lower.n())
      throw ValidationError("upper and lower pairings differ in size");
  }

  Index n() const { return upper.n(); }
  Index points() const { return upper.points(); }

  Pairing upper;
  Pairing lower;

  friend bool operator==(const MeanderSystem&, const MeanderSystem&) = default;
};

}  // namespace meanders
