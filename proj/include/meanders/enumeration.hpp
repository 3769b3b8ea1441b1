#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "meanders/analytic.hpp"
#include "meanders/bijections.hpp"
#include "meanders/cycles.hpp"
#include "meanders/errors.hpp"
#include "meanders/ncpartition.hpp"
#include "meanders/pairing.hpp"

namespace meanders {

inline constexpr Index kEnumerationGuard = 12;   // Catalan(n) scans
inline constexpr Index kPairScanGuard = 6;       // Catalan(n)^2 scans
inline constexpr int kMeanderNumberGuard = 10;

// Dyck words of half-length n in lexicographic order (up < down), from
// U^n D^n to (UD)^n, by successor: flip the rightmost raisable up step and
// refill the suffix minimally. O(1) amortized per word.
class DyckEnumerator {
 public:
  explicit DyckEnumerator(Index n) : n_(n) {
    if (n < 1 || n > kEnumerationGuard)
      throw SizeGuardError("Dyck enumeration guarded to 1 <= n <= 12");
    word_.assign(static_cast<std::size_t>(2 * n), -1);
    std::fill(word_.begin(), word_.begin() + n, std::int8_t{1});
  }

  // Fills out; returns false once exhausted.
  bool next(std::vector<std::int8_t>& out) {
    if (done_) return false;
    out = word_;
    advance();
    return true;
  }

 private:
  void advance() {
    const std::size_t len = word_.size();
    long height = 0;
    std::vector<long> height_before(len);
    for (std::size_t i = 0; i < len; ++i) {
      height_before[i] = height;
      height += word_[i];
    }
    for (std::size_t i = len; i-- > 0;) {
      if (word_[i] != 1 || height_before[i] < 1) continue;
      const long after = height_before[i] - 1;
      const long rest = static_cast<long>(len - i - 1);
      if (rest < after) continue;
      word_[i] = -1;
      const long ups = (rest - after) / 2;
      for (long j = 0; j < rest; ++j)
        word_[i + 1 + static_cast<std::size_t>(j)] = j < ups ? 1 : -1;
      return;
    }
    done_ = true;
  }

  Index n_;
  std::vector<std::int8_t> word_;
  bool done_ = false;
};

// Calls f(const Pairing&) for each of the Catalan(n) NC pairings, each once.
template <class F>
inline void for_each_nc_pairing(Index n, F&& f) {
  DyckEnumerator e(n);
  std::vector<std::int8_t> word;
  while (e.next(word)) f(dyck_to_pairing(DyckPath::trusted(word)));
}

inline std::vector<Pairing> all_nc_pairings(Index n) {
  std::vector<Pairing> out;
  for_each_nc_pairing(n, [&](const Pairing& p) { out.push_back(p); });
  return out;
}

// All Catalan(n) NC partitions of [n], through the tree bijection.
template <class F>
inline void for_each_nc_partition(Index n, F&& f) {
  DyckEnumerator e(n);
  std::vector<std::int8_t> word;
  while (e.next(word))
    f(tree_to_ncpartition(dyck_to_tree(DyckPath::trusted(word))));
}

// R_k: the number of proper meanders (single-cycle systems) on [2k], by a
// C_k^2 pair scan.
inline std::int64_t meander_number(int k) {
  if (k < 1 || k > kMeanderNumberGuard)
    throw SizeGuardError("meander_number guarded to 1 <= k <= 10");
  const auto pairings = all_nc_pairings(static_cast<Index>(k));
  std::int64_t count = 0;
  for (const Pairing& up : pairings)
    for (const Pairing& low : pairings)
      if (count_cycles(MeanderSystem(up, low)) == 1) ++count;
  return count;
}

enum class Statistic { cycle_count, largest_half_length, ringlets, rings, staples };

inline Statistic statistic_from_name(const std::string& name) {
  if (name == "cycle_count") return Statistic::cycle_count;
  if (name == "largest_half_length") return Statistic::largest_half_length;
  if (name == "ringlets") return Statistic::ringlets;
  if (name == "rings") return Statistic::rings;
  if (name == "staples") return Statistic::staples;
  throw InvalidTypeError("unknown statistic " + name);
}

enum class ExactModel { uniform, comb };

// Exact law of a statistic under the uniform (Catalan(n)^2 systems) or
// comb-like (Catalan(n) systems) model.
struct ExactDistribution {
  Index n = 0;
  std::string statistic;
  std::string model;
  std::map<std::int64_t, std::int64_t> counts;
  std::int64_t total = 0;

  mpq_class mean() const {
    mpz_class num = 0;
    for (const auto& [value, count] : counts) num += mpz_class(value) * count;
    mpq_class q(num, mpz_class(total));
    q.canonicalize();
    return q;
  }
};

namespace detail {
inline std::int64_t evaluate_statistic(const MeanderSystem& ms, Statistic stat) {
  switch (stat) {
    case Statistic::cycle_count:
      return count_cycles(ms);
    case Statistic::largest_half_length:
      return largest_cycle(ms).half_length;
    case Statistic::ringlets:
      return special_counts(ms).ringlets;
    case Statistic::rings:
      return special_counts(ms).rings;
    case Statistic::staples:
      return special_counts(ms).staples;
  }
  throw InvalidTypeError("bad statistic");
}
}  // namespace detail

inline ExactDistribution exact_distribution(Index n, Statistic stat,
                                            ExactModel model = ExactModel::uniform) {
  ExactDistribution dist;
  dist.n = n;
  switch (stat) {
    case Statistic::cycle_count: dist.statistic = "cycle_count"; break;
    case Statistic::largest_half_length: dist.statistic = "largest_half_length"; break;
    case Statistic::ringlets: dist.statistic = "ringlets"; break;
    case Statistic::rings: dist.statistic = "rings"; break;
    case Statistic::staples: dist.statistic = "staples"; break;
  }
  if (model == ExactModel::uniform) {
    if (n > kPairScanGuard)
      throw SizeGuardError("uniform exact distribution guarded to n <= 6");
    dist.model = "uniform";
    const auto pairings = all_nc_pairings(n);
    for (const Pairing& up : pairings)
      for (const Pairing& low : pairings) {
        ++dist.counts[detail::evaluate_statistic(MeanderSystem(up, low), stat)];
        ++dist.total;
      }
  } else {
    if (n > kEnumerationGuard)
      throw SizeGuardError("comb exact distribution guarded to n <= 12");
    dist.model = "comb";
    const Pairing comb = comb_pairing(n);
    for_each_nc_pairing(n, [&](const Pairing& up) {
      ++dist.counts[detail::evaluate_statistic(MeanderSystem(up, comb), stat)];
      ++dist.total;
    });
  }
  return dist;
}

// R_k R_l <= R_{k+l} for all k + l <= maxk, plus the R_k^{1/k} root data.
struct SuperadditivityReport {
  std::vector<std::int64_t> values;  // R_1..R_maxk
  std::vector<double> roots;         // R_k^{1/k}
  bool superadditive = true;
  bool roots_below_upper_bound = true;
};

inline SuperadditivityReport superadditivity_check(int maxk) {
  if (maxk < 2 || maxk > kMeanderNumberGuard)
    throw SizeGuardError("superadditivity check guarded to 2 <= maxk <= 10");
  SuperadditivityReport rep;
  for (int k = 1; k <= maxk; ++k) {
    rep.values.push_back(meander_number(k));
    rep.roots.push_back(std::pow(static_cast<double>(rep.values.back()), 1.0 / k));
    if (rep.roots.back() > constants::kMeanderGrowthUpper)
      rep.roots_below_upper_bound = false;
  }
  for (int k = 1; k < maxk; ++k)
    for (int l = 1; k + l <= maxk; ++l)
      if (rep.values[static_cast<std::size_t>(k - 1)] *
              rep.values[static_cast<std::size_t>(l - 1)] >
          rep.values[static_cast<std::size_t>(k + l - 1)])
        rep.superadditive = false;
  return rep;
}

}  // namespace meanders
