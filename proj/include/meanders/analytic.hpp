#pragma once

#include <gmpxx.h>

#include <cmath>
#include <limits>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "meanders/errors.hpp"
#include "meanders/weights.hpp"

namespace meanders {

namespace constants {
// Meander growth-rate bounds and estimates from the literature.
inline constexpr double kMeanderGrowthLower = 11.380;
inline constexpr double kMeanderGrowthUpper = 12.901;
inline constexpr double kLandoZvonkinGrowth = 12.26;
// 16/12.901...: decay base of the cluster-cycle upper bound 2n gamma^{-k}.
inline constexpr double kClusterDecayGamma = 1.2402;
// E L_n >= this * log2 n for the largest cycle half-length.
inline constexpr double kLargestCycleLogBound = 0.8384;
inline constexpr double kZeta2 = 1.6449340668482264;  // pi^2/6
inline constexpr double kZeta3 = 1.2020569031595943;
inline constexpr double kRingDensity = 0.13661977236758134;  // 2/pi - 1/2
inline constexpr double kSixOverPiSq = 0.6079271018540267;   // 6/pi^2
// (1/2)(2/pi^2)^{p-3} binom(2p-4, p-2) at p = 4 leaves; numerically 6/pi^2.
inline constexpr double kFourLeafConnectedProbability = 0.6079271018540267;
// Empirical CLT constants for the uniform cycle count (c - a n)/(b sqrt n).
inline constexpr double kCycleCountMeanRate = 0.23;
inline constexpr double kCycleCountStdRate = 0.42;
// (1/3)(2 zeta(2)/zeta(3) - 1): E c(M_{2,N})^2 ~ this * N.
inline constexpr double kRainbowSecondMomentRate = 0.5789551850801372;
}  // namespace constants

namespace detail {
class CatalanTable {
 public:
  static CatalanTable& instance() {
    static CatalanTable t;
    return t;
  }

  mpz_class get(long n) {
    std::lock_guard<std::mutex> lock(mutex_);
    ensure(n);
    return table_[static_cast<std::size_t>(n)];
  }

  // Copy of C_0..C_n; lets long exact sums run off one lock acquisition.
  std::vector<mpz_class> prefix(long n) {
    std::lock_guard<std::mutex> lock(mutex_);
    ensure(n);
    return std::vector<mpz_class>(table_.begin(), table_.begin() + n + 1);
  }

 private:
  void ensure(long n) {
    while (static_cast<long>(table_.size()) <= n) {
      const long k = static_cast<long>(table_.size()) - 1;
      mpz_class next = table_.back() * (2 * (2 * k + 1));
      next /= (k + 2);
      table_.push_back(next);
    }
  }

  std::mutex mutex_;
  std::deque<mpz_class> table_{mpz_class(1)};
};
}  // namespace detail

// Exact Catalan number C_n = binom(2n, n)/(n+1).
inline mpz_class catalan(long n) {
  if (n < 0) throw RangeError("catalan needs n >= 0");
  return detail::CatalanTable::instance().get(n);
}

inline std::vector<mpz_class> catalan_prefix(long n) {
  if (n < 0) throw RangeError("catalan needs n >= 0");
  return detail::CatalanTable::instance().prefix(n);
}

// log C_n via lgamma; relative error well below 1e-12 for n <= 1e5.
inline double log_catalan(long n) {
  if (n < 0) throw RangeError("catalan needs n >= 0");
  const double nd = static_cast<double>(n);
  return std::lgamma(2 * nd + 1) - 2 * std::lgamma(nd + 1) - std::log(nd + 1);
}

// Probability that the arc (x, x+1) lies in a uniform NC pairing of [2n]:
// C_{n-1}/C_n = (n+1)/(2(2n-1)).
inline mpq_class p_arc(long n) {
  if (n < 1) throw RangeError("p_arc needs n >= 1");
  mpq_class q(n + 1, 2 * (2 * n - 1));
  q.canonicalize();
  return q;
}

// E[#ringlets] = (2n-1) p_arc(n)^2 = (n+1)^2 / (8(n - 1/2)).
inline mpq_class expected_ringlets_exact(long n) {
  if (n < 1) throw RangeError("needs n >= 1");
  mpq_class q(mpz_class(mpz_class(n + 1) * (n + 1)), mpz_class(mpz_class(4) * (2 * n - 1)));
  q.canonicalize();
  return q;
}

// E[#rings] = sum_{k=0}^{n-1} (2n-2k-1) (C_k C_{n-k-1} / C_n)^2.
// The inner position count is 2n-2k-1 (validated by exhaustive enumeration);
// asymptotically ~ (2/pi - 1/2) n.
inline mpq_class expected_rings_exact(long n) {
  if (n < 1) throw RangeError("needs n >= 1");
  const auto cat = catalan_prefix(n);
  mpz_class num = 0;
  for (long k = 0; k < n; ++k) {
    mpz_class term = cat[static_cast<std::size_t>(k)] * cat[static_cast<std::size_t>(n - k - 1)];
    term *= term;
    num += term * (2 * n - 2 * k - 1);
  }
  mpq_class q(num, mpz_class(cat[static_cast<std::size_t>(n)] * cat[static_cast<std::size_t>(n)]));
  q.canonicalize();
  return q;
}

// E[#staples] = 2 sum over staple positions of p1 p2 with
// p1 = C_{n-2}/C_n and p2 = C_{k-1} C_{n-k-1}/C_n, staple length k at
// 2n-2k-1 positions; asymptotically ~ n/32.
inline mpq_class expected_staples_exact(long n) {
  if (n < 1) throw RangeError("needs n >= 1");
  if (n < 2) return mpq_class(0);
  const auto cat = catalan_prefix(n);
  mpz_class inner = 0;
  for (long k = 1; k < n; ++k)
    inner += cat[static_cast<std::size_t>(k - 1)] * cat[static_cast<std::size_t>(n - k - 1)] *
             (2 * n - 2 * k - 1);
  mpq_class q(mpz_class(2 * cat[static_cast<std::size_t>(n - 2)] * inner),
              mpz_class(cat[static_cast<std::size_t>(n)] * cat[static_cast<std::size_t>(n)]));
  q.canonicalize();
  return q;
}

// Exact E[#cluster cycles of half-length k with shape_count shapes] =
// (2n-2k+1) (C_{n-k}/C_n)^2 shape_count; per-shape value ~ 2n 16^{-k}.
inline double expected_cluster_cycles(long n, long k, long shape_count) {
  if (k < 1 || k > n) throw RangeError("needs 1 <= k <= n");
  if (n <= 20000) {
    const mpz_class cnk = catalan(n - k), cn = catalan(n);
    mpq_class q(mpz_class(cnk * cnk * shape_count * (2 * n - 2 * k + 1)), mpz_class(cn * cn));
    q.canonicalize();
    return q.get_d();
  }
  const double logr = 2 * (log_catalan(n - k) - log_catalan(n));
  return static_cast<double>(2 * n - 2 * k + 1) * static_cast<double>(shape_count) *
         std::exp(logr);
}

struct RatioExpansion {
  double sq;   // (C_{n-k}/C_n)^2 ~ 2^{-4k}(1 + 3k/n)
  double cov;  // (C_{n-2k}/C_n)^2 - (C_{n-k}/C_n)^4 ~ 2^{-8k} 3(k/n)^2
};

inline RatioExpansion catalan_ratio_expansion(long n, long k) {
  if (k < 1 || k > n / 10) throw RangeError("expansion regime is 1 <= k <= n/10");
  const double r = static_cast<double>(k) / static_cast<double>(n);
  return {std::exp2(-4.0 * static_cast<double>(k)) * (1.0 + 3.0 * r),
          std::exp2(-8.0 * static_cast<double>(k)) * 3.0 * r * r};
}

// Characteristic quantities of a weight sequence: theta, rho, tau, and the
// limiting leaf fraction pi0 = w0/theta(tau).
struct WeightAnalysis {
  WeightSequence weights;
  double rho;  // infinity for finite support
  double tau;
  double pi0;
  bool tau_attains_one;  // psi(tau) = 1 attained

  double theta(double t) const { return weights.theta(t); }
  double psi(double t) const { return weights.psi(t); }
};

// tau = inf{t : psi(t) = 1} when sup psi >= 1 (always true for finite support
// of degree >= 2), found by bisection to 1e-12 relative.
inline WeightAnalysis weight_analysis(const WeightSequence& w) {
  if (w.degenerate())
    throw DegenerateWeightsError("support in {0,1}: psi < 1 everywhere, tau unattained");
  double hi = 1.0;
  while (w.psi(hi) < 1.0) hi *= 2.0;
  double lo = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (w.psi(mid) < 1.0 ? lo : hi) = mid;
    if (hi - lo <= 1e-12 * hi) break;
  }
  const double tau = 0.5 * (lo + hi);
  return WeightAnalysis{w, std::numeric_limits<double>::infinity(), tau,
                        w.w[0] / w.theta(tau), true};
}

// E c(M_n) >~ (1/2) (w0/theta(tau))^2 n for symmetric simply-generated
// systems.
inline double ringlet_bound_sg(const WeightSequence& w, long n) {
  const WeightAnalysis a = weight_analysis(w);
  return 0.5 * a.pi0 * a.pi0 * static_cast<double>(n);
}

// P(L_n <= k) for the largest block of a uniform NC partition of [n]
// (equivalently the largest cycle half-length of a comb-like system).
struct BlockProb {
  double value = 0.0;
  std::optional<mpq_class> exact;  // set on the exact path
};

namespace detail {

inline constexpr long kExactBlockDistLimit = 256;

// y(z) = z C^{(k)}(z) satisfies y = z + y^2 - z y^{k+1}; extract coefficients
// to order n+1 by the triangular fixed-point recurrence. Exact integers.
inline mpz_class block_dist_numerator(long n, long k) {
  const long N = n + 1;
  const long top = std::min<long>(k + 1, N);
  std::vector<std::vector<mpz_class>> pw(static_cast<std::size_t>(top) + 1);
  for (long j = 1; j <= top; ++j)
    pw[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(N) + 1, mpz_class(0));
  auto& y = pw[1];
  y[1] = 1;
  mpz_class acc;
  for (long m = 2; m <= N; ++m) {
    for (long j = 2; j <= std::min<long>(top, m); ++j) {
      acc = 0;
      for (long i = j - 1; i <= m - 1; ++i)
        acc += pw[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i)] *
               y[static_cast<std::size_t>(m - i)];
      pw[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] = acc;
      if (j == 2) {
        y[static_cast<std::size_t>(m)] = acc;
        if (k + 1 <= m - 1)
          y[static_cast<std::size_t>(m)] -=
              pw[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(m - 1)];
      }
    }
  }
  return y[static_cast<std::size_t>(N)];
}

// Same recurrence with coefficients scaled by 4^{-m}; stable in doubles for
// the k = O(log n) regime the large-n callers use.
inline double block_dist_scaled(long n, long k) {
  const long N = n + 1;
  const long top = std::min<long>(k + 1, N);
  std::vector<std::vector<double>> pw(static_cast<std::size_t>(top) + 1);
  for (long j = 1; j <= top; ++j)
    pw[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(N) + 1, 0.0);
  auto& y = pw[1];
  y[1] = 0.25;
  for (long m = 2; m <= N; ++m) {
    for (long j = 2; j <= std::min<long>(top, m); ++j) {
      double acc = 0.0;
      const double* prev = pw[static_cast<std::size_t>(j - 1)].data();
      for (long i = j - 1; i <= m - 1; ++i)
        acc += prev[i] * y[static_cast<std::size_t>(m - i)];
      pw[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] = acc;
      if (j == 2) {
        y[static_cast<std::size_t>(m)] = acc;
        if (k + 1 <= m - 1)
          y[static_cast<std::size_t>(m)] -=
              0.25 * pw[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(m - 1)];
      }
    }
  }
  // P = y_{n+1} 4^{n+1} / C_n, with y scaled by 4^{-m}.
  const double catalan_over_4n = std::exp(log_catalan(n) - static_cast<double>(n) * std::log(4.0));
  const double p = y[static_cast<std::size_t>(N)] * 4.0 / catalan_over_4n;
  return std::min(1.0, std::max(0.0, p));
}

}  // namespace detail

inline BlockProb block_dist_gf(long n, long k) {
  if (n < 1 || k < 1) throw RangeError("block_dist_gf needs n, k >= 1");
  if (k >= n) return BlockProb{1.0, mpq_class(1)};
  if (n <= detail::kExactBlockDistLimit) {
    mpq_class q(detail::block_dist_numerator(n, k), catalan(n));
    q.canonicalize();
    return BlockProb{q.get_d(), std::move(q)};
  }
  return BlockProb{detail::block_dist_scaled(n, k), std::nullopt};
}

// exp(-alpha(n) 2^{-(x+1)}) with alpha(n) = 2^{frac(log2 n)}: the
// double-exponential approximation to P[L_n - floor(log2 n) <= x].
inline double double_exp_law(long n, double x) {
  if (n < 2) throw RangeError("double_exp_law needs n >= 2");
  const double l = std::log2(static_cast<double>(n));
  const double alpha = std::exp2(l - std::floor(l));
  return std::exp(-alpha * std::exp2(-(x + 1.0)));
}

// Leading terms of the relaxed rainbow (2,1) cycle-count law.
inline double rainbow_gcd_law(long x) {
  if (x < 1) throw RangeError("needs x >= 1");
  return constants::kSixOverPiSq / (static_cast<double>(x) * static_cast<double>(x));
}

struct RainbowMoments {
  double mean_leading;           // (6/pi^2) ln N
  double second_moment_leading;  // (N/3)(2 zeta(2)/zeta(3) - 1)
};

inline RainbowMoments rainbow_moments(double N) {
  if (N < 2) throw RangeError("needs N >= 2");
  return {constants::kSixOverPiSq * std::log(N),
          N * constants::kRainbowSecondMomentRate};
}

// Dominant singularity (z0, y0) of y = G(z,y) = z + y^2 - z y^{k+1}, plus the
// square-root coefficient gamma = sqrt(2 z0 G_z / G_ww); y0 is near
// 1/2 + (k+1) 2^{-(k+3)}.
struct CharacteristicPoint {
  double z0, y0, gamma;
};

inline CharacteristicPoint characteristic_point(int k) {
  if (k < 1) throw RangeError("needs k >= 1");
  double y = 0.5 + (k + 1) * std::exp2(-(k + 3.0));
  for (int iter = 0; iter < 100; ++iter) {
    const double yk = std::pow(y, k);
    const double g = 2 * y - 1 - k * yk * y + (k - 1) * yk * y * y;
    const double gp = 2 - static_cast<double>(k) * (k + 1) * yk +
                      static_cast<double>(k - 1) * (k + 2) * yk * y;
    const double step = g / gp;
    y -= step;
    if (std::abs(step) < 1e-15) break;
  }
  const double yk1 = std::pow(y, k + 1);
  const double z = y * (1 - y) / (1 - yk1);
  const double gz = 1 - yk1;
  const double gww = 2 - z * static_cast<double>(k) * (k + 1) * std::pow(y, k - 1);
  return {z, y, std::sqrt(2 * z * gz / gww)};
}

}  // namespace meanders
