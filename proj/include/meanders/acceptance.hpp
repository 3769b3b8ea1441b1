#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "meanders/analytic.hpp"
#include "meanders/bijections.hpp"
#include "meanders/cycles.hpp"
#include "meanders/enumeration.hpp"
#include "meanders/harness.hpp"
#include "meanders/samplers.hpp"

namespace meanders {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  bool all_pass() const {
    for (const auto& c : criteria)
      if (!c.pass) return false;
    return true;
  }
};

struct AcceptanceOptions {
  bool quick = false;   // smoke scale; the gate is the full run
  int threads = 0;      // 0 = hardware
  std::uint64_t seed = 42;
  std::ostream* log = &std::cout;
};

namespace detail {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) ok = false;
    if (!detail.str().empty()) detail << "; ";
    detail << (cond ? "" : "FAIL: ") << what;
  }
};

inline std::string fmt(double v, int prec = 5) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

inline double find_row(const std::vector<ExperimentRow>& rows, long n,
                       const std::string& stat, double* se = nullptr) {
  for (const auto& r : rows)
    if (r.n == n && r.statistic == stat) {
      if (se) *se = r.stderr_;
      return r.mean;
    }
  throw Error("row not found: " + stat + " at n=" + std::to_string(n));
}

// Plain least squares of y on x.
inline double linear_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t m = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

}  // namespace detail

// Runs the full acceptance suite; prints one pass/fail line per criterion.
inline AcceptanceReport verify_acceptance(const AcceptanceOptions& opt = {}) {
  AcceptanceReport report;
  std::ostream& log = *opt.log;
  const bool quick = opt.quick;
  const std::uint64_t seed = opt.seed;
  const int threads = opt.threads;

  auto run = [&](int id, const std::string& title,
                 const std::function<void(detail::Check&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    detail::Check check;
    try {
      body(check);
    } catch (const std::exception& e) {
      check.ok = false;
      check.detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.criteria.push_back({id, title, check.ok, check.detail.str(), secs});
    log << "[" << (id < 10 ? " " : "") << id << "/17] " << (check.ok ? "PASS" : "FAIL")
        << "  " << title << "  (" << detail::fmt(secs, 3) << "s)\n";
    const std::string d = check.detail.str();
    if (!d.empty()) log << "        " << d << "\n";
    log.flush();
  };

  auto base_cfg = [&](const std::string& name, Family fam, std::vector<long> ns,
                      long samples) {
    ExperimentConfig cfg;
    cfg.name = name;
    cfg.family = std::move(fam);
    cfg.n_values = std::move(ns);
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.threads = threads;
    return cfg;
  };

  // Shared uniform pass at n = 1e4 feeding criteria 2, 3, 4, 5 and 15.
  struct BigPass {
    long n = 0, samples = 0;
    Summary rings, staples, cycles;
    Summary cluster[4];
    double p_cluster_ge_threshold = 0.0;
    double threshold = 0.0;
  };
  BigPass big;
  {
    big.n = 10000;
    big.samples = quick ? 1000 : 10000;
    big.threshold =
        constants::kLargestCycleLogBound * std::log2(static_cast<double>(big.n));
    ExperimentConfig cfg =
        base_cfg("shared_uniform", Family::uniform(), {big.n}, big.samples);
    const FamilySampler sampler(cfg.family, big.n);
    std::vector<std::vector<double>> vals(
        8, std::vector<double>(static_cast<std::size_t>(cfg.samples)));
    detail::parallel_samples(cfg.samples, cfg.threads, [&](long i, CycleScratch& scratch) {
      RngStream rng(cfg.seed, static_cast<std::uint64_t>(i));
      const MeanderSystem ms = sampler.sample(rng);
      const SpecialCounts sc = special_counts(ms);
      long cycles = 0, conservation = 0, max_cluster = 0;
      double cl[4] = {0, 0, 0, 0};
      CycleScratch inner;
      for_each_cycle(ms, inner, [&](const std::vector<Index>& sup) {
        const long k = static_cast<long>(sup.size() / 2);
        ++cycles;
        conservation += k;
        if (sup.back() - sup.front() + 1 == static_cast<Index>(sup.size())) {
          if (k <= 4) cl[k - 1] += 1.0;
          max_cluster = std::max(max_cluster, k);
        }
      });
      detail::check_conservation(big.n, conservation);
      const std::size_t s = static_cast<std::size_t>(i);
      vals[0][s] = static_cast<double>(sc.rings);
      vals[1][s] = static_cast<double>(sc.staples);
      vals[2][s] = static_cast<double>(cycles);
      for (int k = 0; k < 4; ++k) vals[3 + static_cast<std::size_t>(k)][s] = cl[k];
      vals[7][s] = max_cluster >= big.threshold ? 1.0 : 0.0;
    });
    big.rings = summarize(vals[0]);
    big.staples = summarize(vals[1]);
    big.cycles = summarize(vals[2]);
    for (int k = 0; k < 4; ++k) big.cluster[k] = summarize(vals[3 + static_cast<std::size_t>(k)]);
    double acc = 0;
    for (double v : vals[7]) acc += v;
    big.p_cluster_ge_threshold = acc / static_cast<double>(cfg.samples);
  }

  // 1. Ringlet expectation.
  run(1, "ringlet expectation: MC within 3 SE of (n+1)^2/(8(n-1/2)); exact n=2 = 3/4", [&](detail::Check& c) {
    const long samples = quick ? 2000 : 10000;
    auto rows = run_experiment(
        base_cfg("ringlets", Family::uniform(), {10, 100, 1000}, samples));
    for (long n : {10L, 100L, 1000L}) {
      double se = 0.0;
      const double mean = detail::find_row(rows, n, "ringlets", &se);
      const double exact = expected_ringlets_exact(n).get_d();
      c.expect(std::abs(mean - exact) <= 3 * se,
               "n=" + std::to_string(n) + " mean " + detail::fmt(mean) + " vs exact " +
                   detail::fmt(exact) + " (3SE=" + detail::fmt(3 * se, 3) + ")");
    }
    const auto dist = exact_distribution(2, Statistic::ringlets);
    c.expect(dist.mean() == mpq_class(3, 4), "enumeration mean at n=2 equals 3/4");
  });

  // 2. Staples.
  run(2, "staples: MC at n=1e4 within 5% of n/32; exact sum = enumeration for n <= 6", [&](detail::Check& c) {
    const double target = static_cast<double>(big.n) / 32.0;
    c.expect(std::abs(big.staples.mean - target) <= 0.05 * target,
             "mean " + detail::fmt(big.staples.mean) + " vs " + detail::fmt(target));
    for (long n = 2; n <= 6; ++n) {
      const auto dist = exact_distribution(static_cast<Index>(n), Statistic::staples);
      c.expect(dist.mean() == expected_staples_exact(n),
               "exact staple sum matches enumeration at n=" + std::to_string(n));
    }
  });

  // 3. Rings.
  run(3, "rings: MC at n=1e4 within 2% of 0.136619 n; exact sum = enumeration for n <= 6", [&](detail::Check& c) {
    const double target = constants::kRingDensity * static_cast<double>(big.n);
    c.expect(std::abs(big.rings.mean - target) <= 0.02 * target,
             "mean " + detail::fmt(big.rings.mean) + " vs " + detail::fmt(target));
    for (long n = 2; n <= 6; ++n) {
      const auto dist = exact_distribution(static_cast<Index>(n), Statistic::rings);
      c.expect(dist.mean() == expected_rings_exact(n),
               "exact ring sum matches enumeration at n=" + std::to_string(n));
    }
  });

  // 4. Cluster cycles.
  run(4, "cluster cycles: mean for k=1..4 within 3 SE of (2n-2k+1)(C_{n-k}/C_n)^2 R_k", [&](detail::Check& c) {
    for (int k = 1; k <= 4; ++k) {
      const std::int64_t rk = meander_number(k);
      const double exact = expected_cluster_cycles(big.n, k, rk);
      const Summary& s = big.cluster[k - 1];
      const double se = std::max(s.stderr_, 1e-12);
      c.expect(std::abs(s.mean - exact) <= 3 * se,
               "k=" + std::to_string(k) + " mean " + detail::fmt(s.mean) + " vs exact " +
                   detail::fmt(exact));
    }
  });

  // 5. Cycle-count CLT constants.
  run(5, "cycle count: mean/n in 0.23±0.02, std/sqrt(n) in 0.42±0.04, |skewness| < 0.15", [&](detail::Check& c) {
    const double a = big.cycles.mean / static_cast<double>(big.n);
    const double b = big.cycles.std / std::sqrt(static_cast<double>(big.n));
    c.expect(std::abs(a - 0.23) <= 0.02, "mean/n = " + detail::fmt(a));
    c.expect(std::abs(b - 0.42) <= 0.04, "std/sqrt(n) = " + detail::fmt(b));
    c.expect(std::abs(big.cycles.skewness) < 0.15,
             "skewness = " + detail::fmt(big.cycles.skewness));
  });

  // 6. Spectrum.
  run(6, "spectrum at n=1e5: log-log slope over k in [2,20] within -2±0.3", [&](detail::Check& c) {
    ExperimentConfig cfg = base_cfg("spectrum", Family::uniform(),
                                    {quick ? 20000L : 100000L}, quick ? 100 : 200);
    cfg.params["k_max"] = 20;
    const auto rows = spectrum_experiment(cfg);
    std::vector<double> ks, ms;
    for (long k = 2; k <= 20; ++k) {
      ks.push_back(static_cast<double>(k));
      ms.push_back(detail::find_row(rows, cfg.n_values[0], "count_" + std::to_string(k)));
    }
    const auto fit = fit_power_law(ks, ms);
    c.expect(std::abs(fit.exponent + 2.0) <= 0.3,
             "slope = " + detail::fmt(fit.exponent) + " (r2 " + detail::fmt(fit.r2, 3) + ")");
  });

  // 7 & 8 share the largest-cycle grid.
  const std::vector<long> grid =
      quick ? std::vector<long>{100, 200, 500, 1000} : std::vector<long>{100, 200, 500, 1000, 2000, 5000};
  const long grid_samples = quick ? 500 : 2000;
  std::vector<double> uniform_stds;  // collected for criterion 8
  run(7, "largest-cycle scaling: exponent in [0.75,0.85] for uniform, semimeander, sg(1,1,1)", [&](detail::Check& c) {
    const std::vector<std::pair<std::string, Family>> families = {
        {"uniform", Family::uniform()},
        {"semimeander", Family::semimeander()},
        {"sg(1,1,1)", Family::sg(WeightSequence({1, 1, 1}))}};
    for (const auto& [label, fam] : families) {
      auto rows = run_experiment(base_cfg("largest_cycle", fam, grid, grid_samples));
      std::vector<double> xs, ys;
      for (long n : grid) {
        xs.push_back(static_cast<double>(n));
        ys.push_back(detail::find_row(rows, n, "largest_length"));
      }
      if (label == "uniform") {
        for (long n : grid) {
          for (const auto& r : rows)
            if (r.n == n && r.statistic == "largest_length") {
              const auto j = nlohmann::json::parse(r.extra);
              uniform_stds.push_back(j.at("std").get<double>());
            }
        }
      }
      const auto fit = fit_power_law(xs, ys);
      c.expect(fit.exponent >= 0.75 && fit.exponent <= 0.85,
               label + " exponent = " + detail::fmt(fit.exponent));
    }
  });

  run(8, "largest-cycle dispersion: std-dev exponent in [0.7,0.9] on the same grid", [&](detail::Check& c) {
    std::vector<double> xs;
    for (long n : grid) xs.push_back(static_cast<double>(n));
    c.expect(uniform_stds.size() == xs.size(), "std rows present");
    if (uniform_stds.size() == xs.size()) {
      const auto fit = fit_power_law(xs, uniform_stds);
      c.expect(fit.exponent >= 0.7 && fit.exponent <= 0.9,
               "std exponent = " + detail::fmt(fit.exponent));
    }
  });

  // 9. Comb-like extreme value.
  run(9, "comb extreme value: sup|CDF - exp(-alpha 2^{-(x+1)})| <= 0.02 at n=1e4; GF law exact for n <= 12", [&](detail::Check& c) {
    ExperimentConfig cfg =
        base_cfg("comb_extreme", Family::comb(), {10000}, quick ? 20000 : 100000);
    const auto rows = run_experiment(cfg);
    const double sup = detail::find_row(rows, 10000, "extreme_sup_distance");
    c.expect(sup <= 0.02, "sup distance = " + detail::fmt(sup));
    for (Index n = 1; n <= 12; ++n) {
      std::map<Index, std::int64_t> max_block_count;
      for_each_nc_partition(n, [&](const NCPartition& p) { ++max_block_count[p.max_block_size()]; });
      bool all = true;
      mpz_class cum = 0;
      const mpz_class cn = catalan(n);
      for (Index k = 1; k <= n; ++k) {
        cum += max_block_count.count(k) ? max_block_count[k] : 0;
        mpq_class brute(cum, cn);
        brute.canonicalize();
        const auto gf = block_dist_gf(n, k);
        if (!gf.exact || *gf.exact != brute) all = false;
      }
      c.expect(all, "GF equals brute-force law at n=" + std::to_string(n));
    }
  });

  // 10. Comb-like mean cycles.
  run(10, "comb mean cycles within 3 SE of (n+1)/2 at n=1000", [&](detail::Check& c) {
    auto rows = run_experiment(
        base_cfg("cycle_count", Family::comb(), {1000}, quick ? 3000 : 10000));
    double se = 0.0;
    const double mean = detail::find_row(rows, 1000, "cycle_count", &se);
    c.expect(std::abs(mean - 500.5) <= 3 * se,
             "mean " + detail::fmt(mean) + " vs 500.5 (3SE=" + detail::fmt(3 * se, 3) + ")");
  });

  // 11. Rainbow law.
  run(11, "relaxed rainbow (2,1) law: point masses, log slope, second moment; (3,1) gcd = trace", [&](detail::Check& c) {
    {
      auto rows = run_experiment(
          base_cfg("gcd_law", Family::relaxed_rainbow(2), {1000000}, 100000));
      const double p1 = detail::find_row(rows, 1000000, "p_c_eq_1");
      const double p2 = detail::find_row(rows, 1000000, "p_c_eq_2");
      c.expect(std::abs(p1 - 0.6079) <= 0.005, "P(c=1) = " + detail::fmt(p1));
      c.expect(std::abs(p2 - 0.1520) <= 0.004, "P(c=2) = " + detail::fmt(p2));
    }
    {
      const std::vector<long> Ns = {1000, 10000, 100000, 1000000};
      const std::vector<long> S = quick ? std::vector<long>{200000, 600000, 2000000, 8000000}
                                        : std::vector<long>{1000000, 3000000, 10000000, 40000000};
      std::vector<double> lx, my;
      for (std::size_t i = 0; i < Ns.size(); ++i) {
        ExperimentConfig cfg = base_cfg("gcd_law", Family::relaxed_rainbow(2), {Ns[i]}, S[i]);
        const auto rows = run_experiment(cfg);
        lx.push_back(std::log(static_cast<double>(Ns[i])));
        my.push_back(detail::find_row(rows, Ns[i], "mean_cycles"));
      }
      const double slope = detail::linear_slope(lx, my);
      c.expect(std::abs(slope - 0.6079) <= 0.05, "mean slope vs ln N = " + detail::fmt(slope));
    }
    {
      ExperimentConfig cfg = base_cfg("gcd_law", Family::relaxed_rainbow(2), {1000000},
                                      quick ? 100000000L : 400000000L);
      const auto rows = run_experiment(cfg);
      const double m2 = detail::find_row(rows, 1000000, "second_moment_over_N");
      c.expect(std::abs(m2 - 0.5788) <= 0.10 * 0.5788,
               "second moment / N = " + detail::fmt(m2));
    }
    {
      auto rows = run_experiment(
          base_cfg("rainbow_gcd_check", Family::rainbow(3, 1), {1000}, 1000));
      const double agree = detail::find_row(rows, 1000, "gcd_trace_agree");
      c.expect(agree == 1.0, "gcd3 = traced count on 1000 instances");
    }
  });

  // 12. Spacing structure.
  run(12, "largest-cycle spacings at n=2000: P(1)=0.80±0.03, P(3)=0.10±0.02, none equal 2", [&](detail::Check& c) {
    auto rows = run_experiment(
        base_cfg("spacings", Family::uniform(), {2000}, quick ? 10000 : 50000));
    const double f1 = detail::find_row(rows, 2000, "spacing_frac_1");
    const double f2 = detail::find_row(rows, 2000, "spacing_frac_2");
    const double f3 = detail::find_row(rows, 2000, "spacing_frac_3");
    c.expect(std::abs(f1 - 0.80) <= 0.03, "frac(1) = " + detail::fmt(f1));
    c.expect(std::abs(f3 - 0.10) <= 0.02, "frac(3) = " + detail::fmt(f3));
    c.expect(f2 == 0.0, "frac(2) = " + detail::fmt(f2));
  });

  // 13. Largest-cycle histogram skewness.
  run(13, "largest-cycle skewness at n=2000 within 0.59±0.1", [&](detail::Check& c) {
    ExperimentConfig cfg =
        base_cfg("largest_hist", Family::uniform(), {2000}, quick ? 20000 : 100000);
    const auto rows = run_experiment(cfg);
    for (const auto& r : rows)
      if (r.statistic == "largest_length_norm") {
        const auto j = nlohmann::json::parse(r.extra);
        const double skew = j.at("skewness").get<double>();
        c.expect(std::abs(skew - 0.59) <= 0.1, "skewness = " + detail::fmt(skew));
      }
  });

  // 14. Meander numbers.
  run(14, "meander numbers: brute force R_1..R_6, superadditivity, roots <= 12.901, shapes = R_k", [&](detail::Check& c) {
    const auto rep = superadditivity_check(6);
    const std::vector<std::int64_t> expected = {1, 2, 8, 42, 262, 1828};
    std::string got;
    for (std::size_t i = 0; i < rep.values.size(); ++i)
      got += (i ? "," : "") + std::to_string(rep.values[i]);
    c.expect(rep.values == expected, "R_1..R_6 = (" + got + ")");
    c.expect(rep.superadditive, "R_k R_l <= R_{k+l} for k+l <= 6");
    c.expect(rep.roots_below_upper_bound, "R_k^{1/k} <= 12.901");
    for (int k = 1; k <= 5; ++k) {
      std::set<std::vector<Index>> shapes;
      const auto pairings = all_nc_pairings(static_cast<Index>(k));
      for (const Pairing& up : pairings)
        for (const Pairing& low : pairings) {
          const MeanderSystem ms(up, low);
          const auto dec = decompose(ms);
          if (dec.cycles.size() == 1) shapes.insert(shape_permutation(ms, dec.cycles[0]));
        }
      c.expect(static_cast<std::int64_t>(shapes.size()) ==
                   rep.values[static_cast<std::size_t>(k - 1)],
               "shape count at k=" + std::to_string(k) + " is " + std::to_string(shapes.size()));
    }
  });

  // 15. Logarithmic lower-bound sanity (asymptotic; see README and the
  // acceptance notes: the finite-n probability is bounded by ~0.06/0.09).
  run(15, "cluster cycle of half-length >= 0.8384 log2 n exists with probability >= 1/2", [&](detail::Check& c) {
    {
      ExperimentConfig cfg =
          base_cfg("max_cluster", Family::uniform(), {1000}, quick ? 2000 : 10000);
      const auto rows = run_experiment(cfg);
      const double p = detail::find_row(rows, 1000, "p_max_cluster_ge_threshold");
      c.expect(p >= 0.5, "n=1000: P = " + detail::fmt(p) +
                             " (exact E[#qualifying cluster cycles] ~ 0.064 bounds P above)");
    }
    const double p_big = big.p_cluster_ge_threshold;
    c.expect(p_big >= 0.5, "n=10000: P = " + detail::fmt(p_big) +
                               " (exact E[#qualifying cluster cycles] ~ 0.12 bounds P above)");
  });

  // 16. Oracle equivalence.
  run(16, "decompose vs union-find cycle counts on all systems, n <= 5", [&](detail::Check& c) {
    for (Index n = 1; n <= 5; ++n) {
      const auto pairings = all_nc_pairings(n);
      bool all = true;
      for (const Pairing& up : pairings)
        for (const Pairing& low : pairings) {
          const MeanderSystem ms(up, low);
          if (count_cycles(ms) != union_find_cycle_count(ms)) all = false;
        }
      c.expect(all, "agreement at n=" + std::to_string(n));
    }
  });

  // 17. Simply-generated bound.
  run(17, "sg cycle-count bound: mean >= (1/2)(w0/theta(tau))^2 n - 3 SE at n=1000", [&](detail::Check& c) {
    for (const auto& w : {std::vector<double>{1, 0, 1}, std::vector<double>{1, 1, 1}}) {
      const WeightSequence weights(w);
      auto rows = run_experiment(
          base_cfg("cycle_count", Family::sg(weights), {1000}, quick ? 500 : 2000));
      double se = 0.0;
      const double mean = detail::find_row(rows, 1000, "cycle_count", &se);
      const double bound = ringlet_bound_sg(weights, 1000);
      c.expect(mean >= bound - 3 * se,
               Family::sg(weights).label() + " mean " + detail::fmt(mean) + " vs bound " +
                   detail::fmt(bound));
    }
  });

  log << (report.all_pass() ? "ACCEPTANCE: all criteria pass\n"
                            : "ACCEPTANCE: some criteria FAILED\n");
  return report;
}

}  // namespace meanders
