#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "meanders/analytic.hpp"
#include "meanders/cycles.hpp"
#include "meanders/enumeration.hpp"
#include "meanders/samplers.hpp"
#include "test_util.hpp"

using namespace meanders;

namespace {

// Draws `draws` samples via key(), tallies against the target support, and
// returns the Pearson statistic against uniform expected counts.
template <class KeyFn>
double uniform_chi2(long draws, const std::vector<std::vector<Index>>& support, KeyFn key) {
  std::map<std::vector<Index>, long> tally;
  for (const auto& s : support) tally[s] = 0;
  for (long i = 0; i < draws; ++i) {
    const auto k = key(i);
    const auto it = tally.find(k);
    REQUIRE(it != tally.end());
    ++it->second;
  }
  std::vector<double> observed, expected;
  for (const auto& [k, c] : tally) {
    observed.push_back(static_cast<double>(c));
    expected.push_back(static_cast<double>(draws) / static_cast<double>(support.size()));
  }
  return test::chi2_statistic(observed, expected);
}

}  // namespace

TEST_CASE("uniform pairing sampler is exact at n=1") {
  RngStream rng(3, 0);
  for (int i = 0; i < 10; ++i)
    CHECK(sample_uniform_pairing(1, rng).partner_array() == std::vector<Index>{1, 0});
}

TEST_CASE("uniform pairing sampler: binomial check at n=2") {
  const long draws = 100000;
  RngStream rng(42, 0);
  long combs = 0;
  for (long i = 0; i < draws; ++i)
    if (sample_uniform_pairing(2, rng).partner(0) == 1) ++combs;
  const double freq = static_cast<double>(combs) / draws;
  const double sigma = std::sqrt(0.25 / draws);
  CHECK(std::abs(freq - 0.5) <= 4 * sigma);
}

TEST_CASE("uniform pairing sampler: chi-square over the 14 pairings at n=4") {
  const auto support = [&] {
    std::vector<std::vector<Index>> s;
    for_each_nc_pairing(4, [&](const Pairing& p) { s.push_back(p.partner_array()); });
    return s;
  }();
  REQUIRE(support.size() == 14);
  RngStream rng(42, 1);
  const double stat = uniform_chi2(100000, support, [&](long) {
    return sample_uniform_pairing(4, rng).partner_array();
  });
  CHECK(stat < test::chi2_critical_1e3(13));
}

TEST_CASE("uniform meander sampler: chi-square over all systems, n <= 4") {
  for (Index n : {2, 3, 4}) {
    std::vector<std::vector<Index>> support;
    for_each_nc_pairing(n, [&](const Pairing& up) {
      for_each_nc_pairing(n, [&](const Pairing& low) {
        std::vector<Index> key = up.partner_array();
        key.insert(key.end(), low.partner_array().begin(), low.partner_array().end());
        support.push_back(key);
      });
    });
    RngStream rng(7, static_cast<std::uint64_t>(n));
    const double stat = uniform_chi2(100000, support, [&](long) {
      const MeanderSystem ms = sample_uniform_meander(n, rng);
      std::vector<Index> key = ms.upper.partner_array();
      key.insert(key.end(), ms.lower.partner_array().begin(), ms.lower.partner_array().end());
      return key;
    });
    const int df = static_cast<int>(support.size()) - 1;
    CHECK(stat < test::chi2_critical_1e3(df));
  }
}

TEST_CASE("uniform meander at n=2: mean ringlets matches the enumeration value 0.75") {
  RngStream rng(5, 0);
  const long draws = 100000;
  long total = 0;
  for (long i = 0; i < draws; ++i)
    total += special_counts(sample_uniform_meander(2, rng)).ringlets;
  const double mean = static_cast<double>(total) / draws;
  // std of the ringlet count at n=2 is sqrt(E X^2 - .75^2) with X in {0,1,2}
  CHECK(std::abs(mean - 0.75) < 0.01);
}

TEST_CASE("sampled Dyck paths are valid and deterministic per stream") {
  RngStream a(99, 5), b(99, 5), c(99, 6);
  for (int i = 0; i < 50; ++i) {
    const DyckPath pa = sample_uniform_dyck(50, a);
    DyckPath::from_steps(pa.steps());
    CHECK(pa == sample_uniform_dyck(50, b));
  }
  bool any_diff = false;
  RngStream a2(99, 5);
  for (int i = 0; i < 10; ++i)
    if (!(sample_uniform_dyck(50, a2) == sample_uniform_dyck(50, c))) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("sg sampler with flat weights is uniform over trees at n=4") {
  const WeightSequence w({1, 1, 1, 1, 1});
  const SgTreeSampler sampler(w);
  std::vector<std::vector<Index>> support;
  DyckEnumerator e(4);
  std::vector<std::int8_t> word;
  while (e.next(word))
    support.push_back(dyck_to_tree(DyckPath::from_steps(word)).preorder_degrees());
  REQUIRE(support.size() == 14);
  RngStream rng(42, 2);
  const double stat = uniform_chi2(100000, support, [&](long) {
    return sampler.sample(5, rng).preorder_degrees();
  });
  CHECK(stat < test::chi2_critical_1e3(13));
}

TEST_CASE("equivalent weight sequences generate the same tree law") {
  // (a b^k w_k) with a=2, b=3 against the flat sequence
  const WeightSequence scaled({2, 6, 18, 54, 162});
  const SgTreeSampler sampler(scaled);
  std::vector<std::vector<Index>> support;
  DyckEnumerator e(4);
  std::vector<std::int8_t> word;
  while (e.next(word))
    support.push_back(dyck_to_tree(DyckPath::from_steps(word)).preorder_degrees());
  RngStream rng(42, 3);
  const double stat = uniform_chi2(100000, support, [&](long) {
    return sampler.sample(5, rng).preorder_degrees();
  });
  CHECK(stat < test::chi2_critical_1e3(13));
}

TEST_CASE("sg sampler with weights (1,0,1)") {
  const WeightSequence w({1, 0, 1});
  const SgTreeSampler sampler(w);
  SECTION("vertices=5: uniform over the 2 two-internal-vertex shapes") {
    RngStream rng(1, 0);
    std::map<std::vector<Index>, long> tally;
    const long draws = 20000;
    for (long i = 0; i < draws; ++i) ++tally[sampler.sample(5, rng).preorder_degrees()];
    REQUIRE(tally.size() == 2);
    for (const auto& [key, count] : tally) {
      const double freq = static_cast<double>(count) / draws;
      CHECK(std::abs(freq - 0.5) <= 4 * std::sqrt(0.25 / draws));
    }
  }
  SECTION("vertices=4: inadmissible by parity") {
    RngStream rng(1, 1);
    CHECK_THROWS_AS(sampler.sample(4, rng), InadmissibleSizeError);
  }
}

TEST_CASE("degenerate weights produce the deterministic path tree") {
  const WeightSequence w({1, 1});
  CHECK(w.degenerate());
  RngStream rng(8, 0);
  const PlanarTree t = sample_sg_tree(w, 6, rng);
  CHECK(t.preorder_degrees() == std::vector<Index>{1, 1, 1, 1, 1, 0});
}

TEST_CASE("sg meander with flat weights matches the uniform law at n=3") {
  std::vector<std::vector<Index>> support;
  for_each_nc_pairing(3, [&](const Pairing& up) {
    for_each_nc_pairing(3, [&](const Pairing& low) {
      std::vector<Index> key = up.partner_array();
      key.insert(key.end(), low.partner_array().begin(), low.partner_array().end());
      support.push_back(key);
    });
  });
  REQUIRE(support.size() == 25);
  const WeightSequence w({1, 1, 1, 1});
  const SgTreeSampler sampler(w);
  RngStream rng(42, 4);
  const double stat = uniform_chi2(100000, support, [&](long) {
    const MeanderSystem ms = sample_sg_meander(sampler, sampler, 3, rng);
    std::vector<Index> key = ms.upper.partner_array();
    key.insert(key.end(), ms.lower.partner_array().begin(), ms.lower.partner_array().end());
    return key;
  });
  CHECK(stat < test::chi2_critical_1e3(24));
}

TEST_CASE("asymmetric sg weights at n=2: degenerate upper, forced lower") {
  RngStream rng(12, 0);
  const MeanderSystem ms =
      sample_sg_meander(WeightSequence({1, 1}), WeightSequence({1, 0, 1}), 2, rng);
  CHECK(ms.upper.partner_array() == std::vector<Index>{3, 2, 1, 0});
  CHECK(ms.lower.partner_array() == std::vector<Index>{1, 0, 3, 2});
}

TEST_CASE("comb sampler at n=2: cycle count 1 or 2 with probability 1/2 each") {
  RngStream rng(21, 0);
  const long draws = 100000;
  long twos = 0;
  for (long i = 0; i < draws; ++i) {
    const auto c = count_cycles(sample_comb_meander(2, rng));
    REQUIRE((c == 1 || c == 2));
    twos += c == 2;
  }
  const double freq = static_cast<double>(twos) / draws;
  CHECK(std::abs(freq - 0.5) <= 4 * std::sqrt(0.25 / draws));
}

TEST_CASE("semimeander at n=2 traces to 1 or 2 cycles depending on the upper") {
  const Pairing rainbow = rainbow_pairing({2});
  CHECK(count_cycles(MeanderSystem(comb_pairing(2), rainbow)) == 1);
  CHECK(count_cycles(MeanderSystem(rainbow, rainbow)) == 2);
  RngStream rng(31, 0);
  const MeanderSystem ms = sample_semimeander(2, rng);
  CHECK(ms.lower == rainbow);
}

TEST_CASE("rainbow meander of type (1,1) is a nest of n rings") {
  RngStream rng(4, 0);
  const MeanderSystem ms = sample_rainbow_meander(1, 1, 6, rng);
  CHECK(count_cycles(ms) == 6);
  CHECK(special_counts(ms).rings == 6);
}

TEST_CASE("rainbow compositions are positive, sum to n, and are uniform") {
  RngStream rng(17, 0);
  std::map<std::vector<Index>, long> tally;
  const long draws = 20000;
  for (long i = 0; i < draws; ++i) {
    const auto alpha = sample_composition(5, 2, rng);
    long sum = 0;
    for (Index a : alpha) {
      CHECK(a >= 1);
      sum += a;
    }
    CHECK(sum == 5);
    ++tally[alpha];
  }
  REQUIRE(tally.size() == 4);
  std::vector<double> obs, exp;
  for (const auto& [k, c] : tally) {
    obs.push_back(static_cast<double>(c));
    exp.push_back(draws / 4.0);
  }
  CHECK(test::chi2_statistic(obs, exp) < test::chi2_critical_1e3(3));
}

TEST_CASE("gcd law matches traced counts for sampled rainbow specs") {
  RngStream rng(23, 0);
  for (int rep = 0; rep < 300; ++rep) {
    const RainbowSpec spec2 = sample_rainbow_spec(2, 1, 40, rng);
    CHECK(rainbow_cycle_count(spec2) == count_cycles(rainbow_meander(spec2)));
    const RainbowSpec spec3 = sample_rainbow_spec(3, 1, 40, rng);
    CHECK(rainbow_cycle_count(spec3) == count_cycles(rainbow_meander(spec3)));
  }
}

TEST_CASE("spec examples: gcd values") {
  CHECK(rainbow_cycle_count(RainbowSpec({4, 6}, {10})) == 2);
  CHECK(rainbow_cycle_count(RainbowSpec({15, 5, 11}, {31})) == 4);
  CHECK(rainbow_cycle_count(RainbowSpec({1, 1}, {2})) == 1);
  CHECK_THROWS_AS(rainbow_cycle_count(RainbowSpec({1, 1, 1, 1}, {4})), UnsupportedTypeError);
}

TEST_CASE("relaxed rainbow") {
  RngStream rng(9, 0);
  SECTION("s=2, N=1 always yields one cycle") {
    for (int i = 0; i < 5; ++i) CHECK(count_cycles(sample_relaxed_rainbow(2, 1, rng)) == 1);
  }
  SECTION("cycle count equals gcd(alpha1, alpha2)") {
    for (int i = 0; i < 100; ++i) {
      const RainbowSpec spec = sample_relaxed_rainbow_spec(2, 50, rng);
      CHECK(count_cycles(rainbow_meander(spec)) ==
            std::gcd<long, long>(spec.alpha[0], spec.alpha[1]));
    }
  }
  SECTION("type validation") {
    CHECK_THROWS_AS(sample_relaxed_rainbow_spec(1, 10, rng), InvalidTypeError);
    CHECK_THROWS_AS(sample_rainbow_spec(5, 1, 4, rng), InvalidTypeError);
  }
}

TEST_CASE("samplers are deterministic in (seed, stream) and thread-agnostic") {
  const MeanderSystem a = [&] {
    RngStream rng(123, 17);
    return sample_uniform_meander(64, rng);
  }();
  const MeanderSystem b = [&] {
    RngStream rng(123, 17);
    return sample_uniform_meander(64, rng);
  }();
  CHECK(a == b);
}
