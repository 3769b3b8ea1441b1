#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <numeric>
#include <set>

#include "meanders/bijections.hpp"
#include "meanders/cycles.hpp"
#include "meanders/enumeration.hpp"
#include "meanders/samplers.hpp"
#include "test_util.hpp"

using namespace meanders;

TEST_CASE("decompose examples") {
  const MeanderSystem unit(comb_pairing(1), comb_pairing(1));
  const auto d1 = decompose(unit);
  REQUIRE(d1.cycles.size() == 1);
  CHECK(d1.cycles[0].support == std::vector<Index>{0, 1});

  // upper comb, lower rainbow at n=2: the single cycle 0 -u- 1 -l- 2 -u- 3 -l- 0
  const MeanderSystem ms(comb_pairing(2), rainbow_pairing({2}));
  const auto d2 = decompose(ms);
  REQUIRE(d2.cycles.size() == 1);
  CHECK(d2.cycles[0].half_length == 2);
}

TEST_CASE("comb/comb and rainbow/rainbow cycle structure") {
  const MeanderSystem combs(comb_pairing(5), comb_pairing(5));
  CHECK(count_cycles(combs) == 5);
  const auto hist = half_length_histogram(combs);
  CHECK(hist.at(1) == 5);
  const auto sc = special_counts(combs);
  CHECK(sc.ringlets == 5);
  CHECK(sc.rings == 5);
  CHECK(sc.staples == 0);

  const MeanderSystem rain(rainbow_pairing({3}), rainbow_pairing({3}));
  CHECK(count_cycles(rain) == 3);
  const auto sr = special_counts(rain);
  CHECK(sr.rings == 3);
  CHECK(sr.ringlets == 1);
  CHECK(sr.staples == 0);
}

TEST_CASE("n=2 exhaustive cycle counts are {2,1,1,2}") {
  std::multiset<std::int64_t> counts;
  for_each_nc_pairing(2, [&](const Pairing& up) {
    for_each_nc_pairing(2, [&](const Pairing& low) {
      counts.insert(count_cycles(MeanderSystem(up, low)));
    });
  });
  CHECK(counts == std::multiset<std::int64_t>{1, 1, 2, 2});
}

TEST_CASE("supports partition the points and half-lengths sum to n") {
  RngStream rng(77, 0);
  for (Index n : {1, 2, 5, 40, 500}) {
    const MeanderSystem ms = sample_uniform_meander(n, rng);
    const auto dec = decompose(ms);
    std::vector<char> seen(static_cast<std::size_t>(2 * n), 0);
    long half_sum = 0;
    for (const auto& c : dec.cycles) {
      CHECK(c.support.size() == 2 * static_cast<std::size_t>(c.half_length));
      half_sum += c.half_length;
      for (std::size_t i = 0; i < c.support.size(); ++i) {
        CHECK(!seen[static_cast<std::size_t>(c.support[i])]);
        seen[static_cast<std::size_t>(c.support[i])] = 1;
        if (i) CHECK(c.support[i] > c.support[i - 1]);
      }
    }
    CHECK(half_sum == n);
    for (char s : seen) CHECK(s == 1);
  }
}

TEST_CASE("shape permutations reproduce the three quoted shapes") {
  // any ring: (1 2)
  const MeanderSystem ring(rainbow_pairing({1}), rainbow_pairing({1}));
  const auto dring = decompose(ring);
  CHECK(shape_permutation(ring, dring.cycles[0]) == std::vector<Index>{1, 0});

  // upper staple: lower holds the adjacent pairs -> (1 4 3 2)
  const MeanderSystem upper_staple(Pairing::from_partner({3, 2, 1, 0}),
                                   Pairing::from_partner({1, 0, 3, 2}));
  const auto dup = decompose(upper_staple);
  REQUIRE(dup.cycles.size() == 1);
  CHECK(shape_permutation(upper_staple, dup.cycles[0]) == std::vector<Index>{3, 0, 1, 2});

  // lower staple: mirror image -> (1 2 3 4)
  const MeanderSystem lower_staple(Pairing::from_partner({1, 0, 3, 2}),
                                   Pairing::from_partner({3, 2, 1, 0}));
  const auto dlow = decompose(lower_staple);
  REQUIRE(dlow.cycles.size() == 1);
  CHECK(shape_permutation(lower_staple, dlow.cycles[0]) == std::vector<Index>{1, 2, 3, 0});
}

TEST_CASE("shape permutations are single 2k-cycles; realized shapes number R_k") {
  for (Index k = 1; k <= 4; ++k) {
    std::set<std::vector<Index>> shapes;
    const auto pairings = all_nc_pairings(k);
    for (const Pairing& up : pairings)
      for (const Pairing& low : pairings) {
        const MeanderSystem ms(up, low);
        const auto dec = decompose(ms);
        for (const auto& cycle : dec.cycles) {
          const auto perm = shape_permutation(ms, cycle);
          // orbit of rank 0 must have full length
          std::size_t len = 0;
          Index at = 0;
          do {
            at = perm[static_cast<std::size_t>(at)];
            ++len;
          } while (at != 0);
          CHECK(len == perm.size());
          if (dec.cycles.size() == 1 && cycle.half_length == k) shapes.insert(perm);
        }
      }
    CHECK(static_cast<std::int64_t>(shapes.size()) == meander_number(k));
  }
}

TEST_CASE("special counts: the upper staple example") {
  const MeanderSystem ms(Pairing::from_partner({3, 2, 1, 0}),
                         Pairing::from_partner({1, 0, 3, 2}));
  const auto sc = special_counts(ms);
  CHECK(sc.staples == 1);
  CHECK(sc.rings == 0);
  CHECK(sc.ringlets == 0);
  CHECK(sc.cluster_by_halflength.at(2) == 1);
  const auto hist = half_length_histogram(ms);
  CHECK(hist.at(2) == 1);
}

TEST_CASE("ringlets always bounded by rings; cluster[1] equals ringlets") {
  RngStream rng(13, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const MeanderSystem ms = sample_uniform_meander(60, rng);
    const auto sc = special_counts(ms);
    CHECK(sc.ringlets <= sc.rings);
    const auto it = sc.cluster_by_halflength.find(1);
    const std::int64_t cluster1 = it == sc.cluster_by_halflength.end() ? 0 : it->second;
    CHECK(cluster1 == sc.ringlets);
  }
}

TEST_CASE("spacings") {
  SECTION("a ringlet has the single gap {1}") {
    const auto dec = decompose(MeanderSystem(comb_pairing(1), comb_pairing(1)));
    CHECK(spacings(dec.cycles[0]) == std::vector<Index>{1});
  }
  SECTION("staples at n=3 have gaps in {1,3}") {
    for_each_nc_pairing(3, [&](const Pairing& up) {
      for_each_nc_pairing(3, [&](const Pairing& low) {
        const MeanderSystem ms(up, low);
        if (special_counts(ms).staples == 0) return;
        for (const auto& c : decompose(ms).cycles) {
          if (c.half_length != 2) continue;
          for (Index g : spacings(c)) CHECK((g == 1 || g == 3));
        }
      });
    });
  }
  SECTION("no gap equals 2, exhaustively for n <= 6") {
    for (Index n = 1; n <= 6; ++n) {
      for_each_nc_pairing(n, [&](const Pairing& up) {
        for_each_nc_pairing(n, [&](const Pairing& low) {
          const MeanderSystem ms(up, low);
          for (const auto& c : decompose(ms).cycles)
            for (Index g : spacings(c)) CHECK(g != 2);
        });
      });
    }
  }
  SECTION("no gap equals 2 in sampled systems at n = 2000") {
    RngStream rng(3, 0);
    CycleScratch scratch;
    for (int rep = 0; rep < 100; ++rep) {
      const MeanderSystem ms = sample_uniform_meander(2000, rng);
      for_each_cycle(ms, scratch, [&](const std::vector<Index>& sup) {
        for (std::size_t i = 0; i + 1 < sup.size(); ++i) CHECK(sup[i + 1] - sup[i] != 2);
      });
    }
  }
}

TEST_CASE("decompose agrees with the union-find oracle, exhaustively for n <= 4") {
  for (Index n = 1; n <= 4; ++n) {
    for_each_nc_pairing(n, [&](const Pairing& up) {
      for_each_nc_pairing(n, [&](const Pairing& low) {
        const MeanderSystem ms(up, low);
        CHECK(count_cycles(ms) == union_find_cycle_count(ms));
      });
    });
  }
}

TEST_CASE("largest_cycle returns a maximal cycle") {
  RngStream rng(55, 0);
  const MeanderSystem ms = sample_uniform_meander(300, rng);
  const Cycle big = largest_cycle(ms);
  for (const auto& c : decompose(ms).cycles) CHECK(c.half_length <= big.half_length);
}
