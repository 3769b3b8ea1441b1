#include <catch2/catch_amalgamated.hpp>

#include "meanders/analytic.hpp"
#include "meanders/enumeration.hpp"
#include "test_util.hpp"

using namespace meanders;

TEST_CASE("pairing enumeration cardinalities") {
  CHECK(all_nc_pairings(1).size() == 1);
  CHECK(all_nc_pairings(3).size() == 5);
  CHECK(all_nc_pairings(8).size() == 1430);
  for (const Pairing& p : all_nc_pairings(6)) Pairing::validate(p.partner_array());
}

TEST_CASE("size guards are hard errors") {
  CHECK_THROWS_AS(DyckEnumerator(13), SizeGuardError);
  CHECK_THROWS_AS(meander_number(11), SizeGuardError);
  CHECK_THROWS_AS(exact_distribution(7, Statistic::cycle_count, ExactModel::uniform),
                  SizeGuardError);
  CHECK_THROWS_AS(exact_distribution(13, Statistic::cycle_count, ExactModel::comb),
                  SizeGuardError);
  CHECK_THROWS_AS(superadditivity_check(11), SizeGuardError);
}

TEST_CASE("meander numbers R_1..R_6") {
  CHECK(meander_number(1) == 1);
  CHECK(meander_number(2) == 2);
  CHECK(meander_number(3) == 8);
  CHECK(meander_number(4) == 42);
  CHECK(meander_number(5) == 262);
  CHECK(meander_number(6) == 1828);
}

TEST_CASE("exact distributions") {
  SECTION("cycle counts at n=2") {
    const auto dist = exact_distribution(2, Statistic::cycle_count);
    CHECK(dist.total == 4);
    CHECK(dist.counts.at(1) == 2);
    CHECK(dist.counts.at(2) == 2);
    CHECK(dist.mean() == mpq_class(3, 2));
  }
  SECTION("ringlet means match the closed form for n <= 6") {
    for (Index n = 1; n <= 6; ++n) {
      const auto dist = exact_distribution(n, Statistic::ringlets);
      CHECK(dist.mean() == expected_ringlets_exact(n));
    }
  }
  SECTION("comb-like largest half-length matches the GF law at n = 4") {
    const auto dist = exact_distribution(4, Statistic::largest_half_length, ExactModel::comb);
    CHECK(dist.total == 14);
    mpz_class cum = 0;
    for (Index k = 1; k <= 4; ++k) {
      if (dist.counts.count(k)) cum += dist.counts.at(k);
      mpq_class p(cum, mpz_class(dist.total));
      p.canonicalize();
      CHECK(block_dist_gf(4, k).exact.value() == p);
    }
  }
  SECTION("comb-like cycle count mean is (n+1)/2") {
    for (Index n = 1; n <= 8; ++n) {
      const auto dist = exact_distribution(n, Statistic::cycle_count, ExactModel::comb);
      mpq_class half(n + 1, 2);
      half.canonicalize();
      CHECK(dist.mean() == half);
    }
  }
}

TEST_CASE("superadditivity and root bounds") {
  const auto rep = superadditivity_check(6);
  CHECK(rep.values == std::vector<std::int64_t>{1, 2, 8, 42, 262, 1828});
  CHECK(rep.superadditive);
  CHECK(rep.roots_below_upper_bound);
  CHECK(rep.values[0] * rep.values[0] <= rep.values[1]);
  for (double r : rep.roots) CHECK(r <= constants::kMeanderGrowthUpper);
}
