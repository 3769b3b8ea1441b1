#include <catch2/catch_amalgamated.hpp>

#include "meanders/json_io.hpp"
#include "meanders/pairing.hpp"
#include "meanders/rng.hpp"
#include "meanders/samplers.hpp"
#include "test_util.hpp"

using namespace meanders;

TEST_CASE("validate_pairing accepts the matchings from the contract") {
  const Pairing p1 = Pairing::from_partner({1, 0});
  CHECK(p1.n() == 1);
  const Pairing p2 = Pairing::from_partner({3, 2, 1, 0});
  CHECK(p2.n() == 2);
  CHECK(p2.partner(0) == 3);
}

TEST_CASE("validate_pairing rejects the crossing matching with its quadruple") {
  try {
    Pairing::from_partner({2, 3, 0, 1});
    FAIL("expected CrossingError");
  } catch (const CrossingError& e) {
    CHECK(e.a == 0);
    CHECK(e.b == 1);
    CHECK(e.c == 2);
    CHECK(e.d == 3);
  }
}

TEST_CASE("validate_pairing rejects non-involutions") {
  CHECK_THROWS_AS(Pairing::from_partner({1, 0, 3, 3}), NotAMatchingError);
  CHECK_THROWS_AS(Pairing::from_partner({0, 1}), NotAMatchingError);
  CHECK_THROWS_AS(Pairing::from_partner({1, 0, 3}), NotAMatchingError);
  CHECK_THROWS_AS(Pairing::from_partner({1, 0, 5, 2}), NotAMatchingError);
}

TEST_CASE("accepted pairings pass the quadratic crossing scan") {
  RngStream rng(7, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const Pairing p = sample_uniform_pairing(30, rng);
    Pairing::validate(p.partner_array());
    CHECK_FALSE(test::has_crossing_quadratic(p.partner_array()));
  }
}

TEST_CASE("meander systems require equal sizes") {
  CHECK_THROWS_AS(MeanderSystem(Pairing::from_partner({1, 0}),
                                Pairing::from_partner({3, 2, 1, 0})),
                  ValidationError);
}

TEST_CASE("serialization uses the documented JSON object") {
  const MeanderSystem ms(Pairing::from_partner({1, 0}), Pairing::from_partner({1, 0}));
  CHECK(serialize(ms) == R"({"n":1,"upper":[1,0],"lower":[1,0]})");
}

TEST_CASE("deserialize round-trips sampled systems") {
  RngStream rng(11, 3);
  for (int rep = 0; rep < 25; ++rep) {
    const MeanderSystem ms = sample_uniform_meander(17, rng);
    CHECK(deserialize(serialize(ms)) == ms);
  }
}

TEST_CASE("deserialize rejects crossing arrays with ValidationError") {
  CHECK_THROWS_AS(deserialize(R"({"n":2,"upper":[2,3,0,1],"lower":[1,0,3,2]})"),
                  ValidationError);
  CHECK_THROWS_AS(deserialize(R"({"n":2,"upper":[1,0,3,2]})"), ParseError);
  CHECK_THROWS_AS(deserialize("not json"), ParseError);
  CHECK_THROWS_AS(deserialize(R"({"n":2,"upper":[1,0],"lower":[1,0,3,2]})"),
                  ValidationError);
}

TEST_CASE("rainbow spec validates composition sums") {
  CHECK_THROWS_AS(RainbowSpec({2, 1}, {2}), ValidationError);
  CHECK_THROWS_AS(RainbowSpec({0, 3}, {3}), ValidationError);
  const RainbowSpec ok({2, 1}, {3});
  CHECK(ok.n() == 3);
}
