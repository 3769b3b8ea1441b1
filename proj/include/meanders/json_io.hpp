#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "meanders/errors.hpp"
#include "meanders/pairing.hpp"

namespace meanders {

// Wire format, one object per line for streams:
//   {"n": <int>, "upper": [<2n ints, 0-based partner array>], "lower": [...]}
inline std::string serialize(const MeanderSystem& ms) {
  nlohmann::ordered_json j;
  j["n"] = ms.n();
  j["upper"] = ms.upper.partner_array();
  j["lower"] = ms.lower.partner_array();
  return j.dump();
}

inline MeanderSystem deserialize(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad meander JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("upper") || !j.contains("lower"))
    throw ParseError("meander JSON needs fields n, upper, lower");
  long n;
  std::vector<Index> up, low;
  try {
    n = j.at("n").get<long>();
    up = j.at("upper").get<std::vector<Index>>();
    low = j.at("lower").get<std::vector<Index>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad meander JSON field: ") + e.what());
  }
  if (n < 1 || up.size() != static_cast<std::size_t>(2 * n) ||
      low.size() != static_cast<std::size_t>(2 * n))
    throw ValidationError("partner arrays must have length 2n");
  try {
    return MeanderSystem(Pairing::from_partner(std::move(up)),
                         Pairing::from_partner(std::move(low)));
  } catch (const NotAMatchingError& e) {
    throw ValidationError(std::string("upper/lower: ") + e.what());
  } catch (const CrossingError& e) {
    throw ValidationError(std::string("upper/lower: ") + e.what());
  }
}

}  // namespace meanders
