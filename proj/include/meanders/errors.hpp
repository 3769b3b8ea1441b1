#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace meanders {

// Base class for all domain errors thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// partner[partner[i]] != i or partner[i] == i or an index is out of range.
class NotAMatchingError : public Error {
 public:
  explicit NotAMatchingError(const std::string& what) : Error(what) {}
};

// Two arcs cross; carries the violating quadruple a < b < c < d with
// partner[a] = c and partner[b] = d.
class CrossingError : public Error {
 public:
  CrossingError(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
      : Error("crossing arcs (" + std::to_string(a) + "," + std::to_string(b) +
              "," + std::to_string(c) + "," + std::to_string(d) + ")"),
        a(a), b(b), c(c), d(d) {}
  std::int64_t a, b, c, d;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// No degree sequence over the weight support sums to the requested size.
class InadmissibleSizeError : public Error {
 public:
  explicit InadmissibleSizeError(const std::string& what) : Error(what) {}
};

// Weight support is contained in {0,1}: psi < 1 everywhere, tau unattained.
class DegenerateWeightsError : public Error {
 public:
  explicit DegenerateWeightsError(const std::string& what) : Error(what) {}
};

// Exhaustive enumeration requested beyond its guarded size.
class SizeGuardError : public Error {
 public:
  explicit SizeGuardError(const std::string& what) : Error(what) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what) : Error(what) {}
};

class UnsupportedTypeError : public Error {
 public:
  explicit UnsupportedTypeError(const std::string& what) : Error(what) {}
};

class InvalidTypeError : public Error {
 public:
  explicit InvalidTypeError(const std::string& what) : Error(what) {}
};

class NotCombLikeError : public Error {
 public:
  explicit NotCombLikeError(const std::string& what) : Error(what) {}
};

class UnknownExperimentError : public Error {
 public:
  explicit UnknownExperimentError(const std::string& what) : Error(what) {}
};

class DegenerateFitError : public Error {
 public:
  explicit DegenerateFitError(const std::string& what) : Error(what) {}
};

}  // namespace meanders
