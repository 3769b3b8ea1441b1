#pragma once

#include <vector>

#include "meanders/errors.hpp"

namespace meanders {

// Finite-support weight sequence for simply-generated trees: w[d] is the
// weight of out-degree d. Requires w[0] > 0 and some w[k] > 0 with k >= 1.
struct WeightSequence {
  std::vector<double> w;

  explicit WeightSequence(std::vector<double> weights) : w(std::move(weights)) {
    if (w.empty() || w[0] <= 0.0)
      throw ValidationError("weight sequence needs w[0] > 0");
    bool positive_tail = false;
    for (std::size_t d = 1; d < w.size(); ++d) {
      if (w[d] < 0.0) throw ValidationError("weights must be non-negative");
      if (w[d] > 0.0) positive_tail = true;
    }
    if (!positive_tail)
      throw ValidationError("weight sequence needs some w[k] > 0 with k >= 1");
    while (w.back() == 0.0) w.pop_back();
  }

  int max_degree() const { return static_cast<int>(w.size()) - 1; }

  // Support contained in {0,1}: psi < 1 everywhere, tau unattained, and the
  // conditioned tree is the deterministic path.
  bool degenerate() const { return max_degree() <= 1; }

  std::vector<int> support() const {
    std::vector<int> s;
    for (std::size_t d = 0; d < w.size(); ++d)
      if (w[d] > 0.0) s.push_back(static_cast<int>(d));
    return s;
  }

  // theta(t) = sum_k w_k t^k (a polynomial here, so rho = infinity).
  double theta(double t) const {
    double acc = 0.0;
    for (std::size_t d = w.size(); d-- > 0;) acc = acc * t + w[d];
    return acc;
  }

  double theta_prime(double t) const {
    double acc = 0.0;
    for (std::size_t d = w.size(); d-- > 1;) acc = acc * t + w[d] * static_cast<double>(d);
    return acc;
  }

  // psi(t) = t theta'(t) / theta(t), nondecreasing on [0, rho).
  double psi(double t) const { return t * theta_prime(t) / theta(t); }
};

}  // namespace meanders
