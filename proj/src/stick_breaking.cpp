#include "icct/stick_breaking.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace icct {

std::vector<double> stick_breaking(std::span<const double> sticks) {
  if (sticks.empty()) {
    throw std::domain_error("stick_breaking: no sticks");
  }
  if (sticks.back() != 1.0) {
    throw std::domain_error("stick_breaking: last stick must equal 1");
  }
  std::vector<double> weights(sticks.size());
  double remaining = 1.0;
  for (std::size_t j = 0; j < sticks.size(); ++j) {
    const double v = sticks[j];
    if (!(v > 0.0 && v <= 1.0)) {
      throw std::domain_error("stick_breaking: stick " + std::to_string(j) +
                              " outside (0, 1]: " + std::to_string(v));
    }
    weights[j] = v * remaining;
    remaining *= 1.0 - v;
  }
  return weights;
}

std::vector<double> sticks_from_weights(std::span<const double> weights) {
  std::vector<double> sticks(weights.size(), 1.0);
  double remaining = 1.0;
  for (std::size_t j = 0; j + 1 < weights.size(); ++j) {
    if (remaining <= 0.0 || weights[j] >= remaining) {
      sticks[j] = 1.0;
      remaining = 0.0;
      continue;
    }
    double v = weights[j] / remaining;
    if (v <= 0.0) {
      v = std::numeric_limits<double>::min();
    }
    sticks[j] = v;
    remaining *= 1.0 - v;
  }
  return sticks;
}

}  // namespace icct
