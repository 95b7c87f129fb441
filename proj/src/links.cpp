#include "icct/links.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace icct {

double logit(double x) {
  if (!(x > 0.0 && x < 1.0)) {
    throw std::domain_error("logit: argument must lie in (0, 1), got " + std::to_string(x));
  }
  return std::log(x) - std::log1p(-x);
}

double inverse_logit(double v) {
  if (v >= 0.0) {
    return 1.0 / (1.0 + std::exp(-v));
  }
  const double e = std::exp(v);
  return e / (1.0 + e);
}

}  // namespace icct
