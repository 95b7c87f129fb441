#include "icct/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "icct/errors.hpp"

namespace icct {

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double Rng::normal(double mean, double sd) {
  return std::normal_distribution<double>(mean, sd)(engine_);
}

double Rng::gamma(double shape, double rate) {
  return std::gamma_distribution<double>(shape, 1.0 / rate)(engine_);
}

double Rng::beta(double a, double b) {
  const double x = gamma(a, 1.0);
  const double y = gamma(b, 1.0);
  if (x + y <= 0.0) {
    // Both shapes tiny enough to underflow; fall back on the mean.
    return a / (a + b);
  }
  return x / (x + y);
}

bool Rng::bernoulli(double p) { return uniform() < p; }

std::size_t Rng::uniform_index(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

std::size_t Rng::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = uniform() * total;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] <= 0.0) continue;
    last_positive = j;
    if (u < weights[j]) return j;
    u -= weights[j];
  }
  return last_positive;
}

std::size_t Rng::categorical_log(std::span<const double> log_weights) {
  double top = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) {
    if (std::isnan(lw) || lw == std::numeric_limits<double>::infinity()) {
      throw NumericalError("categorical draw: invalid log-probability");
    }
    top = std::max(top, lw);
  }
  if (!std::isfinite(top)) {
    throw NumericalError("categorical draw: all log-probabilities are -inf");
  }
  double total = 0.0;
  thread_local std::vector<double> scratch;
  scratch.resize(log_weights.size());
  for (std::size_t j = 0; j < log_weights.size(); ++j) {
    scratch[j] = std::exp(log_weights[j] - top);
    total += scratch[j];
  }
  double u = uniform() * total;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < scratch.size(); ++j) {
    if (scratch[j] <= 0.0) continue;
    last_positive = j;
    if (u < scratch[j]) return j;
    u -= scratch[j];
  }
  return last_positive;
}

}  // namespace icct
