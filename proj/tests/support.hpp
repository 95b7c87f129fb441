#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "icct/random.hpp"
#include "icct/stick_breaking.hpp"
#include "icct/types.hpp"

namespace icct::test {

// Valid state with random parameters; log difficulties centred per culture
// and every respondent assigned to a culture of positive weight.
inline ModelState random_state(std::size_t N, std::size_t K, std::size_t J, Rng& rng) {
  ModelState s;
  s.cultures.resize(J);
  for (auto& c : s.cultures) {
    for (std::size_t k = 0; k < K; ++k) {
      c.truths.push_back(rng.normal(0.0, 1.5));
      c.log_difficulties.push_back(rng.normal(0.0, 0.5));
    }
    const double mean = std::accumulate(c.log_difficulties.begin(), c.log_difficulties.end(), 0.0) / K;
    for (auto& l : c.log_difficulties) l -= mean;
  }
  for (std::size_t i = 0; i < N; ++i) {
    s.respondents.push_back({rng.normal(0.0, 0.5), rng.normal(0.0, 0.3), rng.normal(0.0, 0.3)});
  }
  for (std::size_t j = 0; j + 1 < J; ++j) s.mixture.sticks.push_back(0.2 + 0.6 * rng.uniform());
  s.mixture.sticks.push_back(1.0);
  s.mixture.weights = stick_breaking(s.mixture.sticks);
  for (std::size_t i = 0; i < N; ++i) s.mixture.assignments.push_back(static_cast<int>(rng.uniform_index(J)));
  s.mixture.concentration = 1.0;
  return s;
}

// Random responses in (0,1); each cell missing with probability `missing`
// except the diagonal, so every row and column keeps an observation.
inline ResponseMatrix random_data(std::size_t N, std::size_t K, Rng& rng, double missing = 0.0) {
  std::vector<double> values(N * K);
  std::vector<bool> mask(N * K, true);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      values[i * K + k] = 0.02 + 0.96 * rng.uniform();
      if (i % K != k && i % N != k % N && rng.uniform() < missing) mask[i * K + k] = false;
    }
  }
  return ResponseMatrix(N, K, std::move(values), std::move(mask));
}

inline double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace icct::test
