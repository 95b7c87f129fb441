#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace icct {

// Seeded source for every random draw in the library. Distribution objects
// are constructed per call so no hidden state survives between draws; the
// stream is therefore a pure function of the seed and the call sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal(double mean, double sd);
  // Gamma with shape/rate parametrisation.
  double gamma(double shape, double rate);
  double beta(double a, double b);
  bool bernoulli(double p);
  std::size_t uniform_index(std::size_t n);
  // Index drawn from a categorical with strictly positive weights.
  std::size_t categorical(std::span<const double> weights);
  // Index drawn from unnormalised log-probabilities (log-sum-exp normalised).
  // Throws NumericalError if no entry is finite.
  std::size_t categorical_log(std::span<const double> log_weights);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace icct
