#pragma once

#include <cstdint>
#include <vector>

#include "icct/types.hpp"

namespace icct {

// Population distribution of respondent parameters. A zero sd pins the
// parameter at its mean.
struct RespondentHyperparams {
  double log_competence_mean = 0.0;
  double log_competence_sd = 0.3;
  double shift_mean = 0.0;
  double shift_sd = 0.2;
  double log_scale_mean = 0.0;
  double log_scale_sd = 0.2;
};

struct SimConfig {
  std::size_t respondents = 0;
  std::size_t items = 0;
  std::vector<CultureParams> cultures;
  std::vector<double> weights;
  RespondentHyperparams respondent_hyperparams;
  double missing_rate = 0.0;
  std::uint64_t seed = 0;
  int max_mask_attempts = 100;
};

struct GroundTruth {
  std::vector<CultureParams> cultures;
  std::vector<RespondentParams> respondents;
  std::vector<int> assignments;
  std::vector<double> weights;
};

struct Simulation {
  ResponseMatrix data;
  GroundTruth truth;
};

// Draws a study from the generative model. Identical configs give
// bit-identical output. Throws ValidationError for invalid configs or when
// no mask with every row and column observed is found within
// max_mask_attempts draws.
Simulation simulate(const SimConfig& config);

// Draws `count` cultures with iid Normal(0, truth_sd) truths and centred
// Normal(0, log_difficulty_sd) log difficulties, redrawing until every pair
// of truth vectors is at least `min_separation` apart in Euclidean distance.
std::vector<CultureParams> random_cultures(std::size_t count, std::size_t items, double truth_sd,
                                           double log_difficulty_sd, double min_separation,
                                           std::uint64_t seed);

enum class Benchmark { one_culture, three_cultures };

// Recovery benchmarks: 1 culture with N=100, K=20, or 3 cultures with
// N=200, K=40 whose truth vectors are separated by at least three prior
// truth sds.
SimConfig benchmark_config(Benchmark kind, std::uint64_t seed, double prior_truth_sd = 2.0);

}  // namespace icct
