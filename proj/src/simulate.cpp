#include "icct/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "icct/errors.hpp"
#include "icct/links.hpp"
#include "icct/random.hpp"

namespace icct {

namespace {

double draw(Rng& rng, double mean, double sd) { return sd > 0.0 ? rng.normal(mean, sd) : mean; }

void validate(const SimConfig& config) {
  if (config.respondents < 2 || config.items < 2) {
    throw ValidationError("simulate: need N >= 2 and K >= 2");
  }
  if (config.cultures.empty() || config.cultures.size() != config.weights.size()) {
    throw ValidationError("simulate: one weight per culture required");
  }
  for (const auto& c : config.cultures) {
    if (c.truths.size() != config.items || c.log_difficulties.size() != config.items) {
      throw ValidationError("simulate: culture vectors must have length K");
    }
  }
  double total = 0.0;
  for (double w : config.weights) {
    if (!(w >= 0.0)) throw ValidationError("simulate: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("simulate: weights must sum to 1");
  }
  if (!(config.missing_rate >= 0.0 && config.missing_rate < 1.0)) {
    throw ValidationError("simulate: missing_rate must lie in [0, 1)");
  }
  const auto& h = config.respondent_hyperparams;
  if (h.log_competence_sd < 0.0 || h.shift_sd < 0.0 || h.log_scale_sd < 0.0) {
    throw ValidationError("simulate: hyperparameter sds must be non-negative");
  }
}

std::vector<bool> draw_mask(const SimConfig& config, Rng& rng) {
  const std::size_t N = config.respondents;
  const std::size_t K = config.items;
  if (config.missing_rate == 0.0) return std::vector<bool>(N * K, true);
  for (int attempt = 0; attempt < config.max_mask_attempts; ++attempt) {
    std::vector<bool> mask(N * K);
    std::vector<std::size_t> rows(N, 0), cols(K, 0);
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t k = 0; k < K; ++k) {
        const bool seen = !rng.bernoulli(config.missing_rate);
        mask[i * K + k] = seen;
        rows[i] += seen;
        cols[k] += seen;
      }
    }
    const bool ok = std::all_of(rows.begin(), rows.end(), [](auto n) { return n > 0; }) &&
                    std::all_of(cols.begin(), cols.end(), [](auto n) { return n > 0; });
    if (ok) return mask;
  }
  throw ValidationError("simulate: could not draw a mask with every respondent and item observed in " +
                        std::to_string(config.max_mask_attempts) + " attempts");
}

}  // namespace

Simulation simulate(const SimConfig& config) {
  validate(config);
  Rng rng(config.seed);
  const std::size_t N = config.respondents;
  const std::size_t K = config.items;
  const auto& h = config.respondent_hyperparams;

  GroundTruth truth;
  truth.cultures = config.cultures;
  truth.weights = config.weights;
  truth.assignments.resize(N);
  truth.respondents.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    truth.assignments[i] = static_cast<int>(rng.categorical(config.weights));
    auto& r = truth.respondents[i];
    r.log_competence = draw(rng, h.log_competence_mean, h.log_competence_sd);
    r.shift_bias = draw(rng, h.shift_mean, h.shift_sd);
    r.log_scale_bias = draw(rng, h.log_scale_mean, h.log_scale_sd);
  }

  // Values that round to an endpoint are pulled back inside the open interval.
  const double lo = std::numeric_limits<double>::min();
  const double hi = std::nextafter(1.0, 0.0);
  std::vector<double> values(N * K);
  for (std::size_t i = 0; i < N; ++i) {
    const auto& r = truth.respondents[i];
    const auto& c = config.cultures[static_cast<std::size_t>(truth.assignments[i])];
    const double competence = r.competence();
    const double b = r.scale_bias();
    for (std::size_t k = 0; k < K; ++k) {
      const double sd = std::sqrt(std::exp(c.log_difficulties[k]) / competence);
      const double latent = rng.normal(c.truths[k], sd);
      const double x = inverse_logit(b * latent + r.shift_bias);
      values[i * K + k] = std::clamp(x, lo, hi);
    }
  }
  auto mask = draw_mask(config, rng);
  return Simulation{ResponseMatrix(N, K, std::move(values), std::move(mask)), std::move(truth)};
}

std::vector<CultureParams> random_cultures(std::size_t count, std::size_t items, double truth_sd,
                                           double log_difficulty_sd, double min_separation,
                                           std::uint64_t seed) {
  Rng rng(seed);
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<CultureParams> cultures(count);
    for (auto& c : cultures) {
      c.truths.resize(items);
      c.log_difficulties.resize(items);
      for (auto& t : c.truths) t = draw(rng, 0.0, truth_sd);
      for (auto& l : c.log_difficulties) l = draw(rng, 0.0, log_difficulty_sd);
      const double mean = std::accumulate(c.log_difficulties.begin(), c.log_difficulties.end(), 0.0) /
                          static_cast<double>(items);
      for (auto& l : c.log_difficulties) l -= mean;
    }
    bool separated = true;
    for (std::size_t a = 0; a < count && separated; ++a) {
      for (std::size_t b = a + 1; b < count; ++b) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < items; ++k) {
          const double d = cultures[a].truths[k] - cultures[b].truths[k];
          d2 += d * d;
        }
        if (std::sqrt(d2) < min_separation) {
          separated = false;
          break;
        }
      }
    }
    if (separated) return cultures;
  }
  throw ValidationError("random_cultures: separation constraint not met");
}

SimConfig benchmark_config(Benchmark kind, std::uint64_t seed, double prior_truth_sd) {
  SimConfig config;
  config.seed = seed;
  config.respondent_hyperparams = RespondentHyperparams{};
  if (kind == Benchmark::one_culture) {
    config.respondents = 100;
    config.items = 20;
    config.cultures = random_cultures(1, config.items, 1.5, 0.3, 0.0, seed ^ 0x5eedc0ffeeULL);
    config.weights = {1.0};
  } else {
    config.respondents = 200;
    config.items = 40;
    config.cultures = random_cultures(3, config.items, 1.5, 0.3, 3.0 * prior_truth_sd,
                                      seed ^ 0x5eedc0ffeeULL);
    config.weights = {0.45, 0.35, 0.20};
  }
  return config;
}

}  // namespace icct
