#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "icct/config.hpp"
#include "icct/random.hpp"
#include "icct/types.hpp"

namespace icct {

// Responses mapped to the logit scale once, with per-respondent lists of
// observed items.
class LogitData {
 public:
  explicit LogitData(const ResponseMatrix& data);

  std::size_t respondents() const { return respondents_; }
  std::size_t items() const { return items_; }
  double x(std::size_t i, std::size_t k) const { return x_[i * items_ + k]; }
  std::span<const std::uint32_t> observed_items(std::size_t i) const { return observed_[i]; }

 private:
  std::size_t respondents_;
  std::size_t items_;
  std::vector<double> x_;
  std::vector<std::vector<std::uint32_t>> observed_;
};

// Log-likelihood on the logit scale, same value as log_likelihood() on the
// originating ResponseMatrix up to rounding in the logit transform.
double log_likelihood(const LogitData& data, const ModelState& state);

// Proposal scales and acceptance bookkeeping for the Metropolis blocks.
// Sds are per coordinate: (culture, item) for log difficulties and
// respondent for the three respondent parameters.
class ProposalState {
 public:
  ProposalState() = default;
  ProposalState(std::size_t respondents, std::size_t cultures, std::size_t items, const ProposalSds& sds);

  struct Counter {
    std::uint64_t proposed = 0;
    std::uint64_t accepted = 0;
    double rate() const { return proposed == 0 ? 0.0 : static_cast<double>(accepted) / proposed; }
  };

  std::vector<double> log_difficulty_sd;  // cultures x items
  std::vector<double> log_competence_sd;
  std::vector<double> shift_sd;
  std::vector<double> log_scale_sd;

  Counter log_difficulty;
  Counter log_competence;
  Counter shift;
  Counter log_scale;

  // Robbins-Monro step toward 0.44 acceptance; no-op unless adapting.
  bool adapting = false;
  double step = 0.0;
  void record(Counter& counter, double& sd, bool accepted);
  void reset_counters();
};

enum class CultureBlock { truths, difficulties };

// Each respondent's culture drawn from its full conditional over all
// truncated components.
std::vector<int> update_assignments(const LogitData& data, const ModelState& state, Rng& rng);

// v_j ~ Beta(1 + n_j, alpha + sum_{l>j} n_l) for all but the last stick,
// which stays 1.
std::vector<double> update_sticks(std::span<const int> assignments, std::size_t truncation,
                                  double concentration, Rng& rng);

struct StickDraw {
  std::vector<double> sticks;
  // sum_{j<J} log(1 - v_j) of the unclamped draw.
  double log_remaining = 0.0;
};
// Same draw as update_sticks, also returning the exact log of the leftover
// stick mass, which clamping the stored sticks below 1 would distort.
StickDraw draw_sticks(std::span<const int> assignments, std::size_t truncation, double concentration, Rng& rng);

// Gamma(shape + J - 1, rate - log_remaining); fixed priors return their value.
double sample_concentration(double log_remaining, std::size_t truncation, const ConcentrationPrior& prior,
                            Rng& rng);

// Conjugate draw of the concentration given the sticks:
// Gamma(shape + J - 1, rate - sum_{j<J} log(1 - v_j)). Fixed priors return
// their value.
double sample_concentration_given_sticks(std::span<const double> sticks, const ConcentrationPrior& prior,
                                         Rng& rng);

// Auxiliary-variable update from the assignments alone: auxiliary sticks are
// drawn given (assignments, current), then the conjugate draw above. One
// application is a valid Markov step for p(alpha | assignments).
double update_concentration(std::span<const int> assignments, std::size_t truncation, double current,
                            const ConcentrationPrior& prior, Rng& rng);

// Gaussian-conjugate draw of every truth; cultures without members draw
// from the prior.
void update_truths(const LogitData& data, ModelState& state, const Priors& priors, Rng& rng);

// Random-walk Metropolis on the log difficulties of occupied cultures. Each
// proposal moves one item up and a uniformly chosen partner item down by
// the same amount, so the per-culture mean stays zero. Empty cultures draw
// from the centred prior. Ends with recenter_difficulties().
void update_difficulties(const LogitData& data, ModelState& state, const Priors& priors,
                         ProposalState& proposals, Rng& rng);

void update_culture_params(const LogitData& data, ModelState& state, CultureBlock block,
                           const Priors& priors, ProposalState& proposals, Rng& rng);

// Subtracts each culture's mean log difficulty and applies the same shift to
// the log competence of its members, which leaves every cell density
// unchanged.
void recenter_difficulties(ModelState& state);

// Random-walk Metropolis on (log competence, shift, log scale), one
// coordinate at a time or jointly. Respondents with no observed cells draw
// from the prior.
void update_respondent_params(const LogitData& data, ModelState& state, const Priors& priors,
                              ProposalState& proposals, Rng& rng, bool joint);

// Starting state for a chain (see Initialization).
ModelState initial_state(const LogitData& data, const StudyConfig& config, Rng& rng);

// Exact draw of all parameters from the prior, with log difficulties from
// the centred prior.
ModelState draw_prior_state(std::size_t respondents, std::size_t items, std::size_t truncation,
                            const Priors& priors, Rng& rng);

// Fully observed responses drawn from the likelihood at `state`.
ResponseMatrix draw_responses(const ModelState& state, Rng& rng);

// One sweep: assignments, sticks, concentration, truths, difficulties,
// respondents.
void sweep(const LogitData& data, ModelState& state, const StudyConfig& config, ProposalState& proposals,
           Rng& rng);

struct PosteriorChain {
  std::vector<ModelState> samples;
  StudyConfig config;
  std::vector<double> log_likelihood_trace;
  std::uint64_t seed = 0;
  std::vector<std::string> respondent_ids;
  std::vector<std::string> item_ids;

  friend bool operator==(const PosteriorChain&, const PosteriorChain&) = default;
};

struct AcceptanceRates {
  double log_competence = 0.0;
  double shift = 0.0;
  double log_scale = 0.0;
  double log_difficulty = 0.0;
};

struct FitReport {
  std::vector<int> occupied_culture_count_trace;
  AcceptanceRates acceptance_rates;
  double rhat_loglik = 0.0;
  double ess_loglik = 0.0;
  std::vector<std::string> warnings;
};

struct FitResult {
  PosteriorChain chain;
  FitReport report;
};

// Runs the configured schedule and keeps every thin-th post-burn-in state.
// Same data, config and seed give an identical chain. Numerical failures are
// rethrown as NumericalError naming the sweep.
FitResult fit(const ResponseMatrix& data, const StudyConfig& config);

}  // namespace icct
