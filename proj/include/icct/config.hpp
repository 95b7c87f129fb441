#pragma once

#include <cstdint>
#include <optional>

namespace icct {

struct GammaPrior {
  double shape = 2.0;
  double rate = 1.0;

  friend bool operator==(const GammaPrior&, const GammaPrior&) = default;
};

// Either a fixed concentration or a Gamma(shape, rate) hyperprior.
struct ConcentrationPrior {
  double fixed_value = 1.0;
  std::optional<GammaPrior> hyperprior;

  bool is_fixed() const { return !hyperprior.has_value(); }

  static ConcentrationPrior fixed(double value) { return {value, std::nullopt}; }
  static ConcentrationPrior gamma(double shape, double rate) { return {1.0, GammaPrior{shape, rate}}; }

  friend bool operator==(const ConcentrationPrior&, const ConcentrationPrior&) = default;
};

struct Priors {
  double truth_sd = 2.0;
  double log_competence_sd = 1.0;
  double log_difficulty_sd = 1.0;
  double shift_sd = 0.5;
  double log_scale_sd = 0.5;
  ConcentrationPrior concentration = ConcentrationPrior::fixed(1.0);

  friend bool operator==(const Priors&, const Priors&) = default;
};

struct ProposalSds {
  double log_competence = 0.1;
  double shift = 0.1;
  double log_scale = 0.1;
  double log_difficulty = 0.1;

  friend bool operator==(const ProposalSds&, const ProposalSds&) = default;
};

enum class RescaleRule { midpoint, affine };

struct Rescaling {
  RescaleRule rule = RescaleRule::midpoint;
  double epsilon = 0.05;  // affine only: ratings map onto [epsilon, 1 - epsilon]

  friend bool operator==(const Rescaling&, const Rescaling&) = default;
};

// How the input CSV is read: ordinal ratings 1..R or values already in (0, 1).
enum class InputScale { ordinal, unit };

enum class InitStrategy { single, kmeans };

struct Initialization {
  InitStrategy strategy = InitStrategy::kmeans;
  int clusters = 8;           // kmeans only, capped at truncation and N
  int lloyd_iterations = 20;  // kmeans only

  friend bool operator==(const Initialization&, const Initialization&) = default;
};

struct StudyConfig {
  int truncation = 20;
  int iterations = 4000;
  int burn_in = 2000;
  int thin = 10;
  std::uint64_t seed = 1;
  Priors priors;
  ProposalSds proposal_sds;
  // Robbins-Monro adaptation of proposal sds toward 0.44 acceptance, during
  // burn-in only.
  bool adapt = true;
  // Respondent parameters proposed one coordinate at a time, or jointly.
  bool joint_respondent_proposal = false;
  int ordinal_levels = 4;
  Rescaling rescaling;
  InputScale input_scale = InputScale::ordinal;
  Initialization initialization;

  int retained_samples() const { return (iterations - burn_in) / thin; }

  friend bool operator==(const StudyConfig&, const StudyConfig&) = default;
};

// Throws ValidationError on the first invalid field.
void validate(const StudyConfig& config);

}  // namespace icct
