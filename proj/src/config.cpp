#include "icct/config.hpp"

#include <cmath>
#include <string>

#include "icct/errors.hpp"

namespace icct {

namespace {

void positive(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw ValidationError(std::string("config: ") + name + " must be a positive finite number");
  }
}

}  // namespace

void validate(const StudyConfig& c) {
  if (c.truncation < 2) throw ValidationError("config: truncation must be >= 2");
  if (c.burn_in < 0) throw ValidationError("config: burn_in must be >= 0");
  if (c.iterations <= c.burn_in) throw ValidationError("config: iterations must exceed burn_in");
  if (c.thin < 1) throw ValidationError("config: thin must be >= 1");
  if (c.retained_samples() < 1) throw ValidationError("config: schedule retains no samples");
  positive(c.priors.truth_sd, "priors.truth_sd");
  positive(c.priors.log_competence_sd, "priors.log_competence_sd");
  positive(c.priors.log_difficulty_sd, "priors.log_difficulty_sd");
  positive(c.priors.shift_sd, "priors.shift_sd");
  positive(c.priors.log_scale_sd, "priors.log_scale_sd");
  if (c.priors.concentration.is_fixed()) {
    positive(c.priors.concentration.fixed_value, "priors.concentration.fixed");
  } else {
    positive(c.priors.concentration.hyperprior->shape, "priors.concentration.gamma.shape");
    positive(c.priors.concentration.hyperprior->rate, "priors.concentration.gamma.rate");
  }
  positive(c.proposal_sds.log_competence, "proposal_sds.log_competence");
  positive(c.proposal_sds.shift, "proposal_sds.shift");
  positive(c.proposal_sds.log_scale, "proposal_sds.log_scale");
  positive(c.proposal_sds.log_difficulty, "proposal_sds.log_difficulty");
  if (c.ordinal_levels < 2) throw ValidationError("config: ordinal_levels must be >= 2");
  if (c.rescaling.rule == RescaleRule::affine &&
      !(c.rescaling.epsilon > 0.0 && c.rescaling.epsilon < 0.5)) {
    throw ValidationError("config: affine rescaling epsilon must lie in (0, 0.5)");
  }
  if (c.initialization.clusters < 1) throw ValidationError("config: initialization.clusters must be >= 1");
  if (c.initialization.lloyd_iterations < 0) {
    throw ValidationError("config: initialization.lloyd_iterations must be >= 0");
  }
}

}  // namespace icct
