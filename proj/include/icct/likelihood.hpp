#pragma once

#include "icct/types.hpp"

namespace icct {

// Log density of the logit-transformed response X = logit(x_obs) under the
// continuous response model: the latent appraisal Y ~ Normal(truth,
// sqrt(difficulty / competence)) is distorted into X = b * Y + a.
//
// The density is taken on the logit scale. The Jacobian of the logit map only
// depends on the data, so it is left out; log-likelihood values are therefore
// comparable between parameter settings on one dataset, not across datasets.
double cell_log_density(double x_obs, double truth, double difficulty, const RespondentParams& resp);

// Same as above with the response already on the logit scale.
double cell_log_density_logit(double x_logit, double truth, double difficulty,
                              const RespondentParams& resp);

// Sum of cell log densities over observed cells, each respondent using the
// parameters of its assigned culture. Respondents are summed in index order
// (per-respondent partial sums first) so the result is reproducible.
// Throws ValidationError on a dimension mismatch.
double log_likelihood(const ResponseMatrix& data, const ModelState& state);

// Contribution of one respondent if it were assigned to `culture`.
double respondent_log_likelihood(const ResponseMatrix& data, const ModelState& state,
                                 std::size_t respondent, std::size_t culture);

}  // namespace icct
