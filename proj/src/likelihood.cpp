#include "icct/likelihood.hpp"

#include <cmath>
#include <string>

#include "icct/errors.hpp"
#include "icct/links.hpp"

namespace icct {

namespace {

constexpr double kHalfLogTwoPi = 0.91893853320467274178;

}  // namespace

double cell_log_density_logit(double x_logit, double truth, double difficulty,
                              const RespondentParams& resp) {
  const double b = resp.scale_bias();
  const double competence = resp.competence();
  const double mean = b * truth + resp.shift_bias;
  const double sd = b * std::sqrt(difficulty / competence);
  const double z = (x_logit - mean) / sd;
  return -kHalfLogTwoPi - std::log(sd) - 0.5 * z * z;
}

double cell_log_density(double x_obs, double truth, double difficulty, const RespondentParams& resp) {
  return cell_log_density_logit(logit(x_obs), truth, difficulty, resp);
}

double respondent_log_likelihood(const ResponseMatrix& data, const ModelState& state,
                                 std::size_t respondent, std::size_t culture) {
  const auto& params = state.cultures[culture];
  const auto& resp = state.respondents[respondent];
  double sum = 0.0;
  for (std::size_t k = 0; k < data.items(); ++k) {
    if (!data.observed(respondent, k)) continue;
    sum += cell_log_density(data.value(respondent, k), params.truths[k],
                            std::exp(params.log_difficulties[k]), resp);
  }
  return sum;
}

double log_likelihood(const ResponseMatrix& data, const ModelState& state) {
  const std::size_t N = data.respondents();
  if (state.respondents.size() != N || state.mixture.assignments.size() != N) {
    throw ValidationError("log_likelihood: state has " + std::to_string(state.respondents.size()) +
                          " respondents, data has " + std::to_string(N));
  }
  for (const auto& c : state.cultures) {
    if (c.truths.size() != data.items() || c.log_difficulties.size() != data.items()) {
      throw ValidationError("log_likelihood: culture item count differs from data");
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const int z = state.mixture.assignments[i];
    if (z < 0 || static_cast<std::size_t>(z) >= state.cultures.size()) {
      throw ValidationError("log_likelihood: assignment out of range for respondent " +
                            std::to_string(i));
    }
    total += respondent_log_likelihood(data, state, i, static_cast<std::size_t>(z));
  }
  return total;
}

}  // namespace icct
