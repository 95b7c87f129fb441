#include "icct/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "icct/errors.hpp"
#include "icct/stick_breaking.hpp"

namespace icct {

ResponseMatrix::ResponseMatrix(std::size_t respondents, std::size_t items,
                               std::vector<double> values, std::vector<bool> mask,
                               std::vector<std::string> respondent_ids,
                               std::vector<std::string> item_ids)
    : respondents_(respondents),
      items_(items),
      values_(std::move(values)),
      mask_(std::move(mask)),
      respondent_ids_(std::move(respondent_ids)),
      item_ids_(std::move(item_ids)) {
  if (respondents_ < 2 || items_ < 2) {
    throw ValidationError("response matrix needs at least 2 respondents and 2 items");
  }
  const std::size_t cells = respondents_ * items_;
  if (values_.size() != cells || mask_.size() != cells) {
    throw ValidationError("response matrix: value/mask size does not match N x K");
  }
  if (respondent_ids_.empty()) {
    for (std::size_t i = 0; i < respondents_; ++i) respondent_ids_.push_back("r" + std::to_string(i + 1));
  }
  if (item_ids_.empty()) {
    for (std::size_t k = 0; k < items_; ++k) item_ids_.push_back("item" + std::to_string(k + 1));
  }
  if (respondent_ids_.size() != respondents_ || item_ids_.size() != items_) {
    throw ValidationError("response matrix: id list lengths do not match N x K");
  }
  std::vector<std::size_t> per_item(items_, 0);
  for (std::size_t i = 0; i < respondents_; ++i) {
    std::size_t per_row = 0;
    for (std::size_t k = 0; k < items_; ++k) {
      const std::size_t c = i * items_ + k;
      if (!mask_[c]) {
        values_[c] = 0.5;
        continue;
      }
      const double x = values_[c];
      if (!(x > 0.0 && x < 1.0)) {
        throw ValidationError("response matrix: value at respondent " + respondent_ids_[i] +
                              ", item " + item_ids_[k] + " is outside (0, 1)");
      }
      ++per_row;
      ++per_item[k];
    }
    if (per_row == 0) {
      throw ValidationError("response matrix: respondent " + respondent_ids_[i] +
                            " has no observed items");
    }
  }
  for (std::size_t k = 0; k < items_; ++k) {
    if (per_item[k] == 0) {
      throw ValidationError("response matrix: item " + item_ids_[k] + " has no observations");
    }
  }
}

std::size_t ResponseMatrix::observed_count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), true));
}

ResponseMatrix ResponseMatrix::without_observations() const {
  ResponseMatrix copy = *this;
  copy.mask_.assign(copy.mask_.size(), false);
  return copy;
}

double RespondentParams::competence() const { return std::exp(log_competence); }
double RespondentParams::scale_bias() const { return std::exp(log_scale_bias); }

std::vector<std::size_t> ModelState::counts() const {
  std::vector<std::size_t> n(cultures.size(), 0);
  for (int z : mixture.assignments) {
    if (z >= 0 && static_cast<std::size_t>(z) < n.size()) ++n[static_cast<std::size_t>(z)];
  }
  return n;
}

std::size_t ModelState::occupied() const {
  const auto n = counts();
  return static_cast<std::size_t>(std::count_if(n.begin(), n.end(), [](std::size_t c) { return c > 0; }));
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("model state: " + what);
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void check_state(const ModelState& state, std::size_t items) {
  const std::size_t J = state.cultures.size();
  require(J >= 1, "no cultures");
  const std::size_t K = items == 0 ? state.items() : items;
  for (std::size_t c = 0; c < J; ++c) {
    const auto& culture = state.cultures[c];
    require(culture.truths.size() == K && culture.log_difficulties.size() == K,
            "culture " + std::to_string(c) + " has wrong item count");
    require(all_finite(culture.truths) && all_finite(culture.log_difficulties),
            "culture " + std::to_string(c) + " has non-finite parameters");
    const double mean =
        std::accumulate(culture.log_difficulties.begin(), culture.log_difficulties.end(), 0.0) /
        static_cast<double>(K);
    require(std::abs(mean) < 1e-9, "culture " + std::to_string(c) + " log difficulties not centred");
  }
  for (std::size_t i = 0; i < state.respondents.size(); ++i) {
    const auto& r = state.respondents[i];
    require(std::isfinite(r.log_competence) && std::isfinite(r.shift_bias) &&
                std::isfinite(r.log_scale_bias),
            "respondent " + std::to_string(i) + " has non-finite parameters");
  }
  const auto& mix = state.mixture;
  require(mix.sticks.size() == J && mix.weights.size() == J, "mixture length differs from truncation");
  require(mix.assignments.size() == state.respondents.size(), "assignment count differs from N");
  require(std::isfinite(mix.concentration) && mix.concentration > 0.0, "concentration must be positive");
  std::vector<double> expected;
  try {
    expected = stick_breaking(mix.sticks);
  } catch (const std::domain_error& e) {
    throw ValidationError(std::string("model state: ") + e.what());
  }
  require(expected == mix.weights, "weights are not the stick-breaking transform of the sticks");
  const double total = std::accumulate(mix.weights.begin(), mix.weights.end(), 0.0);
  require(std::abs(total - 1.0) <= 1e-12, "weights do not sum to one");
  for (std::size_t i = 0; i < mix.assignments.size(); ++i) {
    const int z = mix.assignments[i];
    require(z >= 0 && static_cast<std::size_t>(z) < J,
            "assignment of respondent " + std::to_string(i) + " out of range");
    require(mix.weights[static_cast<std::size_t>(z)] > 0.0,
            "respondent " + std::to_string(i) + " assigned to a zero-weight culture");
  }
}

}  // namespace icct
