#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace icct {

// N x K survey responses on the open unit interval with an observation mask.
// Row-major storage. Unobserved entries hold 0.5 and are never read by the
// likelihood.
class ResponseMatrix {
 public:
  ResponseMatrix() = default;

  // Validates every invariant; throws ValidationError on the first violation.
  ResponseMatrix(std::size_t respondents, std::size_t items, std::vector<double> values,
                 std::vector<bool> mask, std::vector<std::string> respondent_ids = {},
                 std::vector<std::string> item_ids = {});

  std::size_t respondents() const { return respondents_; }
  std::size_t items() const { return items_; }

  double value(std::size_t i, std::size_t k) const { return values_[i * items_ + k]; }
  bool observed(std::size_t i, std::size_t k) const { return mask_[i * items_ + k]; }

  const std::vector<double>& values() const { return values_; }
  const std::vector<bool>& mask() const { return mask_; }
  const std::vector<std::string>& respondent_ids() const { return respondent_ids_; }
  const std::vector<std::string>& item_ids() const { return item_ids_; }

  std::size_t observed_count() const;

  // Copy with mask cleared everywhere; only for likelihood edge-case tests,
  // the result does not satisfy the observation-count invariant.
  ResponseMatrix without_observations() const;

  friend bool operator==(const ResponseMatrix&, const ResponseMatrix&) = default;

 private:
  std::size_t respondents_ = 0;
  std::size_t items_ = 0;
  std::vector<double> values_;
  std::vector<bool> mask_;
  std::vector<std::string> respondent_ids_;
  std::vector<std::string> item_ids_;
};

// Consensus truths and log item difficulties of one culture, both on the
// logit scale. Log difficulties are kept centred to mean zero per culture.
struct CultureParams {
  std::vector<double> truths;
  std::vector<double> log_difficulties;

  friend bool operator==(const CultureParams&, const CultureParams&) = default;
};

struct RespondentParams {
  double log_competence = 0.0;
  double shift_bias = 0.0;
  double log_scale_bias = 0.0;

  double competence() const;
  double scale_bias() const;

  friend bool operator==(const RespondentParams&, const RespondentParams&) = default;
};

// Truncated stick-breaking mixture. Assignments are zero-based culture
// indices; the last stick is pinned to 1.
struct MixtureState {
  std::vector<double> sticks;
  std::vector<double> weights;
  std::vector<int> assignments;
  double concentration = 1.0;

  friend bool operator==(const MixtureState&, const MixtureState&) = default;
};

struct ModelState {
  std::vector<CultureParams> cultures;
  std::vector<RespondentParams> respondents;
  MixtureState mixture;

  std::size_t truncation() const { return cultures.size(); }
  std::size_t items() const { return cultures.empty() ? 0 : cultures.front().truths.size(); }

  // Occupancy count per culture index.
  std::vector<std::size_t> counts() const;
  std::size_t occupied() const;

  friend bool operator==(const ModelState&, const ModelState&) = default;
};

// Throws ValidationError naming the first broken ModelState invariant.
// When `items` is non-zero the culture vectors must have that length.
void check_state(const ModelState& state, std::size_t items = 0);

}  // namespace icct
