#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icct/sampler.hpp"
#include "icct/simulate.hpp"

namespace icct {

// Order of averaging and inverse-logit when summarising truths.
enum class ConsensusTransform { mean_then_inverse_logit, inverse_logit_then_mean };

struct CultureSummary {
  int culture_id = 0;  // relabelled culture index
  std::size_t occupancy = 0;
  std::vector<double> consensus;   // (0, 1) scale
  std::vector<double> difficulty;  // exp of posterior mean log difficulty
};

struct ConsensusSummary {
  std::vector<CultureSummary> cultures;  // ascending culture_id
  std::vector<std::string> item_ids;
  std::size_t window = 0;
  std::optional<std::string> warning;
};

// Per culture occupied in the modal assignment over the last `window`
// samples of a relabelled chain. Throws ValidationError on an empty chain.
ConsensusSummary consensus_summary(const PosteriorChain& chain, std::size_t window = 100,
                                   ConsensusTransform transform = ConsensusTransform::mean_then_inverse_logit);

struct AllocationEntropy {
  double entropy_nats = 0.0;
  // Entropy divided by ln(occupied cultures); 0 with a single occupied culture.
  double normalized = 0.0;
};

// Shannon entropy of the occupancy distribution. Throws ValidationError when
// all counts are zero.
AllocationEntropy allocation_entropy(const std::vector<std::size_t>& counts);

struct ControversyRow {
  std::string item_id;
  std::vector<double> consensus;  // one value per culture, summary order
  double variance = 0.0;          // population variance across cultures
  double mean = 0.0;              // unweighted
  double weighted_mean = 0.0;     // occupancy-weighted
};

struct ControversyTable {
  std::vector<int> culture_ids;
  std::vector<ControversyRow> rows;  // variance descending, ties in item order
  std::optional<std::string> warning;
};

// Items ranked by cross-culture variance of consensus. Fewer than two
// cultures gives an empty table with a warning.
ControversyTable controversy_ranking(const ConsensusSummary& summary);

struct RankedItem {
  std::string item_id;
  double difficulty = 0.0;
};

struct CultureDifficultyRanking {
  int culture_id = 0;
  std::vector<RankedItem> items;  // difficulty descending, ties in item order
  std::string most_challenging;
};

std::vector<CultureDifficultyRanking> difficulty_ranking(const ConsensusSummary& summary);

struct Crosstab {
  std::vector<int> cultures;        // ascending
  std::vector<std::string> levels;  // ascending
  std::vector<std::vector<std::size_t>> counts;  // [culture][level]
  std::vector<std::size_t> row_totals;
  std::vector<std::size_t> column_totals;
  std::size_t total = 0;
};

// Throws ValidationError when the lengths differ.
Crosstab covariate_crosstab(const std::vector<int>& assignments, const std::vector<std::string>& covariates);

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

// Most frequent value of the occupied-culture trace; ties go to the smaller count.
int modal_count(const std::vector<int>& occupied_trace);

struct RecoveryScore {
  int true_cultures = 0;
  int modal_occupied = 0;
  bool count_hit = false;
  double ari = 0.0;
  // Per true culture: RMSE between recovered consensus and inverse_logit of
  // the true truths, using the recovered culture sharing most respondents.
  std::vector<double> consensus_rmse;
  double max_consensus_rmse = 0.0;
};

// Scores a fitted chain against simulator ground truth. The chain is
// relabelled internally.
RecoveryScore score_recovery(const GroundTruth& truth, const FitResult& fitted, std::size_t window = 100);

}  // namespace icct
