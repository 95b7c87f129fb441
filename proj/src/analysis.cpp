#include "icct/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "icct/errors.hpp"
#include "icct/links.hpp"
#include "icct/relabel.hpp"

namespace icct {

ConsensusSummary consensus_summary(const PosteriorChain& chain, std::size_t window, ConsensusTransform transform) {
  const auto modal = modal_assignment(chain, window);
  ConsensusSummary summary;
  summary.window = modal.window;
  summary.warning = modal.warning;
  summary.item_ids = chain.item_ids;
  const std::size_t S = chain.samples.size();
  const std::size_t J = chain.samples.front().cultures.size();
  const std::size_t K = chain.samples.front().items();
  if (summary.item_ids.size() != K) {
    summary.item_ids.clear();
    for (std::size_t k = 0; k < K; ++k) summary.item_ids.push_back("item" + std::to_string(k + 1));
  }
  std::vector<std::size_t> occupancy(J, 0);
  for (int z : modal.labels) ++occupancy[static_cast<std::size_t>(z)];
  const double n = static_cast<double>(modal.window);
  for (std::size_t c = 0; c < J; ++c) {
    if (occupancy[c] == 0) continue;
    CultureSummary culture;
    culture.culture_id = static_cast<int>(c);
    culture.occupancy = occupancy[c];
    culture.consensus.assign(K, 0.0);
    culture.difficulty.assign(K, 0.0);
    // Means accumulate deviations from the first sample in the window, so a
    // constant trace reproduces its value exactly.
    const std::size_t first = S - modal.window;
    const auto value = [&](std::size_t s, std::size_t k) {
      const double t = chain.samples[s].cultures[c].truths[k];
      return transform == ConsensusTransform::mean_then_inverse_logit ? t : inverse_logit(t);
    };
    for (std::size_t s = first + 1; s < S; ++s) {
      const auto& params = chain.samples[s].cultures[c];
      for (std::size_t k = 0; k < K; ++k) {
        culture.consensus[k] += value(s, k) - value(first, k);
        culture.difficulty[k] += params.log_difficulties[k] - chain.samples[first].cultures[c].log_difficulties[k];
      }
    }
    for (std::size_t k = 0; k < K; ++k) {
      culture.consensus[k] = value(first, k) + culture.consensus[k] / n;
      if (transform == ConsensusTransform::mean_then_inverse_logit) {
        culture.consensus[k] = inverse_logit(culture.consensus[k]);
      }
      culture.difficulty[k] =
          std::exp(chain.samples[first].cultures[c].log_difficulties[k] + culture.difficulty[k] / n);
    }
    summary.cultures.push_back(std::move(culture));
  }
  return summary;
}

AllocationEntropy allocation_entropy(const std::vector<std::size_t>& counts) {
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  if (total == 0.0) throw ValidationError("allocation_entropy: all counts are zero");
  AllocationEntropy out;
  std::size_t occupied = 0;
  for (auto n : counts) {
    if (n == 0) continue;
    ++occupied;
    const double p = static_cast<double>(n) / total;
    out.entropy_nats -= p * std::log(p);
  }
  out.normalized = occupied > 1 ? out.entropy_nats / std::log(static_cast<double>(occupied)) : 0.0;
  return out;
}

ControversyTable controversy_ranking(const ConsensusSummary& summary) {
  ControversyTable table;
  for (const auto& c : summary.cultures) table.culture_ids.push_back(c.culture_id);
  if (summary.cultures.size() < 2) {
    table.warning = "controversy ranking needs at least two occupied cultures";
    return table;
  }
  const double m = static_cast<double>(summary.cultures.size());
  double occupants = 0.0;
  for (const auto& c : summary.cultures) occupants += static_cast<double>(c.occupancy);
  for (std::size_t k = 0; k < summary.item_ids.size(); ++k) {
    ControversyRow row;
    row.item_id = summary.item_ids[k];
    for (const auto& c : summary.cultures) {
      row.consensus.push_back(c.consensus[k]);
      row.mean += c.consensus[k];
      row.weighted_mean += static_cast<double>(c.occupancy) * c.consensus[k];
    }
    row.mean /= m;
    row.weighted_mean = occupants > 0.0 ? row.weighted_mean / occupants : row.mean;
    for (double v : row.consensus) row.variance += (v - row.mean) * (v - row.mean);
    row.variance /= m;
    table.rows.push_back(std::move(row));
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ControversyRow& a, const ControversyRow& b) { return a.variance > b.variance; });
  return table;
}

std::vector<CultureDifficultyRanking> difficulty_ranking(const ConsensusSummary& summary) {
  std::vector<CultureDifficultyRanking> out;
  for (const auto& c : summary.cultures) {
    CultureDifficultyRanking ranking;
    ranking.culture_id = c.culture_id;
    for (std::size_t k = 0; k < c.difficulty.size(); ++k) {
      ranking.items.push_back({k < summary.item_ids.size() ? summary.item_ids[k] : std::to_string(k + 1),
                               c.difficulty[k]});
    }
    std::stable_sort(ranking.items.begin(), ranking.items.end(),
                     [](const RankedItem& a, const RankedItem& b) { return a.difficulty > b.difficulty; });
    if (!ranking.items.empty()) ranking.most_challenging = ranking.items.front().item_id;
    out.push_back(std::move(ranking));
  }
  return out;
}

Crosstab covariate_crosstab(const std::vector<int>& assignments, const std::vector<std::string>& covariates) {
  if (assignments.size() != covariates.size()) {
    throw ValidationError("covariate_crosstab: " + std::to_string(covariates.size()) + " covariate values for " +
                          std::to_string(assignments.size()) + " respondents");
  }
  std::map<int, std::map<std::string, std::size_t>> cells;
  std::map<std::string, std::size_t> levels;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    ++cells[assignments[i]][covariates[i]];
    ++levels[covariates[i]];
  }
  Crosstab t;
  for (const auto& [level, n] : levels) {
    t.levels.push_back(level);
    t.column_totals.push_back(n);
  }
  for (const auto& [culture, row] : cells) {
    t.cultures.push_back(culture);
    std::vector<std::size_t> counts;
    std::size_t total = 0;
    for (const auto& level : t.levels) {
      const auto it = row.find(level);
      counts.push_back(it == row.end() ? 0 : it->second);
      total += counts.back();
    }
    t.counts.push_back(std::move(counts));
    t.row_totals.push_back(total);
  }
  t.total = assignments.size();
  return t;
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw ValidationError("adjusted_rand_index: label vectors differ in length");
  auto pairs = [](double n) { return n * (n - 1.0) / 2.0; };
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  double index = 0.0, row_sum = 0.0, col_sum = 0.0;
  for (const auto& [key, n] : joint) index += pairs(n);
  for (const auto& [key, n] : rows) row_sum += pairs(n);
  for (const auto& [key, n] : cols) col_sum += pairs(n);
  const double expected = row_sum * col_sum / pairs(static_cast<double>(a.size()));
  const double maximum = 0.5 * (row_sum + col_sum);
  if (maximum == expected) return 1.0;
  return (index - expected) / (maximum - expected);
}

int modal_count(const std::vector<int>& occupied_trace) {
  std::map<int, std::size_t> tally;
  for (int c : occupied_trace) ++tally[c];
  int best = 0;
  std::size_t best_n = 0;
  for (const auto& [count, n] : tally) {
    if (n > best_n) {
      best = count;
      best_n = n;
    }
  }
  return best;
}

RecoveryScore score_recovery(const GroundTruth& truth, const FitResult& fitted, std::size_t window) {
  const auto chain = relabel(fitted.chain);
  const auto modal = modal_assignment(chain, window);
  const auto summary = consensus_summary(chain, window);
  RecoveryScore score;
  score.true_cultures = 0;
  std::vector<std::size_t> true_sizes(truth.cultures.size(), 0);
  for (int z : truth.assignments) ++true_sizes[static_cast<std::size_t>(z)];
  for (auto n : true_sizes) score.true_cultures += n > 0;
  score.modal_occupied = modal_count(fitted.report.occupied_culture_count_trace);
  score.count_hit = score.modal_occupied == score.true_cultures;
  score.ari = adjusted_rand_index(truth.assignments, modal.labels);
  for (std::size_t t = 0; t < truth.cultures.size(); ++t) {
    if (true_sizes[t] == 0) continue;
    std::map<int, std::size_t> overlap;
    for (std::size_t i = 0; i < truth.assignments.size(); ++i) {
      if (truth.assignments[i] == static_cast<int>(t)) ++overlap[modal.labels[i]];
    }
    int best = -1;
    std::size_t best_n = 0;
    for (const auto& [label, n] : overlap) {
      if (n > best_n) {
        best = label;
        best_n = n;
      }
    }
    const auto it = std::find_if(summary.cultures.begin(), summary.cultures.end(),
                                 [&](const CultureSummary& c) { return c.culture_id == best; });
    double se = 0.0;
    const auto& truths = truth.cultures[t].truths;
    for (std::size_t k = 0; k < truths.size(); ++k) {
      const double d = it->consensus[k] - inverse_logit(truths[k]);
      se += d * d;
    }
    score.consensus_rmse.push_back(std::sqrt(se / static_cast<double>(truths.size())));
  }
  score.max_consensus_rmse =
      score.consensus_rmse.empty() ? 0.0 : *std::max_element(score.consensus_rmse.begin(), score.consensus_rmse.end());
  return score;
}

}  // namespace icct
