#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "icct/analysis.hpp"
#include "icct/relabel.hpp"

namespace icct::io {

// CSV renderings of the analysis results. Culture columns follow the
// relabelled culture index and are labelled 1-based ("culture_1", ...).
std::string cultures_csv(const ConsensusSummary& summary);
std::string consensus_csv(const ConsensusSummary& summary);
std::string difficulty_csv(const ConsensusSummary& summary);
std::string consensus_plot_csv(const ConsensusSummary& summary);
std::string difficulty_plot_csv(const ConsensusSummary& summary);
std::string entropy_csv(const AllocationEntropy& entropy, std::size_t occupied);
std::string controversy_csv(const ControversyTable& table);
std::string difficulty_ranking_csv(const std::vector<CultureDifficultyRanking>& rankings);
std::string modal_assignment_csv(const ModalAssignment& modal, const std::vector<std::string>& respondent_ids);
std::string crosstab_csv(const Crosstab& table);

struct SummaryFiles {
  std::vector<std::filesystem::path> written;
  std::vector<std::string> warnings;
};

// Relabels the chain, computes every summary over the last `window` samples
// and writes the tables into out_dir (created if needed).
SummaryFiles write_summaries(const PosteriorChain& chain, std::size_t window, const std::filesystem::path& out_dir);

}  // namespace icct::io
