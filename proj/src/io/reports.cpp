#include "icct/io/reports.hpp"

#include "icct/io/csv.hpp"

namespace icct::io {

namespace {

std::string culture_label(int id) { return "culture_" + std::to_string(id + 1); }

std::string wide(const ConsensusSummary& summary, bool consensus) {
  std::string out = "item_id";
  for (const auto& c : summary.cultures) out += "," + culture_label(c.culture_id);
  out += "\n";
  for (std::size_t k = 0; k < summary.item_ids.size(); ++k) {
    out += csv_escape(summary.item_ids[k]);
    for (const auto& c : summary.cultures) out += "," + format_number(consensus ? c.consensus[k] : c.difficulty[k]);
    out += "\n";
  }
  return out;
}

std::string long_form(const ConsensusSummary& summary, bool consensus) {
  std::string out = consensus ? "item_id,culture_id,occupancy,consensus\n" : "item_id,culture_id,occupancy,difficulty\n";
  for (const auto& c : summary.cultures) {
    for (std::size_t k = 0; k < summary.item_ids.size(); ++k) {
      out += csv_escape(summary.item_ids[k]) + "," + std::to_string(c.culture_id + 1) + "," +
             std::to_string(c.occupancy) + "," + format_number(consensus ? c.consensus[k] : c.difficulty[k]) + "\n";
    }
  }
  return out;
}

}  // namespace

std::string cultures_csv(const ConsensusSummary& summary) {
  std::size_t total = 0;
  for (const auto& c : summary.cultures) total += c.occupancy;
  std::string out = "culture_id,occupancy,share\n";
  for (const auto& c : summary.cultures) {
    out += std::to_string(c.culture_id + 1) + "," + std::to_string(c.occupancy) + "," +
           format_number(static_cast<double>(c.occupancy) / static_cast<double>(total)) + "\n";
  }
  return out;
}

std::string consensus_csv(const ConsensusSummary& summary) { return wide(summary, true); }
std::string difficulty_csv(const ConsensusSummary& summary) { return wide(summary, false); }
std::string consensus_plot_csv(const ConsensusSummary& summary) { return long_form(summary, true); }
std::string difficulty_plot_csv(const ConsensusSummary& summary) { return long_form(summary, false); }

std::string entropy_csv(const AllocationEntropy& entropy, std::size_t occupied) {
  return "entropy_nats,normalized,occupied_cultures\n" + format_number(entropy.entropy_nats) + "," +
         format_number(entropy.normalized) + "," + std::to_string(occupied) + "\n";
}

std::string controversy_csv(const ControversyTable& table) {
  std::string out = "rank,item_id";
  for (int id : table.culture_ids) out += "," + culture_label(id);
  out += ",variance,mean,weighted_mean\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    out += std::to_string(r + 1) + "," + csv_escape(row.item_id);
    for (double v : row.consensus) out += "," + format_number(v);
    out += "," + format_number(row.variance) + "," + format_number(row.mean) + "," + format_number(row.weighted_mean) + "\n";
  }
  return out;
}

std::string difficulty_ranking_csv(const std::vector<CultureDifficultyRanking>& rankings) {
  std::string out = "culture_id,rank,item_id,difficulty,most_challenging\n";
  for (const auto& ranking : rankings) {
    for (std::size_t r = 0; r < ranking.items.size(); ++r) {
      out += std::to_string(ranking.culture_id + 1) + "," + std::to_string(r + 1) + "," +
             csv_escape(ranking.items[r].item_id) + "," + format_number(ranking.items[r].difficulty) + "," +
             (r == 0 ? "1" : "0") + "\n";
    }
  }
  return out;
}

std::string modal_assignment_csv(const ModalAssignment& modal, const std::vector<std::string>& respondent_ids) {
  std::string out = "respondent_id,culture_id\n";
  for (std::size_t i = 0; i < modal.labels.size(); ++i) {
    const std::string id = i < respondent_ids.size() ? respondent_ids[i] : std::to_string(i + 1);
    out += csv_escape(id) + "," + std::to_string(modal.labels[i] + 1) + "\n";
  }
  return out;
}

std::string crosstab_csv(const Crosstab& table) {
  std::string out = "culture_id";
  for (const auto& level : table.levels) out += "," + csv_escape(level);
  out += ",total\n";
  for (std::size_t r = 0; r < table.cultures.size(); ++r) {
    out += std::to_string(table.cultures[r] + 1);
    for (auto n : table.counts[r]) out += "," + std::to_string(n);
    out += "," + std::to_string(table.row_totals[r]) + "\n";
  }
  out += "total";
  for (auto n : table.column_totals) out += "," + std::to_string(n);
  out += "," + std::to_string(table.total) + "\n";
  return out;
}

SummaryFiles write_summaries(const PosteriorChain& chain, std::size_t window, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto relabelled = relabel(chain);
  const auto modal = modal_assignment(relabelled, window);
  const auto summary = consensus_summary(relabelled, window);
  std::vector<std::size_t> counts;
  for (const auto& c : summary.cultures) counts.push_back(c.occupancy);
  const auto entropy = allocation_entropy(counts);
  const auto controversy = controversy_ranking(summary);
  const auto ranking = difficulty_ranking(summary);

  SummaryFiles files;
  if (summary.warning) files.warnings.push_back(*summary.warning);
  if (controversy.warning) files.warnings.push_back(*controversy.warning);
  auto put = [&](const char* name, const std::string& content) {
    const auto path = out_dir / name;
    write_text_atomic(path, content);
    files.written.push_back(path);
  };
  put("cultures.csv", cultures_csv(summary));
  put("consensus.csv", consensus_csv(summary));
  put("difficulty.csv", difficulty_csv(summary));
  put("consensus_plot.csv", consensus_plot_csv(summary));
  put("difficulty_plot.csv", difficulty_plot_csv(summary));
  put("entropy.csv", entropy_csv(entropy, summary.cultures.size()));
  put("controversy.csv", controversy_csv(controversy));
  put("difficulty_ranking.csv", difficulty_ranking_csv(ranking));
  put("modal_assignment.csv", modal_assignment_csv(modal, chain.respondent_ids));
  return files;
}

}  // namespace icct::io
