#include "icct/cli.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>

#include "CLI11.hpp"

#include "icct/analysis.hpp"
#include "icct/errors.hpp"
#include "icct/io/csv.hpp"
#include "icct/io/json_io.hpp"
#include "icct/io/reports.hpp"
#include "icct/relabel.hpp"

namespace icct {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string data;
  std::string chain;
  std::string covariates;
  std::string out;
  std::string benchmark = "three_cultures";
  std::string sim_config;
  std::optional<std::uint64_t> seed;
  std::size_t window = 100;
};

StudyConfig load_study_config(const Options& o) {
  StudyConfig config;
  if (!o.config.empty()) config = io::study_config_from_json(io::parse_json_file(o.config));
  if (o.seed) config.seed = *o.seed;
  validate(config);
  return config;
}

io::SimRequest load_sim_request(const std::string& path, const std::string& benchmark, std::optional<std::uint64_t> seed) {
  io::Json j;
  if (path.empty()) {
    j = io::Json{{"benchmark", benchmark}, {"seed", seed.value_or(1)}};
  } else {
    j = io::parse_json_file(path);
    if (seed) j["seed"] = *seed;
  }
  return io::sim_request_from_json(j);
}

void run_simulate(const Options& o, std::ostream& out) {
  const auto req = load_sim_request(o.config, "three_cultures", o.seed);
  const auto sim = simulate(req.config);
  fs::create_directories(o.out);
  const auto data_path = fs::path(o.out) / "data.csv";
  if (req.ordinal_levels > 0) {
    io::write_text_atomic(data_path, io::format_survey_csv(io::discretize(sim.data, req.ordinal_levels)));
  } else {
    io::write_text_atomic(data_path, io::format_unit_csv(sim.data));
  }
  io::write_text_atomic(fs::path(o.out) / "ground_truth.json", io::dump(io::to_json(sim.truth)));
  out << "wrote " << data_path.string() << " (" << sim.data.respondents() << " respondents, " << sim.data.items()
      << " items, " << (req.ordinal_levels > 0 ? "ordinal" : "unit") << " scale)\n";
}

void run_fit(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = load_study_config(o);
  const auto data = io::load_response_matrix(o.data, config);
  const auto result = fit(data, config);
  fs::create_directories(o.out);
  io::write_chain(result.chain, fs::path(o.out) / "chain.json");
  io::write_text_atomic(fs::path(o.out) / "fit_report.json", io::dump(io::to_json(result.report)));
  for (const auto& w : result.report.warnings) err << "warning: " << w << "\n";
  out << "retained " << result.chain.samples.size() << " samples; modal occupied cultures "
      << modal_count(result.report.occupied_culture_count_trace) << "\n";
}

void run_summarize(const Options& o, std::ostream& out, std::ostream& err) {
  const auto chain = io::read_chain(o.chain);
  const auto files = io::write_summaries(chain, o.window, o.out);
  for (const auto& w : files.warnings) err << "warning: " << w << "\n";
  for (const auto& p : files.written) out << "wrote " << p.string() << "\n";
}

void run_crosstab(const Options& o, std::ostream& out, std::ostream& err) {
  const auto chain = relabel(io::read_chain(o.chain));
  const auto modal = modal_assignment(chain, o.window);
  if (modal.warning) err << "warning: " << *modal.warning << "\n";
  std::map<std::string, std::string> level_of;
  for (auto& [id, level] : io::load_covariates(o.covariates)) level_of[id] = level;
  std::vector<std::string> levels;
  for (const auto& id : chain.respondent_ids) {
    const auto it = level_of.find(id);
    if (it == level_of.end()) throw ValidationError("covariates: no value for respondent \"" + id + "\"");
    levels.push_back(it->second);
  }
  const auto table = covariate_crosstab(modal.labels, levels);
  fs::create_directories(o.out);
  const auto path = fs::path(o.out) / "crosstab.csv";
  io::write_text_atomic(path, io::crosstab_csv(table));
  out << "wrote " << path.string() << "\n";
}

void run_recover(const Options& o, std::ostream& out, std::ostream& err) {
  const auto req = load_sim_request(o.sim_config, o.benchmark, o.seed);
  const auto config = load_study_config(o);
  const auto sim = simulate(req.config);
  const auto result = fit(sim.data, config);
  for (const auto& w : result.report.warnings) err << "warning: " << w << "\n";
  const auto score = score_recovery(sim.truth, result, o.window);
  out << "culture_count_hit: " << (score.count_hit ? "yes" : "no") << " (modal " << score.modal_occupied << ", true "
      << score.true_cultures << ")\n";
  out << "ari: " << io::format_number(score.ari) << "\n";
  out << "consensus_rmse: " << io::format_number(score.max_consensus_rmse) << "\n";
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    io::write_chain(result.chain, fs::path(o.out) / "chain.json");
    io::write_text_atomic(fs::path(o.out) / "ground_truth.json", io::dump(io::to_json(sim.truth)));
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Infinite cultural consensus analysis of survey responses", "icct"};
  app.require_subcommand(1);
  Options o;

  auto* simulate_cmd = app.add_subcommand("simulate", "Draw a synthetic study (data CSV + ground truth JSON)");
  simulate_cmd->add_option("--config", o.config, "Simulation config JSON (default: three-culture benchmark)");
  simulate_cmd->add_option("--seed", o.seed, "Seed (overrides the config)");
  simulate_cmd->add_option("--out", o.out, "Output directory")->required();

  auto* fit_cmd = app.add_subcommand("fit", "Run the sampler (chain file + fit report)");
  fit_cmd->add_option("--data", o.data, "Survey CSV")->required();
  fit_cmd->add_option("--config", o.config, "Study config JSON");
  fit_cmd->add_option("--seed", o.seed, "Seed (overrides the config)");
  fit_cmd->add_option("--out", o.out, "Output directory")->required();

  auto* summarize_cmd = app.add_subcommand("summarize", "Consensus, difficulty, entropy and controversy tables");
  summarize_cmd->add_option("--chain", o.chain, "Chain file")->required();
  summarize_cmd->add_option("--window", o.window, "Trailing samples used for summaries")->check(CLI::PositiveNumber);
  summarize_cmd->add_option("--out", o.out, "Output directory")->required();

  auto* crosstab_cmd = app.add_subcommand("crosstab", "Modal culture by covariate level counts");
  crosstab_cmd->add_option("--chain", o.chain, "Chain file")->required();
  crosstab_cmd->add_option("--covariates", o.covariates, "CSV: respondent id, level")->required();
  crosstab_cmd->add_option("--window", o.window, "Trailing samples used for the modal assignment")
      ->check(CLI::PositiveNumber);
  crosstab_cmd->add_option("--out", o.out, "Output directory")->required();

  auto* recover_cmd = app.add_subcommand("recover", "Simulate, fit and score recovery against ground truth");
  recover_cmd->add_option("--benchmark", o.benchmark, "one_culture | three_cultures")
      ->check(CLI::IsMember({"one_culture", "three_cultures"}));
  recover_cmd->add_option("--sim-config", o.sim_config, "Simulation config JSON (instead of a benchmark)");
  recover_cmd->add_option("--config", o.config, "Study config JSON");
  recover_cmd->add_option("--seed", o.seed, "Seed for both simulation and fit");
  recover_cmd->add_option("--window", o.window, "Trailing samples used for summaries")->check(CLI::PositiveNumber);
  recover_cmd->add_option("--out", o.out, "Optional output directory for chain and ground truth");

  std::vector<std::string> argv_storage{"icct"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate_cmd->parsed()) run_simulate(o, out);
    if (fit_cmd->parsed()) run_fit(o, out, err);
    if (summarize_cmd->parsed()) run_summarize(o, out, err);
    if (crosstab_cmd->parsed()) run_crosstab(o, out, err);
    if (recover_cmd->parsed()) run_recover(o, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace icct
