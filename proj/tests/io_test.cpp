#include <cstdlib>
#include <functional>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "icct/errors.hpp"
#include "icct/io/csv.hpp"
#include "icct/io/json_io.hpp"
#include "icct/io/reports.hpp"
#include "icct/links.hpp"
#include "icct/simulate.hpp"
#include "support.hpp"

using namespace icct;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("icct_io_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

// Compares against tests/golden/<name>; ICCT_UPDATE_GOLDEN=1 rewrites it.
void check_golden(const std::string& name, const std::string& actual) {
  const auto path = fs::path(ICCT_GOLDEN_DIR) / name;
  if (std::getenv("ICCT_UPDATE_GOLDEN")) {
    fs::create_directories(path.parent_path());
    io::write_text_atomic(path, actual);
  }
  REQUIRE_MESSAGE(fs::exists(path), "missing golden file " << path.string());
  CHECK_MESSAGE(io::read_text(path) == actual, "golden mismatch: " << name);
}

// Small hand-built chain: 3 respondents, 2 items, J = 3, two samples with
// the cultures swapped in the second.
PosteriorChain handmade_chain() {
  PosteriorChain ch;
  ch.config.truncation = 3;
  ch.config.iterations = 30;
  ch.config.burn_in = 10;
  ch.config.thin = 10;
  ch.config.seed = 42;
  ch.seed = 42;
  ch.respondent_ids = {"alice", "bob", "carol"};
  ch.item_ids = {"q1", "q2"};
  ModelState s;
  s.cultures = {{{1.5, -0.5}, {0.25, -0.25}}, {{-2.0, 0.75}, {-0.125, 0.125}}, {{0.0, 0.0}, {0.0, 0.0}}};
  s.respondents = {{0.1, 0.0, -0.05}, {-0.2, 0.1, 0.0}, {0.0, -0.1, 0.05}};
  s.mixture.sticks = {0.5, 0.75, 1.0};
  s.mixture.weights = stick_breaking(s.mixture.sticks);
  s.mixture.assignments = {0, 0, 1};
  s.mixture.concentration = 1.0;
  ch.samples.push_back(s);
  std::swap(s.cultures[0], s.cultures[1]);
  s.mixture.assignments = {1, 1, 0};
  s.mixture.sticks = sticks_from_weights(std::vector<double>{s.mixture.weights[1], s.mixture.weights[0], s.mixture.weights[2]});
  s.mixture.weights = stick_breaking(s.mixture.sticks);
  ch.samples.push_back(s);
  ch.log_likelihood_trace = {-7.25, -6.5};
  return ch;
}

}  // namespace

TEST_CASE("rescaling rules") {
  const Rescaling mid;
  CHECK(io::rescale_rating(1, 4, mid) == 0.125);
  CHECK(io::rescale_rating(2, 4, mid) == 0.375);
  CHECK(io::rescale_rating(4, 4, mid) == 0.875);
  CHECK(logit(io::rescale_rating(4, 4, mid)) == Approx(-logit(io::rescale_rating(1, 4, mid))).epsilon(1e-15));
  const Rescaling aff{RescaleRule::affine, 0.1};
  CHECK(io::rescale_rating(1, 5, aff) == Approx(0.1));
  CHECK(io::rescale_rating(5, 5, aff) == Approx(0.9));
  for (int R = 2; R <= 9; ++R)
    for (int r = 1; r < R; ++r) {
      CHECK(io::rescale_rating(r, R, mid) < io::rescale_rating(r + 1, R, mid));
      CHECK(io::rescale_rating(r, R, aff) < io::rescale_rating(r + 1, R, aff));
      CHECK(io::rescale_rating(r, R, mid) + io::rescale_rating(R + 1 - r, R, mid) == Approx(1.0));
    }
  CHECK_THROWS_AS(io::rescale_rating(5, 4, mid), ValidationError);
  CHECK_THROWS_AS(io::rescale_rating(0, 4, mid), ValidationError);
}

TEST_CASE("survey csv: missing cells, errors name the location") {
  const auto t = io::parse_survey_csv("id,q1,q2\nr1,1,\nr2,4,3\n", 4);
  const auto m = io::rescale(t);
  CHECK(m.mask() == std::vector<bool>{true, false, true, true});
  CHECK(m.value(1, 0) == 0.875);
  CHECK(m.item_ids() == std::vector<std::string>{"q1", "q2"});

  const auto bad = error_of([] { io::parse_survey_csv("id,q1,q2\nr1,1,2\nr2,5,3\n", 4, "survey.csv"); });
  CHECK(bad.find("survey.csv line 3, column 2") != std::string::npos);
  CHECK(bad.find("\"r2\"") != std::string::npos);
  CHECK(bad.find("\"q1\"") != std::string::npos);
  CHECK(bad.find("\"5\"") != std::string::npos);

  CHECK(error_of([] { io::parse_survey_csv("id,q1\nr1,2.5\nr2,1\n", 4); }).find("\"2.5\"") != std::string::npos);
  CHECK(error_of([] { io::parse_survey_csv("id,q1,q1\nr1,1,1\nr2,1,1\n", 4); }).find("duplicate item") != std::string::npos);
  CHECK(error_of([] { io::parse_survey_csv("id,q1\nr1,1\nr1,2\n", 4); }).find("duplicate respondent") != std::string::npos);
  CHECK(error_of([] { io::parse_survey_csv("id,q1,q2\nr1,1\nr2,1,2\n", 4); }).find("line 2") != std::string::npos);
  CHECK(error_of([] { io::parse_csv("a,\"b\nc,d\n"); }).find("unterminated") != std::string::npos);
  CHECK(error_of([] { io::parse_csv("a,b\"c\n"); }).find("line 1, column 2") != std::string::npos);
  // An item nobody answered cannot be rescaled.
  CHECK_THROWS_AS(io::rescale(io::parse_survey_csv("id,q1,q2\nr1,1,\nr2,2,\n", 4)), ValidationError);
}

TEST_CASE("csv parser: quotes, CRLF, blank lines") {
  const auto recs = io::parse_csv("id,\"q, one\",\"say \"\"hi\"\"\"\r\n\r\nr1,1,2\r\n");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].fields[1] == "q, one");
  CHECK(recs[0].fields[2] == "say \"hi\"");
  CHECK(recs[1].line == 3);
  CHECK(io::csv_escape("plain") == "plain");
  CHECK(io::csv_escape("a,b") == "\"a,b\"");
  CHECK(io::csv_escape("x\"y") == "\"x\"\"y\"");
}

TEST_CASE("survey and unit csv round trips") {
  auto cfg = benchmark_config(Benchmark::three_cultures, 9);
  cfg.missing_rate = 0.1;
  const auto sim = simulate(cfg);

  const auto unit_text = io::format_unit_csv(sim.data);
  const auto back = io::parse_unit_csv(unit_text);
  CHECK(back == sim.data);
  CHECK(io::format_unit_csv(back) == unit_text);
  CHECK(unit_text.find('\r') == std::string::npos);
  CHECK(unit_text.find('e') == unit_text.find("espondent"));

  const auto table = io::discretize(sim.data, 4);
  const auto text = io::format_survey_csv(table);
  const auto reread = io::parse_survey_csv(text, 4);
  CHECK(reread == table);
  CHECK(io::format_survey_csv(reread) == text);
  CHECK(io::rescale(reread).mask() == sim.data.mask());

  const auto dir = scratch("roundtrip");
  io::write_text_atomic(dir / "unit.csv", unit_text);
  StudyConfig sc;
  sc.input_scale = InputScale::unit;
  CHECK(io::load_response_matrix(dir / "unit.csv", sc) == sim.data);
}

TEST_CASE("number formatting is fixed-notation and round-trips") {
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(-2.5) == "-2.5");
  CHECK(io::format_number(3.0) == "3");
  CHECK(io::format_number(1e-7) == "0.0000001");
  Rng rng(1);
  for (int n = 0; n < 2000; ++n) {
    const double x = rng.normal(0, 1) * std::pow(10.0, rng.normal(0, 4));
    const auto s = io::format_number(x);
    CHECK(s.find_first_of("eE") == std::string::npos);
    CHECK(std::stod(s) == x);
  }
}

TEST_CASE("study config json") {
  const StudyConfig defaults;
  CHECK(io::study_config_from_json(io::to_json(defaults)) == defaults);
  StudyConfig c;
  c.truncation = 7;
  c.priors.concentration = ConcentrationPrior::gamma(2, 1);
  c.rescaling = {RescaleRule::affine, 0.02};
  c.input_scale = InputScale::unit;
  c.initialization.strategy = InitStrategy::single;
  c.seed = 18446744073709551615ull;
  CHECK(io::study_config_from_json(io::to_json(c)) == c);
  CHECK(io::study_config_from_json(io::Json::object()) == defaults);

  CHECK_THROWS_AS(io::study_config_from_json(io::Json{{"iterationz", 10}}), ValidationError);
  CHECK_THROWS_AS(io::study_config_from_json(io::Json{{"iterations", "many"}}), ValidationError);
  CHECK_THROWS_AS(io::study_config_from_json(io::Json{{"iterations", 100}, {"burn_in", 100}}), ValidationError);
  CHECK_THROWS_AS(io::study_config_from_json(io::Json{{"priors", {{"truth_sd", -1}}}}), ValidationError);
  CHECK_THROWS_AS(io::study_config_from_json(io::Json{{"thin", 0}}), ValidationError);
  check_golden("study_config_default.json", io::dump(io::to_json(defaults)));
}

TEST_CASE("simulation request json") {
  const auto req = io::sim_request_from_json(io::Json{{"benchmark", "one_culture"}, {"seed", 3}});
  CHECK(req.config.respondents == 100);
  CHECK(req.config.items == 20);
  CHECK(req.ordinal_levels == 4);
  const auto custom = io::sim_request_from_json(io::Json::parse(R"({
    "respondents": 10, "items": 3, "weights": [0.5, 0.5], "seed": 4, "ordinal_levels": 0,
    "cultures": [{"truths": [1, 2, 3], "log_difficulties": [0, 0, 0]},
                 {"truths": [-1, -2, -3], "log_difficulties": [0.5, -0.5, 0]}]})"));
  CHECK(custom.config.cultures.size() == 2);
  CHECK(custom.ordinal_levels == 0);
  CHECK_THROWS_AS(io::sim_request_from_json(io::Json{{"benchmark", "five_cultures"}}), ValidationError);
  CHECK_THROWS_AS(io::sim_request_from_json(io::Json{{"benchmark", "one_culture"}, {"colour", 1}}), ValidationError);
}

TEST_CASE("chain container round trip and golden file") {
  const auto ch = handmade_chain();
  const auto j = io::chain_to_json(ch);
  CHECK(j["format"] == "icct-chain");
  CHECK(j["samples"][0]["assignments"] == io::Json::array({1, 1, 2}));
  CHECK(io::chain_from_json(j) == ch);
  const auto text = io::dump(j, false);
  CHECK(io::dump(io::Json::parse(text), false) == text);
  check_golden("chain_small.json", text);

  auto broken = j;
  broken["samples"][0]["log_difficulties"][0][0] = 0.5;
  CHECK_THROWS_AS(io::chain_from_json(broken), ValidationError);
  broken = j;
  broken["version"] = 99;
  CHECK_THROWS_AS(io::chain_from_json(broken), ValidationError);
  broken = j;
  broken["log_likelihood_trace"] = io::Json::array({1.0});
  CHECK_THROWS_AS(io::chain_from_json(broken), ValidationError);
  broken = j;
  broken["samples"][1]["assignments"][2] = 0;
  CHECK_THROWS_AS(io::chain_from_json(broken), ValidationError);
}

TEST_CASE("summary tables match golden files") {
  const auto dir = scratch("summaries");
  const auto files = io::write_summaries(handmade_chain(), 100, dir);
  CHECK(files.written.size() == 9);
  CHECK_FALSE(files.warnings.empty());  // window longer than the chain
  for (const auto& p : files.written) {
    const auto text = io::read_text(p);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.back() == '\n');
    check_golden("summaries/" + p.filename().string(), text);
  }
}

TEST_CASE("atomic writes") {
  const auto dir = scratch("atomic");
  const auto path = dir / "out.txt";
  io::write_text_atomic(path, "first\n");
  io::write_text_atomic(path, "second\n");
  CHECK(io::read_text(path) == "second\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  CHECK_THROWS(io::write_text_atomic(dir / "missing" / "x.txt", "x"));
  CHECK_THROWS_AS(io::read_text(dir / "nope.txt"), ValidationError);
}

TEST_CASE("covariate files") {
  const auto dir = scratch("cov");
  io::write_text_atomic(dir / "cov.csv", "respondent_id,region\nr1,north\nr2,south\n");
  const auto cov = io::load_covariates(dir / "cov.csv");
  REQUIRE(cov.size() == 2);
  CHECK(cov[1] == std::pair<std::string, std::string>{"r2", "south"});
  io::write_text_atomic(dir / "dup.csv", "id,level\nr1,a\nr1,b\n");
  CHECK_THROWS_AS(io::load_covariates(dir / "dup.csv"), ValidationError);
}
