#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "icct/cli.hpp"
#include "icct/io/csv.hpp"

using namespace icct;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("icct_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("simulate, fit, summarize and crosstab on defaults") {
  const auto dir = scratch("smoke");
  const auto sim = (dir / "sim").string(), fitdir = (dir / "fit").string(), sum = (dir / "sum").string();
  REQUIRE(cli({"simulate", "--out", sim}).code == 0);
  CHECK(fs::exists(dir / "sim" / "data.csv"));
  CHECK(fs::exists(dir / "sim" / "ground_truth.json"));

  const auto f = cli({"fit", "--data", sim + "/data.csv", "--out", fitdir});
  REQUIRE_MESSAGE(f.code == 0, f.err);
  CHECK(fs::exists(dir / "fit" / "chain.json"));
  CHECK(fs::exists(dir / "fit" / "fit_report.json"));

  const auto s = cli({"summarize", "--chain", fitdir + "/chain.json", "--out", sum});
  REQUIRE_MESSAGE(s.code == 0, s.err);
  for (const char* name : {"cultures.csv", "consensus.csv", "difficulty.csv", "consensus_plot.csv",
                           "difficulty_plot.csv", "entropy.csv", "controversy.csv", "difficulty_ranking.csv",
                           "modal_assignment.csv"})
    CHECK_MESSAGE(fs::exists(dir / "sum" / name), name);

  std::string cov = "respondent_id,group\n";
  for (int i = 1; i <= 200; ++i) cov += "r" + std::to_string(i) + "," + (i % 3 ? "a" : "b") + "\n";
  io::write_text_atomic(dir / "cov.csv", cov);
  const auto x = cli({"crosstab", "--chain", fitdir + "/chain.json", "--covariates", (dir / "cov.csv").string(),
                      "--window", "50", "--out", sum});
  REQUIRE_MESSAGE(x.code == 0, x.err);
  const auto table = io::read_text(dir / "sum" / "crosstab.csv");
  CHECK(table.rfind("culture_id,a,b,total\n", 0) == 0);
  CHECK(table.find("total,134,66,200\n") != std::string::npos);

  io::write_text_atomic(dir / "short_cov.csv", "id,group\nr1,a\n");
  CHECK(cli({"crosstab", "--chain", fitdir + "/chain.json", "--covariates", (dir / "short_cov.csv").string(),
             "--out", sum})
            .code == 1);
}

TEST_CASE("fit is byte-identical for a seed and differs across seeds") {
  const auto dir = scratch("determinism");
  const auto d = (dir / "sim").string();
  REQUIRE(cli({"simulate", "--seed", "5", "--out", d}).code == 0);
  io::write_text_atomic(dir / "short.json", R"({"iterations": 300, "burn_in": 100, "thin": 5})");
  const auto cfg = (dir / "short.json").string();
  for (const char* out : {"a", "b"})
    REQUIRE(cli({"fit", "--data", d + "/data.csv", "--config", cfg, "--seed", "11", "--out", (dir / out).string()}).code == 0);
  REQUIRE(cli({"fit", "--data", d + "/data.csv", "--config", cfg, "--seed", "12", "--out", (dir / "c").string()}).code == 0);
  const auto a = io::read_text(dir / "a" / "chain.json");
  CHECK(a == io::read_text(dir / "b" / "chain.json"));
  CHECK(a != io::read_text(dir / "c" / "chain.json"));
  CHECK(io::read_text(dir / "a" / "fit_report.json") == io::read_text(dir / "b" / "fit_report.json"));
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({}).code == 1);
  CHECK(cli({"fit", "--data", "x.csv", "--out", "y", "--bogus"}).code == 1);
  CHECK(cli({"fit", "--out", "y"}).code == 1);
  CHECK(cli({"dance"}).code == 1);
  CHECK(cli({"summarize", "--chain", "c.json", "--window", "0", "--out", "y"}).code == 1);

  io::write_text_atomic(dir / "bad.csv", "id,q1,q2\nr1,1,2\nr2,7,1\n");
  const auto bad = cli({"fit", "--data", (dir / "bad.csv").string(), "--out", (dir / "o").string()});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("line 3, column 2") != std::string::npos);
  CHECK(cli({"fit", "--data", (dir / "missing.csv").string(), "--out", (dir / "o").string()}).code == 1);

  io::write_text_atomic(dir / "cfg.json", R"({"iterations": 10, "burn_in": 20})");
  CHECK(cli({"simulate", "--out", (dir / "s").string()}).code == 0);
  CHECK(cli({"fit", "--data", (dir / "s" / "data.csv").string(), "--config", (dir / "cfg.json").string(), "--out",
             (dir / "o").string()})
            .code == 1);
  io::write_text_atomic(dir / "notjson.json", "{ nope");
  CHECK(cli({"simulate", "--config", (dir / "notjson.json").string(), "--out", (dir / "s2").string()}).code == 1);

  // Output directory blocked by a regular file: runtime failure.
  io::write_text_atomic(dir / "blocker", "x");
  CHECK(cli({"simulate", "--out", (dir / "blocker").string()}).code == 2);
  io::write_text_atomic(dir / "chain.json", R"({"format": "something-else"})");
  CHECK(cli({"summarize", "--chain", (dir / "chain.json").string(), "--out", (dir / "o").string()}).code == 1);
}

TEST_CASE("recover prints count hit, ARI and consensus RMSE") {
  const auto r = cli({"recover", "--benchmark", "three_cultures", "--seed", "3"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(r.out.find("culture_count_hit: yes") != std::string::npos);
  const auto pos = r.out.find("ari: ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 5)) >= 0.9);
  CHECK(r.out.find("consensus_rmse: ") != std::string::npos);
}
