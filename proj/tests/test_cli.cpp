#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mmsg/csv.hpp"

#ifndef MMSG_CLI_PATH
#error "MMSG_CLI_PATH must be defined"
#endif

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MMSG_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (status < 0) return -1;
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json slurp_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("cli simulate writes the instance files deterministically") {
  std::filesystem::remove_all("cli_out/sim1");
  std::filesystem::remove_all("cli_out/sim2");
  const std::string config = "--n 12 --p 6 --K 2 --delta 9 --n-pure 4 --seed 5";
  REQUIRE(run_cli("simulate --out cli_out/sim1 " + config) == 0);
  REQUIRE(run_cli("simulate --out cli_out/sim2 " + config) == 0);
  for (const char* name : {"x.csv", "theta.csv", "pi.csv", "manifest.json"}) {
    CHECK(std::filesystem::exists("cli_out/sim1/" + std::string(name)));
    CHECK(slurp("cli_out/sim1/" + std::string(name)) == slurp("cli_out/sim2/" + std::string(name)));
  }
  nlohmann::json manifest = slurp_json("cli_out/sim1/manifest.json");
  CHECK(manifest.at("n") == 12);
  CHECK(manifest.at("delta") == 9.0);
  CHECK(manifest.at("seed") == 5);
}

TEST_CASE("cli simulate surfaces invalid configuration") {
  CHECK(run_cli("simulate --out cli_out/bad --n 5 --p 4 --K 2 --delta 5 --n-pure 1") == 2);
}

TEST_CASE("cli estimate round trip reports a small error on easy data") {
  std::filesystem::remove_all("cli_out/est");
  REQUIRE(run_cli("simulate --out cli_out/est_model --n 60 --p 20 --K 2 --c-delta 10 "
                  "--pure-frac 0.4 --seed 9") == 0);
  REQUIRE(run_cli("estimate --model cli_out/est_model --out cli_out/est --method both") == 0);
  CHECK(std::filesystem::exists("cli_out/est/pi_hat_spg.csv"));
  CHECK(std::filesystem::exists("cli_out/est/pi_hat_wsc.csv"));
  nlohmann::json manifest = slurp_json("cli_out/est/estimate_manifest.json");
  CHECK(manifest.at("spg").at("aligned_l1_error").get<double>() < 0.1);
  CHECK(manifest.at("spg").at("vertex_indices").size() == 2);
  for (const auto& idx : manifest.at("spg").at("vertex_indices")) {
    CHECK(idx.get<int>() >= 1);   // 1-based in human-facing output
    CHECK(idx.get<int>() <= 60);
  }

  // Estimated memberships are row-stochastic in the written file.
  mmsg::Matrix pihat = mmsg::read_matrix_csv("cli_out/est/pi_hat_spg.csv");
  for (mmsg::Index i = 0; i < pihat.rows(); ++i)
    CHECK(pihat.row(i).sum() == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("cli estimate rejects oversized K") {
  REQUIRE(run_cli("simulate --out cli_out/small --n 8 --p 4 --K 2 --delta 8 --n-pure 2") == 0);
  CHECK(run_cli("estimate --model cli_out/small --out cli_out/small_est --K 7") == 2);
}

TEST_CASE("cli estimate propagates io failures") {
  CHECK(run_cli("estimate --x cli_out/nope.csv --K 2 --out cli_out/none") == 3);
}

TEST_CASE("cli diagnose emits the report with structural bounds") {
  REQUIRE(run_cli("simulate --out cli_out/diag_model --n 40 --p 12 --K 3 --c-delta 10 "
                  "--pure-frac 0.4 --seed 11") == 0);
  REQUIRE(run_cli("diagnose --model cli_out/diag_model --out cli_out/diag.json") == 0);
  nlohmann::json report = slurp_json("cli_out/diag.json");
  CHECK(report.at("bounds").at("sigmaK_p_lower").get<bool>());
  CHECK(report.at("bounds").at("kappa_p_upper").get<bool>());
  CHECK(report.at("bounds").at("mu1_upper").get<bool>());
  CHECK(report.at("condition_ratios").size() == 9);
  CHECK(report.at("kappa_theta").get<double>() >= 1.0);
}

TEST_CASE("cli experiment custom config emits csv and svg") {
  std::filesystem::remove_all("cli_out/exp");
  nlohmann::json config = {
      {"experiment_id", "custom"},
      {"replicates", 2},
      {"base_seed", 31},
      {"methods", {"spg"}},
      {"grid",
       {{{"n", 30}, {"p", 12}, {"K", 2}, {"pure_fraction", 0.4}, {"c_delta", 10.0},
         {"scenario", "ghe"}, {"sweep", "n"}, {"sweep_value", 30}}}}};
  std::filesystem::create_directories("cli_out");
  std::ofstream("cli_out/exp_config.json") << config.dump();
  REQUIRE(run_cli("experiment --config cli_out/exp_config.json --out cli_out/exp") == 0);
  CHECK(std::filesystem::exists("cli_out/exp/custom.csv"));
  CHECK(std::filesystem::exists("cli_out/exp/custom.svg"));

  REQUIRE(run_cli("experiment --config cli_out/exp_config.json --out cli_out/exp2") == 0);
  CHECK(slurp("cli_out/exp/custom.csv") == slurp("cli_out/exp2/custom.csv"));
  CHECK(slurp("cli_out/exp/custom.svg") == slurp("cli_out/exp2/custom.svg"));
}

TEST_CASE("cli realdata runs when a dataset file is supplied") {
  const char* dir = std::getenv("MMSG_DATA_DIR");
  const std::string iris = dir ? std::string(dir) + "/iris.csv" : "data/iris.csv";
  if (!std::filesystem::exists(iris)) {
    SUCCEED("iris.csv not supplied; realdata CLI exercised in the acceptance suite");
    return;
  }
  REQUIRE(run_cli("realdata --dataset iris --data " + iris + " --out cli_out/iris") == 0);
  nlohmann::json stats = slurp_json("cli_out/iris/iris_stats.json");
  CHECK(stats.at("n") == 150);
  CHECK(std::filesystem::exists("cli_out/iris/iris_ternary.csv"));
  CHECK(std::filesystem::exists("cli_out/iris/iris_ternary.svg"));
}
