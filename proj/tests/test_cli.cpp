#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "mcf/inequality_verifier.hpp"
#include "mcf/io.hpp"

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = mcf::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

int shell_exit(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ConstantsText) {
  const CliRun r = cli({"constants", "--n", "8", "--m", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("c=1/6"), std::string::npos);
  EXPECT_NE(r.out.find("d=0 (flat)"), std::string::npos);
}

TEST(Cli, ConstantsJsonBounded) {
  const CliRun r = cli({"constants", "--n", "8", "--m", "2", "--K1", "1", "--K2", "1", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["c"], "1/6");
  EXPECT_NEAR(std::stod(j["d"].get<std::string>()), 31.458333333333333, 1e-12);
  EXPECT_EQ(j["d_rule"], "bounded_background");
}

TEST(Cli, ConstantsCodimRegimeAndSpaceForm) {
  const CliRun r = cli({"constants", "--n", "5", "--regime", "codim", "--Kbar", "-1", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["c"], "9/35");
  EXPECT_NEAR(std::stod(j["d"].get<std::string>()), 10.0 - 70.0 / 9.0, 1e-12);
}

TEST(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"constants"}).code, 2);
  EXPECT_EQ(cli({"constants", "--n", "4"}).code, 2);
  EXPECT_EQ(cli({"constants", "--n", "8", "--K1", "1", "--Kbar", "-1"}).code, 2);
  EXPECT_EQ(cli({"verify", "--suite", "bogus"}).code, 2);
  EXPECT_EQ(cli({"simulate", "--family", "sphere", "--params", "n=8", "--t-end", "0.1"}).code, 2);
  EXPECT_EQ(cli({"simulate", "--family", "sphere", "--params", "n=8,r=x", "--t-end", "0.1"}).code, 2);
  EXPECT_EQ(cli({"rescale", "--in", "does-not-exist.csv", "--base-row", "0"}).code, 2);
}

TEST(Cli, HelpExitsWithZero) { EXPECT_EQ(cli({"--help"}).code, 0); }

TEST(Cli, VerifyIsDeterministicForAFixedSeed) {
  const std::vector<std::string> args = {"verify", "--suite", "all", "--trials", "40", "--seed", "42", "--n", "8", "--m", "2"};
  const CliRun a = cli(args), b = cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j.size(), mcf::suite("all").size());
  for (const auto& r : j) {
    EXPECT_EQ(r["violations"], 0) << r["lemma_id"];
    EXPECT_EQ(r["seed"], 42u);
  }
}

TEST(Cli, VerifySeedFallsBackToTheEnvironment) {
  setenv("MCF_SEED", "7", 1);
  const CliRun a = cli({"verify", "--suite", "li", "--trials", "10", "--n", "3", "--m", "2"});
  unsetenv("MCF_SEED");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(nlohmann::json::parse(a.out)[0]["seed"], 7u);
  const CliRun b = cli({"verify", "--suite", "li", "--trials", "10", "--seed", "7", "--n", "3", "--m", "2"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, VerifySmallDimensionUsesTheCodimRegime) {
  const CliRun r = cli({"verify", "--suite", "gradient", "--trials", "30", "--seed", "1", "--n", "5", "--m", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
}

TEST(Cli, ViolationWritesAReplayableCounterexample) {
  // A negative tolerance turns ordinary slack into a reported violation.
  const CliRun r = cli({"verify", "--suite", "li", "--trials", "50", "--seed", "4", "--n", "3", "--m", "2", "--rel-tol",
                     "-0.5", "--counterexample-prefix", "cli_cex"});
  EXPECT_EQ(r.code, 1);
  const std::string path = "cli_cex_li_commutator.json";
  std::ifstream in(path);
  ASSERT_TRUE(in.good());
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["lemma_id"], "li_commutator");
  EXPECT_TRUE(mcf::replay(j).violated(-0.5));
  std::filesystem::remove(path);
}

TEST(Cli, SimulateFirstRow) {
  const CliRun r = cli({"simulate", "--family", "product", "--params", "p=7,q=1,a=1,b=4", "--dt", "1e-4", "--t-end",
                     "0.001", "--c", "0.16666666666666666", "--d", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const auto rows = mcf::read_csv(in);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_NEAR(rows[0].Aminus2, 0.07133757961783438, 1e-13);
  EXPECT_NEAR(rows[0].ratio_pinch, 0.14394904458598726, 1e-14);
}

TEST(Cli, SimulateThenRescaleRoundTrip) {
  const std::string csv = "cli_roundtrip.csv", out = "cli_roundtrip_rescaled.csv";
  ASSERT_EQ(cli({"simulate", "--family", "hyperbolic", "--params", "n=8,m=2,r=0.5,K=-1", "--dt", "1e-5", "--t-end",
                 "0.01", "--every", "10", "--out", csv})
                .code,
            0);
  const CliRun r = cli({"rescale", "--in", csv, "--base-row", "5", "--d", "4", "--Kbar", "-1", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(out);
  const auto rows = mcf::read_csv(in);
  ASSERT_GT(rows.size(), 5u);
  std::ifstream again(out);
  std::string line;
  std::getline(again, line);
  for (int i = 0; i <= 5; ++i) std::getline(again, line);
  std::stringstream ss(line);
  std::string cell;
  std::vector<std::string> cells;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  ASSERT_EQ(cells.size(), 15u);
  EXPECT_NEAR(std::stod(cells[13]), 1.0, 1e-12);
  EXPECT_LT(std::stod(cells[14]), 0.0);
  std::filesystem::remove(csv);
  std::filesystem::remove(out);
}

TEST(Cli, BinaryExitCodes) {
  const std::string bin = MCF_CLI_PATH;
  EXPECT_EQ(shell_exit(bin + " constants --n 8 > /dev/null"), 0);
  EXPECT_EQ(shell_exit(bin + " constants --n 3 > /dev/null 2>&1"), 2);
  EXPECT_EQ(shell_exit(bin + " bogus > /dev/null 2>&1"), 2);
  EXPECT_EQ(shell_exit(bin + " verify --suite li --trials 20 --seed 3 --n 4 --m 3 > /dev/null"), 0);
}

}  // namespace
