#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tractlab/cli.hpp"
#include "tractlab/config.hpp"
#include "tractlab/oracle.hpp"

using namespace tractlab;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = fs::path(TRACTLAB_SOURCE_DIR) / "tests" / "golden";

struct Golden {
  const char* config;
  const char* command;
  int exit_code;
};

// Set TRACTLAB_REGEN_GOLDEN=1 to rewrite the expected outputs.
const Golden kCases[] = {
    {"korobov_complexity", "complexity", 0}, {"weighted_complexity", "complexity", 0},
    {"korobov_wt", "classify", 0},           {"product_weights", "classify", 0},
    {"tensor_classify", "classify", 0},      {"analytic_exp", "classify", 0},
    {"korobov_spectrum", "spectrum", 0},     {"analytic_spectrum", "spectrum", 0},
    {"geometric_spectrum", "spectrum", 0},   {"korobov_verify", "verify", 0},
    {"tensor_verify", "verify", 0},          {"weighted_verify", "verify", 0},
    {"corrupted_tolerance", "verify", 4},
};

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int c = run_cli(args, o, e);
  return {c, o.str(), e.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string cfg(const char* name) { return (kGolden / (std::string(name) + ".json")).string(); }

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / ("tractlab_test_" + name);
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace

class GoldenTest : public ::testing::TestWithParam<Golden> {};

TEST_P(GoldenTest, MatchesExpectedAndIsDeterministic) {
  const Golden g = GetParam();
  const CliRun a = run({g.command, "--config", cfg(g.config)});
  const CliRun b = run({g.command, "--config", cfg(g.config)});
  EXPECT_EQ(a.code, g.exit_code) << a.err;
  EXPECT_EQ(a.out, b.out);
  const fs::path expected = kGolden / (std::string(g.config) + "." + g.command + ".out");
  if (std::getenv("TRACTLAB_REGEN_GOLDEN")) std::ofstream(expected, std::ios::binary) << a.out;
  ASSERT_TRUE(fs::exists(expected)) << expected;
  EXPECT_EQ(a.out, slurp(expected));
}

INSTANTIATE_TEST_SUITE_P(Cli, GoldenTest, ::testing::ValuesIn(kCases), [](const auto& info) {
  return std::string(info.param.config);
});

TEST(Cli, ComplexityRowsMatchLibrary) {
  const RunConfig c = load_config(cfg("weighted_complexity"));
  const CliRun r = run({"complexity", "--config", cfg("weighted_complexity")});
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "d,epsilon,criterion,setting,n");
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string d, e, cr, st, n;
    std::getline(ss, d, ',');
    std::getline(ss, e, ',');
    std::getline(ss, cr, ',');
    std::getline(ss, st, ',');
    std::getline(ss, n, ',');
    const ComplexityQuery q{c.model, std::stoi(d), std::stod(e), cr == "ABS" ? ErrorCriterion::ABS : ErrorCriterion::NOR,
                            st == "WORST" ? Setting::WORST : Setting::AVG};
    EXPECT_EQ(std::stoull(n), n_query(q)) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 32);
}

TEST(Cli, WeightedMatchesOracleAtThree) {
  const RunConfig c = load_config(cfg("weighted_complexity"));
  const auto n = n_worst({c.model, 3, 0.5, ErrorCriterion::ABS, Setting::WORST});
  EXPECT_EQ(n, oracle::brute_n(c.model, 3, 0.5, ErrorCriterion::ABS, 8));
}

TEST(Cli, OutFileAndFormatFlags) {
  const fs::path out = fs::temp_directory_path() / "tractlab_test_out.json";
  fs::remove(out);
  const CliRun r = run({"complexity", "--config", cfg("korobov_complexity"), "--format", "json", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const std::string s = slurp(out);
  EXPECT_NE(s.find("\"rows\""), std::string::npos);
  EXPECT_NE(s.find("\"version\""), std::string::npos);
}

TEST(Cli, ConfigErrorsNameTheField) {
  auto p = temp_file("bad1.json", R"({"problem": {"kind": "korobov", "alpah": 1}})");
  CliRun r = run({"complexity", "--config", p.string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("problem.alpah"), std::string::npos);

  p = temp_file("bad2.json", R"({"problem": {"kind": "korobov"}, "grids": {"epsilon": [], "d": [1]}})");
  r = run({"complexity", "--config", p.string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("grids.epsilon"), std::string::npos);

  p = temp_file("bad3.json", R"({"problem": {"kind": "weighted_korobov", "gamma": {"kind": "powr", "parameter": 2}}})");
  r = run({"complexity", "--config", p.string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("problem.gamma.kind"), std::string::npos);

  p = temp_file("bad4.json", "{not json");
  EXPECT_EQ(run({"complexity", "--config", p.string()}).code, kExitConfig);
  EXPECT_EQ(run({"complexity", "--config", "/nonexistent/x.json"}).code, kExitConfig);
  EXPECT_EQ(run({"complexity"}).code, kExitConfig);
  EXPECT_EQ(run({"bogus", "--config", cfg("korobov_complexity")}).code, kExitConfig);
  EXPECT_EQ(run({"complexity", "--config", cfg("korobov_complexity"), "--format", "xml"}).code, kExitConfig);
}

TEST(Cli, UnknownAnalysisListsSupportedNames) {
  const auto p = temp_file("bad5.json", R"({"problem": {"kind": "korobov"}, "analysis": ["alg_foo"]})");
  const CliRun r = run({"classify", "--config", p.string()});
  EXPECT_EQ(r.code, kExitConfig);
  for (const auto& n : RunConfig::analysis_names()) EXPECT_NE(r.err.find(n), std::string::npos) << n;
}

TEST(Cli, EmptyAnalysisListIsAnError) {
  const auto p = temp_file("bad6.json", R"({"problem": {"kind": "korobov"}})");
  EXPECT_EQ(run({"classify", "--config", p.string()}).code, kExitConfig);
}

TEST(Cli, SpectrumBudgetWritesPartialOutput) {
  const auto p = temp_file("big.json", R"({"problem": {"kind": "korobov"}, "spectrum": {"d": 3, "k": 1000}})");
  const CliRun r = run({"spectrum", "--config", p.string(), "--budget", "50"});
  EXPECT_EQ(r.code, kExitBudget);
  EXPECT_NE(r.err.find("completed ranks"), std::string::npos);
  EXPECT_EQ(r.out.rfind("rank,log_lambda,lambda,witness\n", 0), 0u);
  EXPECT_GT(std::count(r.out.begin(), r.out.end(), '\n'), 1);
}

TEST(Cli, VerifyMismatchReportsFirstInstance) {
  const CliRun r = run({"verify", "--config", cfg("corrupted_tolerance")});
  EXPECT_EQ(r.code, kExitMismatch);
  EXPECT_NE(r.err.find("straddle"), std::string::npos);
  EXPECT_NE(r.err.find("d=2"), std::string::npos);
}

TEST(Cli, DmaxOverride) {
  const CliRun r = run({"classify", "--config", cfg("korobov_wt"), "--dmax", "5"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"d\": 5"), std::string::npos);
  EXPECT_EQ(r.out.find("\"d\": 6"), std::string::npos);
}

TEST(Cli, LogRangeGrid) {
  const RunConfig c = load_config(cfg("weighted_complexity"));
  ASSERT_EQ(c.eps.size(), 4u);
  EXPECT_DOUBLE_EQ(c.eps.front(), 0.5);
  EXPECT_NEAR(c.eps.back(), 0.05, 1e-15);
  EXPECT_NEAR(c.eps[1] / c.eps[0], c.eps[2] / c.eps[1], 1e-12);
}

TEST(Cli, ExecutableExitCodes) {
  const std::string exe = TRACTLAB_CLI_PATH;
  const fs::path out = fs::temp_directory_path() / "tractlab_exe_out.csv";
  auto sh = [&](const std::string& args) {
    const int s = std::system((exe + " " + args + " > " + out.string() + " 2>/dev/null").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(sh("complexity --config " + cfg("korobov_complexity")), 0);
  EXPECT_EQ(slurp(out), slurp(kGolden / "korobov_complexity.complexity.out"));
  EXPECT_EQ(sh("verify --config " + cfg("corrupted_tolerance")), 4);
  EXPECT_EQ(sh("complexity --config /nonexistent.json"), 2);
}
