#include "attest/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

struct CliRun {
  int rc;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "theta_attest");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int rc = attest::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

std::string temp_catalog(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

int count_lines(const std::string& s, const std::string& prefix) {
  int n = 0;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);)
    if (line.rfind(prefix, 0) == 0) ++n;
  return n;
}

struct EnvGuard {
  explicit EnvGuard(const char* value) { setenv("THETA_ATTEST_DIGITS", value, 1); }
  ~EnvGuard() { unsetenv("THETA_ATTEST_DIGITS"); }
};

}  // namespace

TEST(Cli, VerifyFilter) {
  CliRun r = cli({"verify", "--filter", "D*"});
  EXPECT_EQ(r.rc, attest::kPass) << r.err;
  EXPECT_EQ(r.out.rfind("verify: 50 digits, 20 samples in [1/20, 3/5], tolerance 1.00e-40\n", 0), 0u) << r.out;
  EXPECT_EQ(count_lines(r.out, "identity "), 2);
  EXPECT_NE(r.out.find(" D3 "), std::string::npos);
  EXPECT_NE(r.out.find(" D5 "), std::string::npos);
  EXPECT_NE(r.out.find("summary: 2 passed, 0 failed"), std::string::npos);
  EXPECT_NE(r.err.find("elapsed"), std::string::npos);
}

TEST(Cli, FullVerifyPasses) {
  CliRun r = cli({"verify"});
  EXPECT_EQ(r.rc, attest::kPass) << r.out;
  EXPECT_NE(r.out.find(" 0 failed"), std::string::npos);
  for (const char* suite : {"identity ", "factored ", "qseries ", "closed-form ", "intermediate ", "relation ",
                            "table ", "cfrac "})
    EXPECT_GT(count_lines(r.out, suite), 0) << suite;
}

TEST(Cli, RefusesLowPrecision) {
  CliRun r = cli({"verify", "--digits", "15"});
  EXPECT_EQ(r.rc, attest::kUsage);
  EXPECT_NE(r.err.find("20"), std::string::npos) << r.err;
  EXPECT_EQ(cli({"table", "--digits", "10"}).rc, attest::kUsage);
  EXPECT_EQ(cli({"verify", "--samples", "1"}).rc, attest::kUsage);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).rc, attest::kUsage);
  EXPECT_EQ(cli({"frobnicate"}).rc, attest::kUsage);
  EXPECT_EQ(cli({"verify", "--filter", "no-such-record"}).rc, attest::kUsage);
  EXPECT_EQ(cli({"eval", "param", "g", "3", "15"}).rc, attest::kUsage);
  EXPECT_EQ(cli({"verify", "--digits", "abc"}).rc, attest::kUsage);
}

TEST(Cli, EvalTheta) {
  CliRun r = cli({"eval", "theta", "phi", "--q", "0.1", "--digits", "15"});
  EXPECT_EQ(r.rc, attest::kPass) << r.err;
  EXPECT_NE(r.out.find("1.20020000200000"), std::string::npos) << r.out;
  CliRun n = cli({"eval", "theta", "psi", "--nome", "5/9", "--digits", "30"});
  EXPECT_EQ(n.rc, attest::kPass) << n.err;
  CliRun d = cli({"eval", "theta", "phi", "--q", "1"});
  EXPECT_EQ(d.rc, attest::kDomain) << d.out;
}

TEST(Cli, EvalParamMatchesCatalog) {
  CliRun r = cli({"eval", "param", "h", "3", "15", "--digits", "40"});
  EXPECT_EQ(r.rc, attest::kPass) << r.err;
  EXPECT_NE(r.out.find("h(3,15) = 0.7611874813619031009609162233868701028742"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("closed form S41"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("agreement: 40 digits"), std::string::npos) << r.out;
}

TEST(Cli, EvalContinuedFractionRoutes) {
  CliRun r = cli({"eval", "cf", "--n", "5/9", "--digits", "40"});
  EXPECT_EQ(r.rc, attest::kPass) << r.err;
  for (const char* route : {"theta quotient", "product", "cf prefix", "via h(3,5/3)", "table"})
    EXPECT_NE(r.out.find(route), std::string::npos) << route << "\n" << r.out;
  EXPECT_EQ(count_lines(r.out, "  product         0.0869246091216013747455297709251117789332"), 1) << r.out;
}

TEST(Cli, EvalExpressionErrors) {
  CliRun r = cli({"eval", "expr", "sqrt(5"});
  EXPECT_EQ(r.rc, attest::kUsage);
  EXPECT_NE(r.err.find("offset 6"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("  sqrt(5\n        ^"), std::string::npos) << r.err;
  EXPECT_EQ(cli({"eval", "expr", "(1-2)^(1/2)"}).rc, attest::kDomain);
  CliRun ok = cli({"eval", "expr", "(a*b)^(1/2)", "--digits", "30"});
  EXPECT_EQ(ok.rc, attest::kPass) << ok.err;
}

TEST(Cli, TableTextAndJsonAgree) {
  CliRun text = cli({"table", "--digits", "50"});
  CliRun json = cli({"table", "--digits", "50", "--json"});
  ASSERT_EQ(text.rc, attest::kPass) << text.err;
  ASSERT_EQ(json.rc, attest::kPass) << json.err;
  auto doc = nlohmann::json::parse(json.out);
  EXPECT_EQ(doc["schema"], 1);
  ASSERT_EQ(doc["rows"].size(), 5u);
  for (const auto& row : doc["rows"]) {
    ASSERT_TRUE(row["closed"].is_string());
    std::string closed = row["closed"];
    EXPECT_NE(text.out.find("  closed  " + closed + "\n"), std::string::npos) << closed;
    EXPECT_LT(std::stod(row["delta"].get<std::string>()), 1e-40);
    EXPECT_LT(std::stod(row["bridge_residual"].get<std::string>()), 1e-42);
  }
}

TEST(Cli, VerifyJsonMatchesText) {
  CliRun text = cli({"verify", "--filter", "S*"});
  CliRun json = cli({"verify", "--filter", "S*", "--json"});
  ASSERT_EQ(json.rc, text.rc);
  auto doc = nlohmann::json::parse(json.out);
  EXPECT_EQ(doc["command"], "verify");
  EXPECT_EQ(doc["digits"], 50);
  EXPECT_EQ(doc["tolerance"], "1.00e-40");
  EXPECT_EQ(doc["samples"]["count"], 20);
  std::size_t passed = 0;
  for (const auto& e : doc["results"]) {
    std::string name = e["name"], verdict = e["verdict"];
    std::regex line("(^|\\n)" + e["suite"].get<std::string>() + " +" + name + " +" + verdict +
                    " +max " + e["max_residual"].get<std::string>());
    EXPECT_TRUE(std::regex_search(text.out, line)) << name;
    if (e["pass"]) ++passed;
    if (e["suite"] == "identity") {
      EXPECT_EQ(e["samples"].size(), 20u);
    }
  }
  EXPECT_EQ(doc["summary"]["passed"], passed);
}

TEST(Cli, OutputIsDeterministic) {
  CliRun a = cli({"verify", "--json"});
  CliRun b = cli({"verify", "--json"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(cli({"table"}).out, cli({"table"}).out);
}

TEST(Cli, EnvironmentSetsDefaultDigits) {
  {
    EnvGuard env("25");
    CliRun r = cli({"verify", "--filter", "D3"});
    EXPECT_EQ(r.rc, attest::kPass) << r.err;
    EXPECT_EQ(r.out.rfind("verify: 25 digits", 0), 0u) << r.out;
    CliRun o = cli({"verify", "--filter", "D3", "--digits", "30"});
    EXPECT_EQ(o.out.rfind("verify: 30 digits", 0), 0u) << o.out;
  }
  {
    EnvGuard env("many");
    EXPECT_EQ(cli({"verify", "--filter", "D3"}).rc, attest::kUsage);
  }
}

TEST(Cli, RerunReproducesVerdicts) {
  CliRun r = cli({"verify", "--filter", "S5*", "--rerun", "80"});
  EXPECT_EQ(r.rc, attest::kPass) << r.out;
  EXPECT_NE(r.out.find("rerun"), std::string::npos) << r.out;
}

TEST(Cli, CatalogOverride) {
  std::string good = temp_catalog("theta_cli_good.cat",
                                  "identity T : P = phi(q)^4/phi(q^3)^4 ; Q = psim(q)^4/(q*psim(q^3)^4) ;\n"
                                  "  relation = P + P*Q - (9 + Q)\n");
  CliRun g = cli({"verify", "--catalog", good, "--filter", "T"});
  EXPECT_EQ(g.rc, attest::kPass) << g.out << g.err;

  std::string broken = temp_catalog("theta_cli_broken.cat", "h 3 15 = 2 + * 3\n");
  CliRun b = cli({"verify", "--catalog", broken});
  EXPECT_EQ(b.rc, attest::kUsage);
  EXPECT_NE(b.err.find("theta_cli_broken.cat:1:14"), std::string::npos) << b.err;

  EXPECT_EQ(cli({"verify", "--catalog", "/nonexistent/x.cat"}).rc, attest::kUsage);

  std::string wrong = temp_catalog("theta_cli_wrong.cat",
                                   "identity W : P = phi(q) ; Q = phi(q^3) ; relation = P - Q - 1\n");
  CliRun w = cli({"verify", "--catalog", wrong, "--filter", "W"});
  EXPECT_EQ(w.rc, attest::kFail) << w.out;
  EXPECT_NE(w.out.find("failed"), std::string::npos);

  std::string domain = temp_catalog("theta_cli_domain.cat",
                                    "identity N : P = -phi(q) ; Q = phi(q^3) ; relation = P^(1/2) - Q\n");
  CliRun d = cli({"verify", "--catalog", domain, "--filter", "N"});
  EXPECT_EQ(d.rc, attest::kDomain) << d.out;

  for (const std::string& p : {good, broken, wrong, domain}) std::filesystem::remove(p);
}

TEST(Cli, TimingOnlyWhenAsked) {
  CliRun plain = cli({"verify", "--filter", "D3", "--json"});
  CliRun timed = cli({"verify", "--filter", "D3", "--json", "--timing"});
  EXPECT_EQ(plain.out.find("elapsed_ms"), std::string::npos);
  EXPECT_NE(timed.out.find("elapsed_ms"), std::string::npos);
}
