#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "whittaker/harness.hpp"

namespace whittaker {
namespace {

namespace fs = std::filesystem;

RunConfig config(const std::string& text) { return parse_config(Json::parse(text)); }

std::string act_text(const std::string& cfg, const std::string& expr) {
  ModuleHandle handle(config(cfg));
  return run_act(handle, expr).text;
}

TEST(ExprParser, Grammar) {
  auto e1 = parse_operator_expr("3/2 * f(1) h(0)");
  EXPECT_EQ(e1.scalar, Rational(3, 2));
  ASSERT_EQ(e1.ops.size(), 2u);
  EXPECT_EQ(e1.ops[0].name, "f");
  EXPECT_EQ(e1.ops[0].mode, 1);
  EXPECT_EQ(e1.ops[1].name, "h");

  auto e2 = parse_operator_expr("- ainv(-2) astar(1) a(0) d phi(3)");
  EXPECT_EQ(e2.scalar, -1);
  ASSERT_EQ(e2.ops.size(), 5u);
  EXPECT_EQ(e2.ops[0].name, "ainv");
  EXPECT_EQ(e2.ops[0].mode, -2);
  EXPECT_EQ(e2.ops[3].name, "d");
  EXPECT_EQ(e2.ops[4].name, "phi");
}

TEST(ExprParser, ErrorsCarryPositions) {
  auto position = [](const std::string& text) -> std::size_t {
    try {
      parse_operator_expr(text);
    } catch (const ParseError& e) {
      return e.position();
    }
    ADD_FAILURE() << "no error for '" << text << "'";
    return 0;
  };
  EXPECT_EQ(position(""), 0u);
  EXPECT_EQ(position("e(1) g(2)"), 5u);
  EXPECT_EQ(position("e(1"), 3u);
  EXPECT_EQ(position("e 1"), 2u);
  EXPECT_EQ(position("f(x)"), 2u);
  EXPECT_EQ(position("e(0) *"), 6u);
  EXPECT_EQ(position("2/ e(0)"), 2u);
}

TEST(RunAct, Examples) {
  EXPECT_EQ(act_text(R"({"module":"universal","lambda":"2","mu":"3","kappa":"-2"})", "T(1)"),
            "6·w");
  EXPECT_EQ(act_text(R"({"module":"universal","lambda":"2","mu":"3","kappa":"1"})", "e(0)"),
            "2·w");
  EXPECT_EQ(act_text(R"({"module":"universal","lambda":"2","mu":"3","kappa":"1"})",
                     "f(1) h(0)"),
            "3·h(0)·w + 6·w");
  EXPECT_EQ(act_text(R"({"module":"universal","lambda":"2","mu":"3","kappa":"1"})",
                     "-1/2 e(0)"),
            "-w");
}

TEST(RunAct, TargetLabel) {
  ModuleHandle handle(config(R"({"module":"universal","lambda":"2","mu":"3","kappa":"1"})"));
  auto r = run_act(handle, "f(1)", Json::parse(R"({"h":{"0":1}})"));
  EXPECT_EQ(r.text, "3·h(0)·w + 6·w");
  EXPECT_THROW(run_act(handle, "f(1)", Json::parse(R"({"q":{"0":1}})")), ConfigError);
}

TEST(RunAct, OtherModules) {
  EXPECT_EQ(act_text(R"({"module":"lattice","lambda":"2"})", "ainv(0)"), "1/2·w");
  EXPECT_EQ(act_text(R"({"module":"lattice","lambda":"2"})", "d"), "0");
  EXPECT_EQ(act_text(R"({"module":"weyl","lambda":"2","mu":"3"})", "astar(1) a(0)"), "6·v");
}

TEST(RunAct, UnsupportedTokens) {
  const std::string universal = R"({"module":"universal","lambda":"2","mu":"3","kappa":"1"})";
  EXPECT_THROW(act_text(universal, "T(0)"), UnsupportedToken);
  EXPECT_THROW(act_text(universal, "a(0)"), UnsupportedToken);
  EXPECT_THROW(act_text(universal, "d"), UnsupportedToken);
  EXPECT_THROW(act_text(R"({"module":"weyl","lambda":"1","mu":"1"})", "f(0)"), UnsupportedToken);
}

TEST(Config, Validation) {
  EXPECT_THROW(config(R"({"module":"critical_quotient","lambda":"0"})"), ConfigError);
  EXPECT_THROW(config(R"({"module":"critical_quotient","lambda":"1",
                          "c":{"convention":"weight2","coeffs":{"1":"2"}}})"),
               ConfigError);
  EXPECT_THROW(config(R"({"module":"lattice","lambda":"0"})"), ConfigError);
  EXPECT_THROW(config(R"({"module":"wakimoto","lambda":"1","kappa":"1",
                          "chi":{"convention":"weight1","coeffs":{"0":"1"}}})"),
               ConfigError);
  EXPECT_THROW(config(R"({"module":"nope"})"), ConfigError);
  EXPECT_THROW(config(R"({"lambda":"1/0"})"), ConfigError);
  EXPECT_THROW(config("[1]"), ConfigError);
  EXPECT_EQ(config(R"({"module":"lattice","lambda":"2"})").kappa, -2);
}

TEST(Config, ExceptionalCasimirWarning) {
  auto warn = config_warnings(config(R"({"lambda":"1","mu":"0","kappa":"1","zdot":"63/2"})"));
  ASSERT_EQ(warn.size(), 1u);
  EXPECT_NE(warn[0].find("i = 3, m = 1"), std::string::npos);
  EXPECT_TRUE(config_warnings(config(R"({"lambda":"1","mu":"0","kappa":"1","zdot":"1/3"})")).empty());
  EXPECT_TRUE(config_warnings(config(R"({"lambda":"1","kappa":"1"})")).empty());
  EXPECT_THROW(config(R"({"module":"critical_quotient","lambda":"1","zdot":"0"})"), ConfigError);
}

TEST(Config, Box) {
  auto b = parse_box("4,3");
  EXPECT_EQ(b.max_depth, 4);
  EXPECT_EQ(b.max_length, 3);
  EXPECT_THROW(parse_box("4"), ConfigError);
  EXPECT_THROW(parse_box("4,x"), ConfigError);
  EXPECT_THROW(parse_box("-1,2"), ConfigError);
}

TEST(Serialization, LabelsRoundTrip) {
  Monomial m{e(-2), e(-1), h(0), f(-1), f(0)};
  auto back = label_from_json(label_to_json(m), detail::affine_lowering_order);
  EXPECT_EQ(back.second, m);
  EXPECT_EQ(back.first, 0);
  FreeFieldLabel ff{{2, 1}, {3}, {1, 1}};
  EXPECT_EQ(free_field_label_from_json(label_to_json(ff)), ff);
  PiLabel pl{2, {3, 1}, {1}};
  EXPECT_EQ(pi_label_from_json(label_to_json(pl)), pl);
  EXPECT_THROW(pi_label_from_json(Json::parse(R"({"d0":0,"c":[],"d":[],"sector":1})")),
               std::exception);
  auto c = LaurentData::weight2({{0, 12}, {-1, Rational(3, 2)}});
  EXPECT_EQ(laurent_from_json(laurent_to_json(c)), c);
}

TEST(Report, JsonRoundTrip) {
  ModuleHandle handle(config(R"({"module":"universal","lambda":"2","mu":"3","kappa":"1"})"));
  Report r = run_suite(handle, "sugawara", {1, 2}, 9);
  Report back = Json(r).get<Report>();
  EXPECT_EQ(back, r);
  EXPECT_TRUE(r.all_pass());
}

TEST(Report, DeterministicModuloTiming) {
  ModuleHandle handle(config(R"({"module":"universal","lambda":"2","mu":"3","kappa":"1"})"));
  Json a = run_suite(handle, "affine-relations", {2, 2}, 4);
  Json b = run_suite(handle, "affine-relations", {2, 2}, 4);
  EXPECT_EQ(without_timing(a).dump(), without_timing(b).dump());
}

TEST(Suites, AffineRelationsPass) {
  ModuleHandle handle(config(R"({"module":"universal","lambda":"2","mu":"3","kappa":"1"})"));
  Report r = run_suite(handle, "affine-relations", {4, 4}, 1);
  EXPECT_TRUE(r.all_pass());
  for (const auto& c : r.checks) EXPECT_FALSE(c.anchor.empty());
}

TEST(Suites, WakimotoVectorReportsFTwo) {
  ModuleHandle handle(config(R"({"module":"wakimoto","lambda":"2","mu":"3","chi0":"5",
                                 "chi1":"7","kappa":"1"})"));
  Report r = run_suite(handle, "wakimoto-vector", {2, 2}, 1);
  bool found = false;
  for (const auto& c : r.checks) {
    if (c.description.find("f(2)") != std::string::npos) {
      found = true;
      EXPECT_TRUE(c.pass) << c.residual.dump();
      EXPECT_EQ(c.residual.at("expected"), "3");
    }
  }
  EXPECT_TRUE(found);
}

TEST(Suites, LatticeRealizationPasses) {
  ModuleHandle handle(config(R"({"module":"critical_quotient","lambda":"2","mu":"1",
                                 "c":{"convention":"weight2","coeffs":{"0":"1"}}})"));
  Report r = run_suite(handle, "lattice-realization", {2, 2}, 1);
  EXPECT_TRUE(r.all_pass()) << Json(r).dump();
}

TEST(Suites, UnknownSuiteAndWrongKind) {
  ModuleHandle handle(config(R"({"module":"universal","lambda":"2","mu":"3","kappa":"1"})"));
  EXPECT_THROW(run_suite(handle, "nope", {1, 1}, 0), ConfigError);
  EXPECT_THROW(run_suite(handle, "degree-operator", {1, 1}, 0), ConfigError);
}

TEST(Kernel, Dimensions) {
  ModuleHandle handle(config(R"({"module":"universal","lambda":"2","mu":"3","kappa":"1"})"));
  auto r = run_kernel(handle, {3, 3});
  EXPECT_EQ(r.checks.front().residual.at("dimension"), 1);
}

// Command-line exit codes.

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("whittaker_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& body) {
    auto p = dir_ / name;
    std::ofstream(p) << body;
    return p.string();
  }

  int run(const std::string& args) {
    std::string cmd = std::string(WHITTAKER_CLI) + " " + args + " > " +
                      (dir_ / "stdout.txt").string() + " 2> " + (dir_ / "stderr.txt").string();
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string out() const {
    std::ifstream in(dir_ / "stdout.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST_F(Cli, ExitCodes) {
  auto good = write("v.json", R"({"module":"universal","lambda":"2","mu":"3","kappa":"1"})");
  auto wak = write("w.json", R"({"module":"wakimoto","lambda":"2","mu":"3","chi0":"5",
                                 "chi1":"7","kappa":"1"})");
  auto bad = write("bad.json", R"({"module":"lattice","lambda":"0"})");

  EXPECT_EQ(run("verify --suite affine-relations --params " + good + " --box 2,2"), 0);
  EXPECT_EQ(Json::parse(out()).at("suite"), "affine-relations");
  // The displayed f(1) identity fails on the free fields, so this suite reports a failure.
  EXPECT_EQ(run("verify --suite wakimoto-vector --params " + wak + " --box 1,1"), 1);
  EXPECT_EQ(run("verify --suite affine-relations --params " + bad), 2);
  EXPECT_EQ(run("verify --suite no-such-suite --params " + good), 2);
  EXPECT_EQ(run("verify --suite affine-relations --params " + good + " --box 2"), 2);
  EXPECT_EQ(run("verify --params " + good), 2);
  EXPECT_EQ(run("act --expr \"e(0\" --params " + good), 2);
  EXPECT_EQ(run("act --expr \"T(0)\" --params " + good), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, ActAndKernelOutput) {
  auto good = write("v.json", R"({"module":"universal","lambda":"2","mu":"3","kappa":"1"})");
  ASSERT_EQ(run("act --expr \"f(1) h(0)\" --params " + good), 0);
  EXPECT_EQ(Json::parse(out()).at("text"), "3·h(0)·w + 6·w");
  ASSERT_EQ(run("act --pretty --expr \"f(1) h(0)\" --params " + good), 0);
  EXPECT_EQ(out(), "3·h(0)·w + 6·w\n");
  ASSERT_EQ(run("kernel --params " + good + " --box 2,2"), 0);
  EXPECT_EQ(Json::parse(out()).at("checks").at(0).at("residual").at("dimension"), 1);
}

TEST_F(Cli, ReportFileMatchesStdout) {
  auto good = write("v.json", R"({"module":"universal","lambda":"2","mu":"3","kappa":"1"})");
  auto report = (dir_ / "r.json").string();
  ASSERT_EQ(run("verify --suite sugawara --params " + good + " --box 1,2 --seed 3 --out " + report),
            0);
  std::ifstream in(report);
  Json file = Json::parse(in);
  EXPECT_EQ(without_timing(file), without_timing(Json::parse(out())));
  EXPECT_EQ(file.at("seed"), 3);
}

}  // namespace
}  // namespace whittaker
