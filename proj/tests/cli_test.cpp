#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "vbs/cli.hpp"

using namespace vbs;
using namespace vbs::testing;

namespace {

const std::string kExample = VBS_PROBLEMS_DIR "/example.vbs";

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("vbs_cli_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(Cli, SolveExampleAllOptima) {
  const auto r = run({"solve", kExample, "--order", "C,D,E,B,A", "--all-optima"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "objective min\n"
            "optimum 2\n"
            "solution A=~a B=b C=c D=d E=e\n"
            "optima 2\n"
            "  A=~a B=b C=c D=d E=e\n"
            "  A=~a B=b C=~c D=d E=e\n");
}

TEST(Cli, SolveWithTrace) {
  const auto r = run({"solve", kExample, "--order", "C,D,E,B,A", "--trace"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("inward {A,B} -> {A}\n"), std::string::npos);
  EXPECT_NE(r.out.find("outward {A,B,E} -> {B,E}  b e\n"), std::string::npos);
}

TEST(Cli, OracleAndCheck) {
  const auto o = run({"oracle", kExample});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("optimum 2\njoint_size 32\nargopt 2\n"), std::string::npos);
  EXPECT_EQ(run({"check", kExample}).code, 0);
  EXPECT_EQ(run({"check", kExample, "--all-optima", "--order", "A,B,C,D,E"}).code, 0);
}

TEST(Cli, TreeDot) {
  const auto r = run({"tree", kExample, "--order", "C,D,E,B,A", "--format", "dot"});
  EXPECT_EQ(r.code, 0);
  std::size_t labels = 0;
  for (auto at = r.out.find("[label="); at != std::string::npos; at = r.out.find("[label=", at + 1)) ++labels;
  EXPECT_EQ(labels, 8u);
  for (const char* label : {"{A,C,E}", "{A,B}", "{B,D,E}", "{A,E}", "{B,E}", "{A,B,E}", "{A}", "{}"}) {
    EXPECT_NE(r.out.find(std::string("\"") + label + "\""), std::string::npos) << label;
  }
}

TEST(Cli, TreeTextUsesHeuristicByDefault) {
  const auto r = run({"tree", kExample});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "order C A B D E");
}

TEST(Cli, ExitCodes) {
  const auto bad = write_temp("bad.vbs", "variable A a\nvaluation F A\na c 7\nend\n");
  const auto parse = run({"solve", bad});
  EXPECT_EQ(parse.code, kParseFailure);
  EXPECT_NE(parse.err.find("line 3"), std::string::npos);
  EXPECT_EQ(run({"solve", "/nonexistent/problem.vbs"}).code, kParseFailure);

  EXPECT_EQ(run({"solve", kExample, "--order", "C,D,E,B"}).code, kSolverFailure);
  EXPECT_EQ(run({"solve", kExample, "--order", "C,D,E,B,Z"}).code, kSolverFailure);

  EXPECT_EQ(run({"oracle", kExample, "--max-joint", "16"}).code, kSizeCap);
  EXPECT_EQ(run({"solve", kExample, "--all-optima", "--max-optima", "1"}).code, kSizeCap);

  EXPECT_NE(run({"tree", kExample, "--format", "svg"}).code, kOk);
  EXPECT_NE(run({}).code, kOk);
}

TEST(Cli, CheckReportsRoundingMismatch) {
  // 0.1 + (0.2 + 0.3) != (0.1 + 0.2) + 0.3 in binary floating point, so the
  // tree's summation order disagrees with the oracle's left fold.
  const auto path = write_temp("rounding.vbs",
                               "variable A a ~a\nvariable B b ~b\n"
                               "valuation F1 A\na 0.1\n~a 0.1\nend\n"
                               "valuation F2 A B\na b 0.2\na ~b 0.2\n~a b 0.2\n~a ~b 0.2\nend\n"
                               "valuation F3 B\nb 0.3\n~b 0.3\nend\n");
  const auto r = run({"check", path, "--order", "B,A"});
  EXPECT_EQ(r.code, kCheckMismatch);
  EXPECT_NE(r.out.find("mismatch: optimum 0.6 vs oracle 0.6000000000000001"), std::string::npos);
}

TEST(Cli, CheckPassesOnRandomProblems) {
  Rng rng(61);
  for (int i = 0; i < 50; ++i) {
    const Problem p = random_problem(rng, 6, 3, 5, i % 2 ? Sense::maximize : Sense::minimize);
    const auto path = write_temp("fuzz.vbs", serialize_problem(p));
    const auto r = run({"check", path, "--all-optima", "--max-optima", "100000"});
    EXPECT_EQ(r.code, kOk) << r.out << r.err;
  }
}
