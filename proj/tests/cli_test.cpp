#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "koszulab/cli.hpp"

using namespace koszulab;
using namespace koszulab::cli;

namespace {

struct Invocation {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Invocation run(std::vector<std::string> args) {
  std::vector<const char*> argv{"koszulab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("koszulab_cli_" + name + ".json");
  std::ofstream(path) << contents;
  return path.string();
}

std::string verdict_line(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.starts_with("verdict: ")) return line.substr(9);
  }
  return {};
}

}  // namespace

TEST(CliExamples, ProregularPlane) {
  auto r = run({"proreg", "--ring", "F32003[x,y]", "--seq", "x,y", "--rmax", "3", "--smax", "6", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.report();
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["verdict"], "certified");
  ASSERT_EQ(j["result"]["witnesses"].size(), 6U);
  for (const auto& w : j["result"]["witnesses"]) EXPECT_EQ(w[2].get<int>(), w[1].get<int>() + 1);
  EXPECT_TRUE(j["result"]["exhausted"].empty());
}

TEST(CliExamples, DualityOfEmbeddedComponent) {
  auto r = run({"duality", "--ring", "F32003[x,y]", "--module", "coker [[x^2, x*y]]", "--window", "-6..0",
                "--stage-max", "8"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(verdict_line(r.out), "pass");
}

TEST(CliExamples, ExhaustedBoundIsUndecided) {
  auto r = run({"proreg", "--ring", "F32003[x]", "--seq", "x", "--rmax", "2", "--smax", "2"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(verdict_line(r.out), "undecided");
}

TEST(CliGrammar, Rings) {
  auto lex = parse_ring<Zp>("F7[a, b]:lex");
  EXPECT_EQ(lex.order(), MonomialOrder::Lex);
  EXPECT_EQ(lex.field().characteristic(), 7U);
  auto q = parse_ring<Rational>("Q[x,y,z]/(x*z, y*z)");
  EXPECT_TRUE(q.has_quotient());
  EXPECT_EQ(q.num_variables(), 3U);
  EXPECT_THROW(parse_ring<Zp>("F32003[x,x]"), InvalidArgument);
  EXPECT_THROW(parse_ring<Zp>("F32003[x]:deglex"), SyntaxError);
  EXPECT_THROW(parse_field("F32004[x]"), InvalidArgument);
  try {
    parse_ring<Zp>("F32003[x,1y]");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 9U);
  }
}

TEST(CliGrammar, Modules) {
  auto ring = parse_ring<Zp>("F32003[x,y]");
  auto m = parse_module("coker [[x, 0], [0, y^2]] twists [1, 3]", ring);
  EXPECT_EQ(m.degrees(), (std::vector<Degree>{1, 3}));
  EXPECT_EQ(m.relations().col_degrees(), (std::vector<Degree>{2, 5}));
  EXPECT_EQ(m.dimension(1), 1U);  // generator e_1 survives, x e_1 dies
  EXPECT_EQ(parse_module("free 3", ring).rank(), 3U);
  EXPECT_EQ(parse_module("free [0, -2]", ring).degrees(), (std::vector<Degree>{0, -2}));
  EXPECT_THROW(parse_module("coker [[x], [y, x]]", ring), SyntaxError);
  EXPECT_THROW(parse_module("coker [[x]] twists [1, 2]", ring), SyntaxError);
  EXPECT_THROW(parse_module("kernel [[x]]", ring), SyntaxError);
  try {
    parse_module("coker [[x, w]]", ring);
    FAIL();
  } catch (const UnknownVariable& e) {
    EXPECT_NE(std::string(e.what()).find("position 11"), std::string::npos) << e.what();
  }
}

TEST(CliGrammar, Complexes) {
  auto ring = parse_ring<Zp>("F32003[x,y]");
  auto k = parse_complex("koszul x, y", ring);
  EXPECT_EQ(k.lo(), 0);
  EXPECT_EQ(k.rank(1), 2U);
  auto s = parse_complex("map [[x, y]] shift 1", ring);
  EXPECT_EQ(s.lo(), -2);
  EXPECT_TRUE(s.is_complex());
  EXPECT_EQ(parse_complex("module coker [[x]]", ring).rank(0), 1U);
  EXPECT_THROW(parse_complex("cone x", ring), SyntaxError);
}

TEST(CliExitCodes, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"proreg", "--seq", "x"}).code, 2);
  auto bad = run({"gb", "--ring", "F32003[x,y]", "--ideal", "x^2 + * y"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("position"), std::string::npos);
  EXPECT_EQ(run({"localcoh", "--ring", "F32003[x,y]", "--module", "free 1", "--method", "cech"}).code, 2);
  EXPECT_EQ(run({"duality", "--ring", "F32003[x,y]/(x*y)", "--module", "free 1"}).code, 2);
  EXPECT_EQ(run({"verify", "/nonexistent/report.json"}).code, 2);
  EXPECT_EQ(run({"verify", temp_file("garbage", "{\"schema\": 1}")}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliExitCodes, UnstableDualityWindow) {
  auto r = run({"duality", "--ring", "F32003[x,y]", "--module", "free 1", "--window", "0..6", "--stage-max", "3"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(verdict_line(r.out), "undecided");
}

TEST(CliOutput, TextAndJsonVerdictsAgree) {
  const std::vector<std::vector<std::string>> jobs{
      {"proreg", "--ring", "F32003[x,y]/(x*y)", "--seq", "x, y", "--rmax", "2"},
      {"proreg", "--ring", "F32003[x]", "--seq", "x", "--rmax", "2", "--smax", "2"},
      {"essnull", "--ring", "F32003[x,y]/(x*y)", "--seq", "x", "--rmax", "3", "--smax", "7"},
      {"localcoh", "--ring", "F32003[x,y]", "--module", "free 1", "--seq", "x", "--index", "1", "--window", "-2..0"},
      {"complete", "--ring", "F32003[x,y]", "--module", "coker [[x]]", "--ideal", "x, y", "--nmax", "3"},
      {"gmadj", "--ring", "F32003[x,y]", "--seq", "x, y", "--E", "koszul y", "--F", "module coker [[x*y]]"},
      {"koszul", "--ring", "Q[x,y,z]", "--seq", "x, y, z", "--r", "2"},
      {"duality", "--ring", "F32003[x,y]", "--module", "coker [[x]]", "--window", "-2..3", "--stage-max", "6"},
  };
  for (auto args : jobs) {
    const Invocation text = run(args);
    args.push_back("--json");
    const Invocation js = run(args);
    EXPECT_EQ(text.code, js.code) << args[0];
    EXPECT_EQ(verdict_line(text.out), js.report()["verdict"].get<std::string>()) << args[0];
  }
}

TEST(CliOutput, TablesAreDegreeStageDimTriples) {
  auto r = run({"localcoh", "--ring", "F32003[x,y]", "--module", "free 1", "--index", "2", "--window", "-6..0",
                "--stage-max", "8", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto table = r.report()["result"]["table"];
  EXPECT_EQ(table.size(), 7U * 8U);
  for (const auto& row : table) ASSERT_EQ(row.size(), 3U);
  // Oracle: x^a y^b with a, b <= s - 1 and a + b = 2s - d, at the last stage.
  for (const auto& row : table) {
    const long d = -row[0].get<long>(), s = row[1].get<long>();
    std::size_t count = 0;
    for (long a = 0; a < s; ++a) count += (2 * s - d - a >= 0 && 2 * s - d - a < s) ? 1 : 0;
    EXPECT_EQ(row[2].get<std::size_t>(), count);
  }
}

TEST(CliOutput, DeterministicAcrossThreadCounts) {
  const std::vector<std::string> args{"lochom", "--ring", "F32003[x,y,z]", "--seq", "x^2, x*y", "--rmax", "2", "--json"};
  setenv("KOSZULAB_THREADS", "1", 1);
  const Invocation one = run(args);
  setenv("KOSZULAB_THREADS", "4", 1);
  const Invocation four = run(args);
  unsetenv("KOSZULAB_THREADS");
  EXPECT_EQ(one.code, 0) << one.err;
  EXPECT_EQ(one.out, four.out);
}

TEST(CliVerify, RoundTrips) {
  const std::vector<std::vector<std::string>> jobs{
      {"proreg", "--ring", "F32003[x,y,z]/(x*z, y*z)", "--seq", "x, y", "--rmax", "3", "--smax", "7"},
      {"proreg", "--ring", "F32003[x]", "--seq", "x", "--rmax", "2", "--smax", "2"},
      {"essnull", "--ring", "F32003[x,y]/(x*y)", "--seq", "x", "--rmax", "3", "--smax", "7"},
      {"lochom", "--ring", "F32003[x]", "--seq", "x", "--rmax", "2"},
      {"localcoh", "--ring", "F32003[x,y]", "--module", "coker [[x^2, x*y]]", "--index", "1", "--stage-max", "5"},
      {"gmadj", "--ring", "F32003[x,y]", "--seq", "x", "--E", "koszul y", "--rrange", "1..2"},
      {"duality", "--ring", "F32003[x,y]", "--module", "coker [[x, y]]", "--window", "-2..2", "--stage-max", "5"},
  };
  int k = 0;
  for (auto args : jobs) {
    args.push_back("--json");
    const Invocation first = run(args);
    const std::string path = temp_file("roundtrip" + std::to_string(k++), first.out);
    const Invocation again = run({"verify", path, "--json"});
    EXPECT_EQ(again.code, first.code) << args[0] << again.err;
    const auto rep = again.report();
    EXPECT_TRUE(rep["result"]["valid"].get<bool>()) << args[0];
    EXPECT_EQ(rep["verdict"], first.report()["verdict"]) << args[0];
  }
}

TEST(CliVerify, TamperedCertificatesFail) {
  auto cert = run({"proreg", "--ring", "F32003[x,y]", "--seq", "x^2, x*y", "--rmax", "2", "--json"}).report();
  ASSERT_EQ(cert["verdict"], "certified");
  auto moved = cert;
  moved["result"]["witnesses"][0][2] = moved["result"]["witnesses"][0][2].get<int>() + 1;
  EXPECT_EQ(run({"verify", temp_file("moved", moved.dump())}).code, 1);
  auto dropped = cert;
  dropped["result"]["witnesses"].erase(dropped["result"]["witnesses"].size() - 1);
  EXPECT_EQ(run({"verify", temp_file("dropped", dropped.dump())}).code, 1);
  auto relabeled = cert;
  relabeled["verdict"] = "undecided";
  EXPECT_EQ(run({"verify", temp_file("relabeled", relabeled.dump())}).code, 1);

  auto table = run({"duality", "--ring", "F32003[x,y]", "--module", "free 1", "--window", "0..3", "--stage-max", "6",
                    "--json"}).report();
  table["result"]["lhs"]["2"][3][2] = 7;
  EXPECT_EQ(run({"verify", temp_file("table", table.dump())}).code, 1);

  auto lochom = run({"lochom", "--ring", "F32003[x]", "--seq", "x", "--rmax", "2", "--json"}).report();
  lochom["result"]["ml"][0]["per_stage"][0]["chains"][0]["image_dims"][1] = 9;
  EXPECT_EQ(run({"verify", temp_file("lochom", lochom.dump())}).code, 1);
}
