#include <gtest/gtest.h>

#include <sstream>

#include "stacky_seidel/driver.hpp"
#include "support.hpp"

using namespace stacky_seidel;
using support::fixture;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run_cli(RunConfig cfg) {
  std::ostringstream out, err;
  const int status = run(cfg, out, err);
  return {status, out.str(), err.str()};
}

RunConfig config(std::string cmd, const std::string& name, Format format = Format::structured) {
  RunConfig cfg;
  cfg.subcommand = std::move(cmd);
  cfg.input = fixture(name);
  cfg.format = format;
  return cfg;
}

std::vector<json> records(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(json::parse(line));
  return out;
}

}  // namespace

TEST(Parse, ProjectiveLine) {
  const auto in = parse_input(fixture("p1"));
  EXPECT_EQ(in.model.r(), 1u);
  EXPECT_EQ(in.model.l(), 0u);
}

TEST(Parse, WeightedLine) {
  const auto in = parse_input(fixture("p12"));
  EXPECT_EQ(in.model.r(), 1u);
  EXPECT_EQ(in.model.l(), 1u);
  EXPECT_EQ(in.model.scale(), 2);
  EXPECT_EQ(in.z_window, (std::pair<int, int>{-3, 0}));
}

TEST(Parse, Errors) {
  auto kind = [](const std::string& text) {
    try {
      parse_input_text(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::internal_error;
  };
  EXPECT_EQ(kind("{\"rank\": 1,\n \"rays\": [[1], [-1]]\n,,}"), ErrorKind::parse_error);
  EXPECT_EQ(kind("{\"rank\": 1, \"rays\": [[1], [-1]], \"max_cones\": [[1], [2]]}"), ErrorKind::parse_error);
  EXPECT_EQ(kind("{\"rank\": 1, \"rays\": [[1], [-1]], \"max_cones\": [[1], [3]], \"p_basis\": [[\"1\", \"0\"]]}"),
            ErrorKind::parse_error);
  EXPECT_EQ(kind("{\"rank\": 1, \"rays\": [[1], [-1]], \"max_cones\": [[1], [2]], \"p_basis\": [[0.5, \"0\"]]}"),
            ErrorKind::parse_error);
  try {
    parse_input_text("{\"rank\": 1,\n\"rays\": [[1], [-1]]\n,,}");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Caps, OptionParsing) {
  const auto caps = parse_caps_option("y1=2,y2=3/2,y0=1");
  ASSERT_EQ(caps.size(), 3u);
  EXPECT_EQ(caps[1].first, "y2");
  EXPECT_EQ(caps[1].second, make_rat(3, 2));
  EXPECT_THROW(parse_caps_option("y1"), Error);
}

TEST(Run, VerifyProjectiveLinePasses) {
  const auto o = run_cli(config("verify", "p1"));
  EXPECT_EQ(o.status, 0) << o.out;
  bool any = false;
  for (const auto& r : records(o.out))
    if (r["kind"] == "verdict") {
      any = true;
      EXPECT_EQ(r["payload"]["status"], "pass");
    }
  EXPECT_TRUE(any);
}

TEST(Run, SeidelHirzebruch) {
  auto cfg = config("seidel", "h2");
  cfg.j = {2};
  cfg.caps = parse_caps_option("y1=1,y2=3");
  const auto o = run_cli(cfg);
  EXPECT_EQ(o.status, 0) << o.err;
  bool found = false;
  for (const auto& r : records(o.out)) {
    if (r["kind"] == "verdict") {
      EXPECT_EQ(r["payload"]["status"], "pass") << r.dump();
    }
    if (r["kind"] == "series" && r["payload"]["name"] == "Seidel element") {
      found = true;
      // D2 reduces to D4 - 2 D3; coefficients 1, 1, 3, 10 along the second variable
      std::map<std::string, std::string> d4;
      for (const auto& t : r["payload"]["terms"])
        if (t[3] == json::array({0, 0, 0, 1})) d4[t[0][1].get<std::string>()] = t[4].get<std::string>();
      EXPECT_EQ(d4["0/1"], "1/1");
      EXPECT_EQ(d4["1/1"], "1/1");
      EXPECT_EQ(d4["2/1"], "3/1");
      EXPECT_EQ(d4["3/1"], "10/1");
    }
  }
  EXPECT_TRUE(found);
}

TEST(Run, NonWeakFanoIsNotApplicable) {
  auto cfg = config("verify", "f3");
  cfg.allow_non_weak_fano = true;
  const auto o = run_cli(cfg);
  EXPECT_EQ(o.status, 2);
  bool flagged = false, not_applicable = false;
  for (const auto& r : records(o.out)) {
    if (r["kind"] == "weak-fano") flagged = r["payload"]["weak_fano"] == false;
    if (r["kind"] == "verdict") {
      EXPECT_NE(r["payload"]["status"], "fail") << r.dump();
      if (r["payload"]["name"] == "theorem") not_applicable = r["payload"]["status"] == "not applicable";
    }
  }
  EXPECT_TRUE(flagged);
  EXPECT_TRUE(not_applicable);
}

TEST(Run, NonWeakFanoRejectedWithoutFlag) {
  const auto o = run_cli(config("verify", "f3"));
  EXPECT_EQ(o.status, 3);
  const auto err = json::parse(o.err);
  EXPECT_EQ(err["kind"], "error");
  EXPECT_EQ(err["payload"]["error"], "WeakFanoViolation");
}

TEST(Run, AgeTwoRejected) {
  const auto o = run_cli(config("describe", "age2"));
  EXPECT_EQ(o.status, 3);
  EXPECT_EQ(json::parse(o.err)["payload"]["error"], "ValidationError");
}

TEST(Run, MissingIndex) {
  const auto o = run_cli(config("seidel", "h2"));
  EXPECT_EQ(o.status, 3);
  auto cfg = config("seidel", "h2");
  cfg.j = {9};
  EXPECT_EQ(json::parse(run_cli(cfg).err)["payload"]["error"], "IndexOutOfRange");
}

TEST(Run, NegativeCapRejected) {
  auto cfg = config("mirror", "p1");
  cfg.caps = {{"y1", make_rat(-1, 1)}};
  EXPECT_EQ(run_cli(cfg).status, 3);
}

TEST(Run, DescribeWeightedLine) {
  const auto o = run_cli(config("describe", "p12"));
  EXPECT_EQ(o.status, 0);
  const auto r = records(o.out).front();
  EXPECT_EQ(r["kind"], "describe");
  EXPECT_EQ(r["payload"]["boxes"].size(), 2u);
  EXPECT_EQ(r["payload"]["boxes"][1]["age"], "1/2");
  EXPECT_EQ(r["payload"]["rho"], json::array({"3/1", "-1/1"}));
  EXPECT_EQ(r["payload"]["weak_fano"], true);
}

TEST(Run, IfunctionWindowAndBundle) {
  auto cfg = config("ifunction", "p1");
  cfg.z_window = {{-2, 0}};
  const auto o = run_cli(cfg);
  EXPECT_EQ(o.status, 0);
  for (const auto& r : records(o.out))
    if (r["kind"] == "ifunction")
      for (const auto& t : r["payload"]["terms"]) {
        EXPECT_GE(t[1].get<int>(), -2);
      }
  cfg.j = {1};
  EXPECT_EQ(run_cli(cfg).status, 0);
}

TEST(Run, BatyrevBoxIndex) {
  auto cfg = config("batyrev", "p12");
  cfg.j = {3};
  EXPECT_EQ(run_cli(cfg).status, 0);
}

TEST(Run, Deterministic) {
  for (Format f : {Format::text, Format::structured}) {
    auto cfg = config("verify", "p12", f);
    EXPECT_EQ(run_cli(cfg).out, run_cli(cfg).out);
    cfg.subcommand = "ifunction";
    EXPECT_EQ(run_cli(cfg).out, run_cli(cfg).out);
  }
}

TEST(Run, TextFormat) {
  const auto o = run_cli(config("verify", "p1", Format::text));
  EXPECT_EQ(o.status, 0);
  EXPECT_NE(o.out.find("[pass] j=1 (ray)/seidel-identity"), std::string::npos);
}
