#include <gtest/gtest.h>

#include <filesystem>
#include <json.hpp>
#include <regex>
#include <sstream>

#include "support.hpp"
#include "tissuenet/cli.hpp"

using namespace tissuenet;
using tissuenet::testing::read_text;
using tissuenet::testing::source_path;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string model(const std::string& name) { return source_path("models/" + name); }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("tissuenet_cli_" + name)).string();
}

}  // namespace

TEST(Cli, ValidateCleanModel) {
  auto r = run({"validate", model("fig6.model")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, ValidateReportsOneDiagnostic) {
  auto path = source_path("tests/fixtures/invalid/undeclared.model");
  auto r = run({"validate", path});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_NE(r.err.find("undeclared.model:5:15: error:"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"explore"}).code, 2);
  EXPECT_EQ(run({"explore", model("fig2.model"), "--max-states", "zero"}).code, 2);
  EXPECT_EQ(run({"query", model("fig2.model")}).code, 2);
  EXPECT_EQ(run({"validate", "/nonexistent/file.model"}).code, 2);
  EXPECT_EQ(run({"export", model("fig2.model")}).code, 2);
  EXPECT_EQ(run({"validate", model("fig2.model"), "explore"}).code, 2);
}

TEST(Cli, HelpExitsCleanly) {
  auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("explore"), std::string::npos);
}

TEST(Cli, ExploreSummary) {
  auto r = run({"explore", model("fig2.model")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "states=6 edges=6 truncated=false\n");
}

TEST(Cli, ExploreLimitExitCode) {
  auto r = run({"explore", model("fig6.model"), "--max-states", "100"});
  EXPECT_EQ(r.code, 3);
  EXPECT_TRUE(std::regex_match(r.out, std::regex("states=100 edges=[0-9]+ truncated=true\n")))
      << r.out;
}

TEST(Cli, ExploreJsonOutputIsIndependentOfJobs) {
  auto a = temp_path("a.json");
  auto b = temp_path("b.json");
  ASSERT_EQ(run({"explore", model("healing_ring.model"), "--out", a, "--jobs", "1"}).code, 0);
  ASSERT_EQ(run({"explore", model("healing_ring.model"), "--out", b, "--jobs", "4"}).code, 0);
  auto ja = read_text(a);
  EXPECT_FALSE(ja.empty());
  EXPECT_EQ(ja, read_text(b));
  auto doc = nlohmann::json::parse(ja);
  EXPECT_EQ(doc["truncated"], false);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Cli, QueryReachable) {
  auto r = run({"query", model("fig2.model"), "--reach", "C@0 == 1"});
  EXPECT_EQ(r.code, 0);
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["length"], 2);
  ASSERT_EQ(doc["trace"].size(), 2u);
  EXPECT_EQ(doc["trace"][0]["event"]["component"], "B");
  EXPECT_EQ(doc["trace"][1]["event"]["component"], "C");
  EXPECT_EQ(doc["trace"][1]["state"]["levels"][0]["values"]["C"], 1);
}

TEST(Cli, QueryUnreachable) {
  auto r = run({"query", model("fig2.model"), "--reach", "count() == 2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "unreachable\n");
  auto truncated = run({"query", model("fig6.model"), "--reach", "count() == 0", "--max-states", "50"});
  EXPECT_EQ(truncated.code, 3);
}

TEST(Cli, QueryBadPredicate) {
  EXPECT_EQ(run({"query", model("fig2.model"), "--reach", "C@0 =="}).code, 1);
  EXPECT_EQ(run({"query", model("fig2.model"), "--reach", "Q@0 == 1"}).code, 1);
}

TEST(Cli, SuccessorsOfInitialAndGivenState) {
  auto r = run({"successors", model("fig2.model")});
  ASSERT_EQ(r.code, 0);
  auto list = nlohmann::json::parse(r.out);
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list[0]["event"]["kind"], "update");
  EXPECT_EQ(list[0]["state"]["levels"][0]["values"]["B"], 1);

  std::string state =
      R"j({"levels":[{"module":0,"values":{"A":0,"B":0,"C":0}}],"spatial":[{"module":0,"at":"(0,0)"}]})j";
  auto g = run({"successors", model("fig2.model"), "--state", state});
  ASSERT_EQ(g.code, 0);
  auto list2 = nlohmann::json::parse(g.out);
  ASSERT_EQ(list2.size(), 1u);
  EXPECT_EQ(list2[0]["event"]["component"], "A");

  EXPECT_EQ(run({"successors", model("fig2.model"), "--state", "{oops"}).code, 1);
  EXPECT_EQ(run({"successors", model("fig2.model"), "--state",
                 R"j({"levels":[{"module":0,"values":{"A":3}}],"spatial":[{"module":0,"at":"(0,0)"}]})j"})
                .code,
            1);
}

TEST(Cli, ExportDotAndJson) {
  auto r = run({"export", model("fig2.model"), "--dot", "-"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("digraph states {", 0), 0u);
  auto dot = temp_path("g.dot");
  auto json = temp_path("g.json");
  EXPECT_EQ(run({"export", model("healing_ring.model"), "--dot", dot, "--json", json}).code, 0);
  EXPECT_NE(read_text(dot).find("division("), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(read_text(json))["nodes"].size(), 1493u);
  std::filesystem::remove(dot);
  std::filesystem::remove(json);
}

TEST(Cli, RenderIsDeterministic) {
  for (const char* name : {"fig2.model", "fig6.model", "healing_ring.model"}) {
    auto a = run({"render", model(name), "--svg", "-"});
    auto b = run({"render", model(name), "--svg", "-"});
    ASSERT_EQ(a.code, 0) << name << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("<svg"), std::string::npos);
    EXPECT_NE(a.out.find("</svg>"), std::string::npos);
  }
}

TEST(Cli, RenderDrawsOneShapePerModule) {
  auto tri = run({"render", model("fig6.model"), "--svg", "-"});
  std::size_t hexagons = 0;
  for (auto at = tri.out.find("<polygon"); at != std::string::npos; at = tri.out.find("<polygon", at + 1)) {
    ++hexagons;
  }
  EXPECT_EQ(hexagons, 3u);
  auto ring = run({"render", model("healing_ring.model"), "--svg", "-"});
  std::size_t circles = 0;
  for (auto at = ring.out.find("<circle"); at != std::string::npos; at = ring.out.find("<circle", at + 1)) {
    ++circles;
  }
  EXPECT_EQ(circles, 8u);
}

TEST(Cli, RenderHandlesEveryExploredState) {
  auto m = load_model(read_text(model("healing_ring.model")));
  ASSERT_TRUE(m.ok());
  auto out = temp_path("states.json");
  ASSERT_EQ(run({"explore", model("healing_ring.model"), "--out", out}).code, 0);
  auto doc = nlohmann::json::parse(read_text(out));
  std::filesystem::remove(out);
  for (const auto& node : doc["nodes"]) {
    nlohmann::json state{{"levels", node["levels"]}, {"spatial", node["spatial"]}};
    auto r = run({"render", model("healing_ring.model"), "--state", state.dump(), "--svg", "-"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  auto empty = run({"render", model("healing_ring.model"), "--state",
                    R"({"levels":[],"spatial":[]})", "--svg", "-"});
  EXPECT_EQ(empty.code, 0);
}
