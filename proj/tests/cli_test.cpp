#include <gtest/gtest.h>

#include "jacmap/report.hpp"
#include "support.hpp"

using namespace jacmap;

namespace {

AnalysisConfig config(std::vector<Check> checks) {
  AnalysisConfig c;
  c.map_source = "test";
  c.checks = std::move(checks);
  return c;
}

}  // namespace

TEST(MapFile, Parses) {
  PolyMap f = parse_map("# demo\n\nvars: x y\nf2 = x*y   # second\nf1 = x\n");
  EXPECT_EQ(f, testing_support::make_map({"x", "y"}, {"x", "x*y"}));
  EXPECT_EQ(parse_map(format_map(testing_support::example_map())), testing_support::example_map());
}

TEST(MapFile, Errors) {
  EXPECT_THROW(parse_map("f1 = x\n"), ParseError);
  EXPECT_THROW(parse_map("vars: x\n"), ParseError);
  EXPECT_THROW(parse_map("vars: x y\nf1 = x\nf3 = y\n"), ParseError);
  EXPECT_THROW(parse_map("vars: x y\nf1 = x\nf1 = y\n"), ParseError);
  EXPECT_THROW(parse_map("vars: x y\ng = x\n"), ParseError);
  EXPECT_THROW(parse_map("vars: x y\nf1 = 2x\n"), ParseError);
  EXPECT_THROW(load_map("/nonexistent/file.map"), Error);
  try {
    parse_map("vars: x\nf1 = x\nbogus\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 3u);
  }
}

TEST(MapFile, ShippedMapsMatchCorpus) {
  for (const CorpusEntry& e : corpus())
    EXPECT_EQ(load_map(std::string(JACMAP_MAPS_DIR) + "/" + e.id + ".map"), parse_map(e.map_text)) << e.id;
}

TEST(Checks, Parsing) {
  EXPECT_EQ(parse_checks("jacobian,degree").size(), 2u);
  EXPECT_THROW(parse_checks(""), UsageError);
  EXPECT_THROW(parse_checks("jacobian,bogus"), UsageError);
}

TEST(Run, JacobianAndDegree) {
  Json r = run(config({Check::Jacobian, Check::Degree}), testing_support::example_map());
  EXPECT_EQ(r["schema"], kReportSchema);
  EXPECT_EQ(r["results"]["jacobian"]["nonsingular"], true);
  EXPECT_EQ(r["results"]["jacobian"]["constant"], "1");
  EXPECT_EQ(r["results"]["degree"]["mu"], 1);
  EXPECT_EQ(r["config"]["seed"], 0);
  EXPECT_TRUE(r["results"]["degree"].contains("tolerance"));
  EXPECT_FALSE(r.contains("timing_ms"));
}

TEST(Run, SfOfXxy) {
  Json r = run(config({Check::Sf}), testing_support::make_map({"x", "y"}, {"x", "x*y"}));
  EXPECT_EQ(r["results"]["sf"]["status"], "hypersurface");
  EXPECT_EQ(r["results"]["sf"]["polynomial"], "y1");
  EXPECT_FALSE(r["warnings"].empty());
}

TEST(Run, ChecksRunInRequestedOrder) {
  Json r = run(config({Check::Sf, Check::Jacobian}), testing_support::make_map({"x", "y"}, {"x^2", "y"}));
  auto it = r["results"].begin();
  EXPECT_EQ(it.key(), "sf");
  EXPECT_EQ((++it).key(), "jacobian");
}

TEST(Run, UsageErrors) {
  PolyMap f = testing_support::example_map();
  EXPECT_THROW(run(config({}), f), UsageError);
  EXPECT_THROW(run(config({Check::Rabier}), f), UsageError);
  EXPECT_THROW(run(config({Check::Clearance}), f), UsageError);
  AnalysisConfig c = config({Check::Jacobian});
  c.drop = 4;
  EXPECT_THROW(run(c, f), UsageError);
}

TEST(Run, CheckFailuresBecomeReportErrors) {
  PolyMap big = testing_support::make_map({"a", "b", "c", "d"}, {"a", "b", "c", "d"});
  Json r = run(config({Check::Jacobian, Check::Degree}), big);
  EXPECT_EQ(r["results"]["jacobian"]["nonsingular"], true);
  EXPECT_TRUE(r["results"]["degree"].contains("error"));
  AnalysisConfig c = config({Check::Rabier});
  c.path = "t, t^^";
  EXPECT_TRUE(run(c, testing_support::example_map())["results"]["rabier"].contains("error"));
}

TEST(Run, RabierWithDrop) {
  AnalysisConfig c = config({Check::Rabier});
  c.drop = 3;
  c.path = "t, t^-2, 0";
  Json r = run(c, testing_support::example_map());
  EXPECT_EQ(r["results"]["rabier"]["accepted"], true);
  EXPECT_EQ(r["results"]["rabier"]["limit"], (Json{"0", "0"}));
  EXPECT_EQ(r["certificates"].size(), 1u);
}

TEST(Run, ClearanceAndCylinder) {
  AnalysisConfig c = config({Check::Cylinder, Check::Clearance});
  c.hyperplane = "y1 - 1";
  Json r = run(c, testing_support::make_map({"x", "y"}, {"x", "x*y"}));
  EXPECT_EQ(r["results"]["cylinder"]["axes"][1]["cylinder"], true);
  EXPECT_EQ(r["results"]["clearance"]["intersects"], "no");
  EXPECT_EQ(r["results"]["clearance"]["certificate"], false);
}

TEST(Run, TimingOnlyOnRequest) {
  AnalysisConfig c = config({Check::Jacobian});
  c.timing = true;
  EXPECT_TRUE(run(c, testing_support::example_map()).contains("timing_ms"));
}

TEST(Run, Deterministic) {
  AnalysisConfig c = config({Check::Jacobian, Check::Degree, Check::Sf, Check::Cylinder});
  c.seed = 99;
  PolyMap f = testing_support::make_map({"x", "y"}, {"x", "x*y"});
  EXPECT_EQ(run(c, f).dump(), run(c, f).dump());
}

TEST(Corpus, AllEntriesPass) {
  for (const CorpusEntry& e : corpus()) {
    Json r = corpus_run(e.id);
    EXPECT_EQ(r["status"], "pass") << e.id << " " << r["mismatches"].dump();
  }
  EXPECT_THROW(corpus_run("nope"), UsageError);
}

TEST(Corpus, ByteIdenticalReruns) { EXPECT_EQ(corpus_run("all", 5).dump(), corpus_run("all", 5).dump()); }

TEST(Render, TextFormat) {
  std::string t = render_text(Json{{"a", 1}, {"b", {{"c", "x"}}}, {"d", Json::array({1, 2})}});
  EXPECT_EQ(t, "a: 1\nb:\n  c: x\nd: [1, 2]\n");
}
