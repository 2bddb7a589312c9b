#include <lattice_gp/io.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "oracles.hpp"

using namespace lgp;

TEST(PointSetFile, CanonicalText) {
  const PointSet ps(2, 5, {{3, 1}, {1, 2}, {1, 1}});
  EXPECT_EQ(dump_point_set(ps), "{\"format\":\"latticeset/1\",\"d\":2,\"n\":5,\"points\":[[1,1],[1,2],[3,1]]}\n");
  EXPECT_EQ(dump_point_set(PointSet(3, 4)), "{\"format\":\"latticeset/1\",\"d\":3,\"n\":4,\"points\":[]}\n");
}

TEST(PointSetFile, ParsingCanonicalizes) {
  const auto ps = parse_point_set(R"({"points": [[2,2],[1,1],[2,2]], "n": 3, "d": 2, "format": "latticeset/1"})");
  EXPECT_EQ(ps.size(), 2u);
  EXPECT_EQ(dump_point_set(ps), "{\"format\":\"latticeset/1\",\"d\":2,\"n\":3,\"points\":[[1,1],[2,2]]}\n");
}

TEST(PointSetFile, RoundTrip) {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ps = oracle::random_points(2 + trial % 3, 9, trial, gen);
    const auto text = dump_point_set(ps);
    EXPECT_EQ(parse_point_set(text), ps);
    EXPECT_EQ(dump_point_set(parse_point_set(text)), text);
  }
}

TEST(PointSetFile, FileRoundTrip) {
  const auto path = (std::filesystem::temp_directory_path() / "lgp_io_test.json").string();
  const auto ps = full_grid(3, 2);
  store_point_set(ps, path);
  EXPECT_EQ(load_point_set(path), ps);
  std::remove(path.c_str());
  EXPECT_THROW(load_point_set(path), FormatError);
}

TEST(PointSetFile, RejectsMalformedInput) {
  for (const char* bad : {
           "not json",
           "[]",
           R"({"format":"latticeset/2","d":2,"n":3,"points":[]})",
           R"({"format":"latticeset/1","d":1,"n":3,"points":[]})",
           R"({"format":"latticeset/1","d":2,"n":0,"points":[]})",
           R"({"format":"latticeset/1","d":2,"n":3})",
           R"({"format":"latticeset/1","d":2,"n":3,"points":[[1,2,3]]})",
           R"({"format":"latticeset/1","d":2,"n":3,"points":[[1,4]]})",
           R"({"format":"latticeset/1","d":2,"n":3,"points":[[1,0]]})",
           R"({"format":"latticeset/1","d":2,"n":3,"points":[[1,1.5]]})",
           R"({"format":"latticeset/1","d":"2","n":3,"points":[]})",
       })
    EXPECT_THROW(parse_point_set(bad), FormatError) << bad;
}

TEST(Reports, WitnessJson) {
  const auto w = find_violations(full_grid(3, 2));
  const auto j = to_json(w.front());
  EXPECT_EQ(j["kind"], "sphere");
  EXPECT_EQ(j["coefficients"].dump(), "[1,-3,-3,-3,6]");
  EXPECT_EQ(j["size"], 8);
}

TEST(Reports, LargeIntegersBecomeStrings) {
  const Integer big = Integer(1) << 80;
  EXPECT_TRUE(to_json(big).is_string());
  EXPECT_EQ(to_json(Integer(-5)), -5);
}

TEST(Reports, ConstructionReportFields) {
  const auto c = moment_curve(97, 2);
  const auto j = to_json(c.report);
  EXPECT_EQ(j["method"], "moment_curve");
  EXPECT_EQ(j["prime_used"], 97);
  EXPECT_TRUE(j["D_used"].is_null());
  EXPECT_EQ(j["final_size"], 12);
  EXPECT_EQ(j["generator"], "mt19937_64+seed_seq/v1");
}

TEST(Reports, VcJsonNests) {
  const std::vector<LatticePoint> q{{1, 1}, {2, 2}, {3, 3}, {1, 2}};
  const auto j = to_json(vc_refute(q));
  EXPECT_EQ(j["reason"], "degenerate_recursed");
  EXPECT_EQ(j["recursion"]["reason"], "not_cospherical");
}
