#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qrevival/cli.hpp"

using qrevival::cli::Json;

namespace {

struct Outcome {
  int code = -1;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome r;
  r.code = qrevival::cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> strings(const Json& a) {
  std::vector<std::string> out;
  for (const auto& v : a) out.push_back(v.get<std::string>());
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

}  // namespace

TEST(Cli, N0OneDimensional) {
  const Outcome r = run({"n0-1d", "--l0", "5", "--qsq", "2", "--bound", "10000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  std::set<long> got;
  for (const auto& m : strings(j["members"])) got.insert(std::stol(m));
  std::set<long> want;
  for (long l : {1, 5, 19, 71, 265, 989, 3691}) {
    want.insert(l);
    want.insert(-l);
  }
  EXPECT_EQ(got, want);
  EXPECT_EQ(j["recurrence"]["alpha"], "4");
  EXPECT_EQ(j["recurrence"]["beta"], "-1");
  EXPECT_EQ(j["method"], "pell");
}

TEST(Cli, RevivalTime) {
  const Outcome r = run({"revival-time", "--qsq", "189/4", "--dim", "1", "--members", "3,5,15,47"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["L"], "15");
  EXPECT_EQ(j["T_rev"], "30*pi/omega0");
  EXPECT_EQ(strings(j["ratios"]), (std::vector<std::string>{"1", "17/15", "11/5", "19/3"}));
  EXPECT_EQ(j["minimal"], true);
}

TEST(Cli, DecompOfOne) {
  const Outcome r = run({"decomp", "--value", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["D"], "1");
  EXPECT_EQ(j["s"], "1");
  EXPECT_FALSE(j.contains("D_star"));
  const Json k = run({"decomp", "--value", "1196/25"}).json();
  EXPECT_EQ(k["D"], "299");
  EXPECT_EQ(k["s_star"], "5");
}

// Members emitted by n0-1d feed straight back into revival-time.
TEST(Cli, MembersRoundTrip) {
  const Json a = run({"n0-1d", "--l0", "3", "--qsq", "791", "--bound", "100"}).json();
  const std::string members = join(strings(a["members"]));
  const Outcome b = run({"revival-time", "--qsq", "791", "--members=" + members, "--pivot", "3"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(b.json()["L"], a["revival"]["L"]);
  EXPECT_EQ(b.json()["L"], "10");
}

TEST(Cli, PellAndTwoSquares) {
  const Json p = run({"pell", "--D", "2", "--rhs", "-791", "--count", "3"}).json();
  EXPECT_EQ(p["unit"], Json::array({"3", "2"}));
  EXPECT_EQ(p["families"].size(), 2u);
  const Json t = run({"two-squares", "--n", "1105"}).json();
  EXPECT_EQ(t["base_pairs"].size(), 4u);
  EXPECT_EQ(t["signed_count"], 32);
}

TEST(Cli, OrbitAndN0TwoDimensional) {
  const Json o = run({"orbit", "--D", "1", "--seed", "4,1,3", "--x-bound", "20"}).json();
  EXPECT_EQ(o["rhs"], "6");
  EXPECT_EQ(o["points"].size(), 40u);
  const Outcome n = run({"n0-2d", "--k0", "1", "--l0", "2", "--qsq", "3", "--bound", "12", "--orbit-check"});
  ASSERT_EQ(n.code, 0) << n.err;
  EXPECT_EQ(n.json()["orbit_check"]["subset_of_scan"], true);
  EXPECT_EQ(n.json()["revival"]["L"], "1");
}

TEST(Cli, VerifyWitness) {
  const Outcome r = run({"verify", "--qsq", "2", "--members=5,-5,1,-1,19,-19", "--coeffs", "power:-0.25", "--samples", "300"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["passed"], true);
  EXPECT_LE(j["max_deviation"].get<double>(), 1e-9);
  ASSERT_EQ(j["witnesses"].size(), 1u);
  EXPECT_EQ(j["witnesses"][0]["prime"], "3");
  EXPECT_GT(j["witnesses"][0]["deviation"].get<double>(), 1e-3);
}

TEST(Cli, ImagesAreWritten) {
  const auto dir = std::filesystem::temp_directory_path() / "qrevival_cli_test";
  std::filesystem::create_directories(dir);
  const std::string carpet = (dir / "c.ppm").string();
  const Outcome c = run({"carpet", "--qsq", "189/4", "--members=3,-3,5,-5", "--width", "8", "--height", "6", "--out", carpet});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(std::filesystem::file_size(carpet), std::string("P5\n8 6\n255\n").size() + 48);

  const Outcome s = run({"snapshots", "--qsq", "3", "--dim", "2", "--members", "1:2,2:1,2:5", "--times", "0,1/2",
                     "--width", "4", "--height", "4", "--format", "png", "--out", (dir / "s").string()});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "s_0.png"));
  EXPECT_TRUE(std::filesystem::exists(dir / "s_1.png"));

  const Outcome n = run({"nodal", "--qsq", "2", "--dim", "2", "--members", "0:0", "--component", "upper", "--width", "4",
                     "--height", "4", "--out", (dir / "n.ppm").string()});
  ASSERT_EQ(n.code, 0) << n.err;
  EXPECT_EQ(n.json()["degenerate"], true);
  std::filesystem::remove_all(dir);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"--help"}).code, 0);
  const Outcome unknown = run({"decomp", "--value", "3", "--bogus"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("--value"), std::string::npos);  // usage text follows the error
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"decomp", "--value", "abc"}).code, 2);
  EXPECT_EQ(run({"revival-time", "--qsq", "2", "--members", "1,2"}).code, 1);  // not co-revivable
  EXPECT_EQ(run({"pell", "--D", "4"}).code, 1);
  EXPECT_EQ(run({"carpet", "--qsq", "2", "--members", "1", "--out", "x.gif"}).code, 2);
  EXPECT_EQ(run({"verify", "--qsq", "2", "--members", "1", "--coeffs", "wobble"}).code, 2);
}
