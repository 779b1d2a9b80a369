#include "crnreal/serialize.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string output;  // stdout and stderr interleaved
};

Run crnrealc(const std::string& args) {
  const std::string cmd = std::string(CRNREALC_PATH) + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return {-1, "popen failed"};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sample(const char* name) { return std::string(CRNREAL_SAMPLES_DIR) + "/" + name; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("crnrealc_test_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const char* name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, CompileRationalWritesCrnAndManifest) {
  const auto r = crnrealc("compile --rational 1/2 --out " + path("half.crn"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("species: 1"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("reactions: 2"), std::string::npos);
  const std::string crn = slurp(path("half.crn"));
  EXPECT_NE(crn.find("designated X"), std::string::npos) << crn;
  EXPECT_NE(crn.find("# command: compile"), std::string::npos) << crn;
  const auto doc = crnreal::Json::parse(slurp(path("half.json")));
  EXPECT_DOUBLE_EQ(doc["program"]["magnitude"].get<double>(), 0.5);
  EXPECT_EQ(doc["manifest"]["tool_version"].get<std::string>(), crnreal::tool_version);
  EXPECT_TRUE(doc["manifest"].contains("timestamp"));
  // No stray temporaries left behind.
  for (const auto& e : fs::directory_iterator(dir_)) EXPECT_EQ(e.path().string().find(".tmp."), std::string::npos);
}

TEST_F(Cli, CompileIsDeterministic) {
  ASSERT_EQ(crnrealc("compile --expr \"sqrt(2)-1\" --out " + path("a.crn")).code, 0);
  ASSERT_EQ(crnrealc("compile --expr \"sqrt(2)-1\" --out " + path("b.crn")).code, 0);
  std::string a = slurp(path("a.crn")), b = slurp(path("b.crn"));
  // Only the output file names in the header differ.
  auto strip = [](std::string s, const std::string& from) {
    for (auto p = s.find(from); p != std::string::npos; p = s.find(from)) s.replace(p, from.size(), "?");
    return s;
  };
  EXPECT_EQ(strip(strip(a, "a.crn"), "a.json"), strip(strip(b, "b.crn"), "b.json"));
}

TEST_F(Cli, CompileRejectsBadSpecs) {
  EXPECT_EQ(crnrealc("compile --rational 1/0 --out " + path("x.crn")).code, 2);
  EXPECT_EQ(crnrealc("compile --out " + path("x.crn")).code, 2);
  EXPECT_EQ(crnrealc("compile --rational 1 --expr 2 --out " + path("x.crn")).code, 2);
  EXPECT_EQ(crnrealc("compile --poly \"x^2+1\" --out " + path("x.crn")).code, 2);
  EXPECT_EQ(crnrealc("compile --poly \"x^2-2\" --interval 2,3 --out " + path("x.crn")).code, 2);
  EXPECT_EQ(crnrealc("compile --expr \"1/(1-1)\" --out " + path("x.crn")).code, 2);
  EXPECT_EQ(crnrealc("compile --rational 1/2 --speedup 0 --out " + path("x.crn")).code, 2);
  EXPECT_FALSE(fs::exists(path("x.crn")));
}

TEST_F(Cli, CompileWithAutoSpeedupVerifies) {
  const auto c = crnrealc("compile --poly \"x^2-2\" --interval 1,2 --speedup auto --out " + path("s.crn"));
  ASSERT_EQ(c.code, 0) << c.output;
  EXPECT_NE(c.output.find("auto chose"), std::string::npos);
  EXPECT_NE(c.output.find("reactions: 2"), std::string::npos) << c.output;
  const auto v = crnrealc("verify " + path("s.crn") + " --target manifest");
  EXPECT_EQ(v.code, 0) << v.output;
  EXPECT_NE(v.output.find("all conditions hold"), std::string::npos);
}

TEST_F(Cli, SimulateCsvAndJson) {
  const auto r = crnrealc("simulate " + sample("rational_1_2.crn") + " --t-end 2 --out " + path("t.csv"));
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string csv = slurp(path("t.csv"));
  EXPECT_EQ(csv.substr(0, 4), "t,X\n");
  EXPECT_TRUE(fs::exists(path("t.csv.manifest.json")));

  const auto j = crnrealc("simulate " + sample("rational_1_2.crn") + " --t-end 1 --format json --rel-tol 1/10000000000");
  ASSERT_EQ(j.code, 0) << j.output;
  const auto doc = crnreal::Json::parse(j.output);
  EXPECT_EQ(doc["trajectory"]["integrator"]["status"], "completed");
  EXPECT_EQ(doc["manifest"]["parameters"]["rel_tol"], "1/10000000000");
}

TEST_F(Cli, CompilePolyFromFile) {
  {
    std::ofstream(path("p.txt")) << "2*x^2 - 1\n";
  }
  const auto r = crnrealc("compile --poly " + path("p.txt") + " --interval 0,1 --out " + path("p.crn"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("~ 0.7071067811"), std::string::npos) << r.output;
}

TEST_F(Cli, SimulateEndpointsAndEmptyNetwork) {
  const auto r = crnrealc("simulate " + sample("inv_sqrt2.crn") + " --t-end 20 --format json");
  ASSERT_EQ(r.code, 0) << r.output;
  const auto doc = crnreal::Json::parse(r.output);
  EXPECT_NEAR(doc["trajectory"]["states"].back()[0].get<double>(), 0.7071068, 1e-7);

  {
    std::ofstream(path("empty.crn")) << "species A, B\ndesignated A\n";
  }
  const auto e = crnrealc("simulate " + path("empty.crn") + " --t-end 1");
  ASSERT_EQ(e.code, 0) << e.output;
  std::istringstream rows(e.output);
  std::string line;
  std::getline(rows, line);
  EXPECT_EQ(line, "t,A,B");
  int n = 0;
  while (std::getline(rows, line)) {
    EXPECT_EQ(line.substr(line.find(',')), ",0,0") << line;
    ++n;
  }
  EXPECT_GE(n, 11);  // the 0.1 grid plus any integrator steps
}

TEST_F(Cli, SimulateReportsDivergence) {
  const auto r = crnrealc("simulate " + sample("misordered_subtract.crn") + " --t-end 60 --out " + path("d.csv"));
  EXPECT_EQ(r.code, 3) << r.output;
  EXPECT_NE(r.output.find("unbounded"), std::string::npos) << r.output;
}

TEST_F(Cli, VerifyPasses) {
  const auto r = crnrealc("verify " + sample("sqrt2_fast.crn") + " --target manifest");
  EXPECT_EQ(r.code, 0) << r.output;
  const auto q = crnrealc("verify " + sample("rational_1_2.crn") + " --target 1/2 --report " + path("v.json"));
  EXPECT_EQ(q.code, 0) << q.output;
  EXPECT_TRUE(crnreal::Json::parse(slurp(path("v.json")))["failed"].empty());
}

TEST_F(Cli, VerifyNamesFailedCondition) {
  const auto slow = crnrealc("verify " + sample("slow_reciprocal.crn") + " --target 2");
  EXPECT_EQ(slow.code, 4) << slow.output;
  EXPECT_NE(slow.output.find("convergence: FAILED, first failing t = "), std::string::npos) << slow.output;

  const auto k = crnrealc("verify " + sample("non_integral.crn") + " --target 3/2");
  EXPECT_EQ(k.code, 4) << k.output;
  EXPECT_NE(k.output.find("integrality: FAILED"), std::string::npos) << k.output;

  const auto m = crnrealc("verify " + sample("misordered_subtract.crn") + " --target 1");
  EXPECT_EQ(m.code, 4) << m.output;
  EXPECT_NE(m.output.find("boundedness: FAILED"), std::string::npos) << m.output;

  const auto wrong = crnrealc("verify " + sample("rational_1_2.crn") + " --target 0.6");
  EXPECT_EQ(wrong.code, 4) << wrong.output;
}

TEST_F(Cli, AnalyzeVerdicts) {
  const auto s = crnrealc("analyze " + sample("inv_sqrt2.crn"));
  ASSERT_EQ(s.code, 0) << s.output;
  const auto doc = crnreal::Json::parse(s.output);
  EXPECT_EQ(doc["verdict"], "exponentially_stable");
  EXPECT_NEAR(doc["eigenvalues"][0][0].get<double>(), -2.8284271, 1e-6);

  const auto a = crnrealc("analyze " + sample("add_half_third.crn"));
  ASSERT_EQ(a.code, 0) << a.output;
  const auto spectrum = crnreal::Json::parse(a.output)["eigenvalues"];
  ASSERT_EQ(spectrum.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(spectrum[i][0].get<double>(), -3.0 + i, 1e-9);

  // Degenerate: a whole curve of equilibria passes through the limit point.
  const auto t = crnrealc("analyze " + sample("transcendental.crn"));
  EXPECT_EQ(t.code, 5) << t.output;
  EXPECT_NE(t.output.find("inconclusive"), std::string::npos);
}

TEST_F(Cli, InputErrors) {
  EXPECT_EQ(crnrealc("simulate " + path("missing.crn")).code, 1);
  {
    std::ofstream(path("bad.crn")) << "0 ->{1} X\nX -> ->\n";
  }
  const auto r = crnrealc("simulate " + path("bad.crn"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("line 2"), std::string::npos) << r.output;
  EXPECT_EQ(crnrealc("verify " + sample("rational_1_2.crn") + " --target abc").code, 2);
  EXPECT_EQ(crnrealc("frobnicate").code, 2);
}
