#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

struct Invocation {
  int code;
  std::string out;
};

Invocation eqfrob(const std::string& args) {
  const std::string cmd = std::string(EQFROB_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p)
    return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p))
    out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string model(const std::string& file) { return std::string(EQFROB_MODELS) + "/" + file; }

} // namespace

TEST(Cli, TorusReportPasses) {
  const Invocation r = eqfrob("report --model builtin:torus --order 3");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, SphereModelFileSolves) {
  const Invocation r = eqfrob("solve --model " + model("s2.json") + " --order 4 --format json");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], "eqfrob-report/1");
  EXPECT_EQ(j["command"], "solve");
  EXPECT_EQ(j["status"], "pass");
  EXPECT_TRUE(j["artifacts"].contains("mc"));
}

TEST(Cli, DeltaKVariantFailsTheAxioms) {
  const Invocation r = eqfrob("axioms --model " + model("s2_delta_k.json"));
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("FAIL gbv.odd_poisson"), std::string::npos) << r.out;
}

TEST(Cli, InputErrorsExitWithTwo) {
  EXPECT_EQ(eqfrob("validate --model /nonexistent.json").code, 2);
  EXPECT_EQ(eqfrob("solve --order 0").code, 2);
  EXPECT_EQ(eqfrob("frobnicate").code, 2);
  EXPECT_EQ(eqfrob("solve --format yaml").code, 2);

  const auto bad = std::filesystem::temp_directory_path() / "eqfrob_cli_bad.json";
  std::ofstream(bad) << R"({"schema": "eqfrob-model/1", "name": "x"})";
  const Invocation r = eqfrob("validate --format json --model " + bad.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(nlohmann::json::parse(r.out)["status"], "input_error");
  std::filesystem::remove(bad);
}

TEST(Cli, CapExceededExitsWithThree) {
  const Invocation r = eqfrob("extend --format json --model " + model("torus_capped.json"));
  EXPECT_EQ(r.code, 3) << r.out;
  EXPECT_EQ(nlohmann::json::parse(r.out)["status"], "cap_exceeded");
  EXPECT_EQ(eqfrob("validate --model " + model("torus_capped.json")).code, 0);
}

TEST(Cli, JsonIsDeterministicApartFromTimings) {
  auto once = [] {
    const Invocation r = eqfrob("report --format json --order 4");
    EXPECT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["timings"].contains("total_ms"));
    j.erase("timings");
    return j.dump();
  };
  EXPECT_EQ(once(), once());
}

TEST(Cli, OutWritesTheReportToAFile) {
  const auto path = std::filesystem::temp_directory_path() / "eqfrob_cli_out.json";
  const Invocation r = eqfrob("potential --model builtin:torus --order 3 --format json --out " + path.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  const auto j = nlohmann::json::parse(f);
  EXPECT_EQ(j["status"], "pass");
  std::filesystem::remove(path);
}
