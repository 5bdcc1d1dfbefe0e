#include <gtest/gtest.h>

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome invoke(const std::string& args) {
  const std::string cmd = std::string(ITSQP_CLI) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) o.out.append(buf, n);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("itsqp_cli_test_" + name);
}

}  // namespace

TEST(Cli, ListProblemsPrintsCorpus) {
  const Outcome o = invoke("list-problems");
  ASSERT_EQ(o.code, 0);
  const auto j = nlohmann::json::parse(o.out);
  ASSERT_TRUE(j.is_array());
  std::vector<std::string> names;
  for (const auto& p : j) names.push_back(p["name"]);
  for (const char* n : {"P1", "P2", "P3"})
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
}

TEST(Cli, RunP1StopsEarly) {
  const Outcome o =
      invoke("run --problem P1 --noise 0 --iters 10000 --seed 7 --variant itsqp-exact");
  ASSERT_EQ(o.code, 0);
  std::istringstream in(o.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header,
            "problem,noise,eta,seed,variant,K_used,best_k,best_c_inf,best_kkt_inf,"
            "final_jtc,wall_ms");
  // K_used is the sixth field.
  std::vector<std::string> fields;
  std::stringstream fs(row);
  for (std::string f; std::getline(fs, f, ',');) fields.push_back(f);
  ASSERT_EQ(fields.size(), 11u);
  EXPECT_LT(std::stoi(fields[5]), 10000);
}

TEST(Cli, BadArgumentsExitTwo) {
  EXPECT_EQ(invoke("run --problem NOPE").code, 2);
  EXPECT_EQ(invoke("run --problem P1 --variant fancy").code, 2);
  EXPECT_EQ(invoke("run --problem P1 --alpha-nu 0.95 --alpha-theta 1 --iters 1").code, 2);
  EXPECT_EQ(invoke("run --problem P1 --format xml").code, 2);
  EXPECT_EQ(invoke("frobnicate").code, 2);
  EXPECT_EQ(invoke("").code, 2);
}

TEST(Cli, UnwritablePathExitsOne) {
  EXPECT_EQ(invoke("run --problem P1 --iters 5 --out /nonexistent/dir/out.csv").code, 1);
}

TEST(Cli, JsonlOutputToFile) {
  const auto path = scratch("run.jsonl");
  const Outcome o = invoke("run --problem P2 --noise 1e-2 --iters 20 --format jsonl --out " +
                           path.string());
  ASSERT_EQ(o.code, 0);
  std::ifstream in(path);
  int lines = 0;
  for (std::string line; std::getline(in, line);) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["problem"], "P2");
    ++lines;
  }
  EXPECT_EQ(lines, 20);
  std::filesystem::remove(path);
}

TEST(Cli, RateCheckAndCompare) {
  const Outcome r = invoke("rate-check --problem P2 --budgets 100,400 --seeds 5");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("P2,jtc_sq,400,"), std::string::npos);
  const Outcome c = invoke("compare --problem P1 --noise 1e-2 --eta 1 --seeds 2 --iters 200");
  ASSERT_EQ(c.code, 0);
  EXPECT_NE(c.out.find("P1,ssqp-style,2,"), std::string::npos) << c.out;
}
