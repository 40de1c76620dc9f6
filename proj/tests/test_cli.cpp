// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

// End-to-end checks of the command-line tool. Each case spawns the built
// binary through the shell.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const std::string kTool = MIXGUARD_CLI_PATH;
const std::string kData = MIXGUARD_DATA_DIR;

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + kTool + "' " + args + " 2>&1";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Fresh scratch directory per test case.
class Scratch {
 public:
  explicit Scratch(const std::string& name) : dir_(fs::temp_directory_path() / ("mixguard_cli_" + name)) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string operator/(const std::string& leaf) const { return (dir_ / leaf).string(); }

 private:
  fs::path dir_;
};

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  return out;
}

// Frames of a detections file as (raw, moe) string pairs.
std::vector<std::pair<std::string, std::string>> raw_and_filtered(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(slurp(path));
  for (std::string line; std::getline(in, line);) {
    const auto j = Json::parse(line);
    if (j.contains("raw")) out.emplace_back(j.at("raw").at("moe").dump(), j.at("moe").dump());
  }
  return out;
}

bool any_difference(const std::vector<std::pair<std::string, std::string>>& frames) {
  for (const auto& [raw, moe] : frames)
    if (raw != moe) return true;
  return false;
}

void simulate_and_train(const Scratch& s) {
  REQUIRE(run("simulate --suite '" + kData + "/pouring_suite.json' --out '" + s / "bundle" + "'").code == 0);
  REQUIRE(run("train --data '" + s / "bundle/train.jsonl" + "' --k 10 --alpha 2 --seed 7 --out '" + s / "model.json" +
              "'")
              .code == 0);
}

std::string detect_args(const Scratch& s) {
  return "detect --model '" + s / "model.json" + "' --schedule '" + s / "bundle/schedule.json" + "' --runs '" +
         s / "bundle/runs.jsonl" + "'";
}

}  // namespace

TEST_CASE("exit codes") {
  const Scratch s("codes");
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("train --out '" + s / "m.json" + "'").code == 2);
  CHECK(run("train --data x --k 0 --out y").code == 2);
  CHECK(run("eval").code == 2);
  CHECK(run("simulate --out '" + s / "b" + "'").code == 2);

  const auto missing = run("train --data '" + s / "absent.jsonl" + "' --out '" + s / "m.json" + "'");
  CHECK(missing.code == 1);
  CHECK(missing.out.find("absent.jsonl") != std::string::npos);

  CHECK(run("--help").code == 0);
  CHECK(run("--version").code == 0);
}

TEST_CASE("simulate, train, detect and eval are reproducible") {
  const Scratch s("repro");
  simulate_and_train(s);
  REQUIRE(run("simulate --suite '" + kData + "/pouring_suite.json' --out '" + s / "bundle2" + "'").code == 0);
  CHECK(read_tree(s / "bundle") == read_tree(s / "bundle2"));

  REQUIRE(run("train --data '" + s / "bundle/train.jsonl" + "' --k 10 --alpha 2 --seed 7 --out '" + s / "model2.json" +
              "'")
              .code == 0);
  const std::string model = slurp(s / "model.json");
  CHECK(model == slurp(s / "model2.json"));
  CHECK(model.find("\"seed\"") != std::string::npos);
  CHECK(model.find("sha256") != std::string::npos);

  for (const char* name : {"d1.jsonl", "d2.jsonl"})
    REQUIRE(run(detect_args(s) + " --out '" + s / name + "'").code == 0);
  CHECK(slurp(s / "d1.jsonl") == slurp(s / "d2.jsonl"));

  const auto report = run("eval --detections '" + s / "d1.jsonl" + "' --out '" + s / "r.json" + "'");
  REQUIRE(report.code == 0);
  CHECK(report.out.find("moe") != std::string::npos);
  const auto j = Json::parse(slurp(s / "r.json"));
  CHECK(j.at("meta").contains("version"));
  CHECK(j.at("meta").contains("input.detections.sha256"));
  CHECK(j.at("tracks").at("moe").at("f1").get<double>() >= j.at("tracks").at("gmr").at("f1").get<double>());
}

TEST_CASE("window 1 disables filtering; the config file supplies defaults the flags override") {
  const Scratch s("window");
  simulate_and_train(s);

  REQUIRE(run(detect_args(s) + " --window 1 --out '" + s / "w1.jsonl" + "'").code == 0);
  const auto w1 = raw_and_filtered(s / "w1.jsonl");
  REQUIRE_FALSE(w1.empty());
  CHECK_FALSE(any_difference(w1));

  REQUIRE(run(detect_args(s) + " --out '" + s / "w8.jsonl" + "'").code == 0);
  CHECK(any_difference(raw_and_filtered(s / "w8.jsonl")));

  {
    std::ofstream cfg(s / "cfg.json");
    cfg << R"({"detect": {"window": 1}})";
  }
  REQUIRE(run(detect_args(s) + " --config '" + s / "cfg.json" + "' --out '" + s / "c1.jsonl" + "'").code == 0);
  CHECK_FALSE(any_difference(raw_and_filtered(s / "c1.jsonl")));

  REQUIRE(run(detect_args(s) + " --config '" + s / "cfg.json" + "' --window 8 --out '" + s / "c8.jsonl" + "'").code ==
          0);
  CHECK(any_difference(raw_and_filtered(s / "c8.jsonl")));
}

TEST_CASE("single-run simulation") {
  const Scratch s("single");
  const auto r = run("simulate --archetype perturbation --magnitude 20 --seed 3 --out '" + s / "b" + "'");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(s / "b/runs.jsonl"));
  CHECK(run("simulate --archetype perturbation --magnitude 20 --seed 3 --out '" + s / "c" + "'").code == 0);
  CHECK(read_tree(s / "b") == read_tree(s / "c"));
  CHECK(run("simulate --archetype no_such_thing --out '" + s / "d" + "'").code != 0);
}

TEST_CASE("validate-schedule") {
  const Scratch s("schedule");
  REQUIRE(run("simulate --suite '" + kData + "/pouring_suite.json' --out '" + s / "bundle" + "'").code == 0);
  const auto ok = run("validate-schedule --schedule '" + s / "bundle/schedule.json" + "'");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("ok") != std::string::npos);

  {
    std::ofstream bad(s / "bad.json");
    bad << R"({"demo":[{"s_low":0.0,"s_high":0.4,"allowed":["pre"]},{"s_low":0.5,"s_high":1.0,"allowed":["effect"]}]})";
  }
  const auto gap = run("validate-schedule --schedule '" + s / "bad.json" + "'");
  CHECK(gap.code == 1);
  CHECK(gap.out.find("gap") != std::string::npos);
  CHECK(run("validate-schedule").code == 2);
}

TEST_CASE("log verbosity from the environment") {
  const Scratch s("log");
  REQUIRE(run("simulate --suite '" + kData + "/pouring_suite.json' --out '" + s / "bundle" + "'").code == 0);
  const std::string args = "validate-schedule --schedule '" + s / "bundle/schedule.json" + "'";
  CHECK(run(args, "MIXGUARD_LOG=debug").out.find("debug:") != std::string::npos);
  CHECK(run(args, "MIXGUARD_LOG=warn").out.find("debug:") == std::string::npos);
}
