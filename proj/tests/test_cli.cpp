#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "support.hpp"

namespace {

struct Result {
  int code = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Result run(const std::vector<std::string>& args) {
  std::string cmd = quote(DELP_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string task(const char* name) { return test::task_path(name); }

struct ScratchDir {
  std::filesystem::path path =
      std::filesystem::temp_directory_path() / ("delp_cli_test_" + std::to_string(::getpid()));
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

std::filesystem::path scratch(const std::string& name) {
  static ScratchDir dir;
  std::filesystem::create_directories(dir.path);
  return dir.path / name;
}

nlohmann::json parse_json(const Result& r) {
  auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.at("schema_version") == 1);
  return j;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check") {
  auto t = task("birthday_two_offices.eplan");
  auto yes = run({"check", t, "--formula", "At(Father,Home)"});
  CHECK(yes.code == 0);
  CHECK(yes.out == "true\n");
  auto no = run({"check", t, "--formula", "K[Father] At(Present,PO1)", "--format", "json"});
  CHECK(no.code == 0);
  auto j = parse_json(no);
  CHECK(j.at("command") == "check");
  CHECK(j.at("value") == false);
  CHECK(run({"check", t, "--formula", "Bogus"}).code == 2);
  CHECK(run({"check", "/nonexistent.eplan", "--formula", "p"}).code == 2);
  CHECK(run({"check", t}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("solve exit codes and JSON") {
  auto t = task("birthday_two_offices.eplan");
  auto seq = run({"solve", t, "--mode", "seq", "--max-depth", "8", "--format", "json"});
  REQUIRE(seq.code == 0);
  auto j = parse_json(seq);
  CHECK(j.at("solved") == true);
  CHECK(j.at("length") == 6);
  CHECK(j.at("plan").at(0) == "Go(Father,Home,PO1)");
  CHECK(j.at("validation").at("valid") == true);

  CHECK(run({"solve", t, "--mode", "seq", "--max-depth", "3"}).code == 1);
  CHECK(run({"solve", t, "--mode", "seq"}).code == 2);
  CHECK(run({"solve", t, "--mode", "bogus", "--max-depth", "3"}).code == 2);

  auto cls = run({"solve", task("birthday_strips.eplan"), "--mode", "classical", "--max-depth", "6", "--format", "json"});
  REQUIRE(cls.code == 0);
  CHECK(parse_json(cls).at("length") == 4);

  auto pol = run({"solve", t, "--mode", "policy", "--max-depth", "8", "--format", "json"});
  REQUIRE(pol.code == 0);
  auto pj = parse_json(pol);
  CHECK(pj.at("policy").at("format") == "delp-policy");
  std::multiset<std::size_t> lengths;
  for (const auto& run : pj.at("executions")) lengths.insert(run.at("actions").size());
  CHECK(lengths == std::multiset<std::size_t>{4, 6});
}

TEST_CASE("apply, contract, dot and print") {
  auto t = task("birthday_two_offices.eplan");
  auto a = run({"apply", t, "--actions", "Go(Father,Home,PO1),TryPickUp(Father,Present,PO1)", "--contract"});
  CHECK(a.code == 0);
  CHECK(a.out.find("state") == 0);
  CHECK(run({"apply", t, "--actions", "Wrap(Father,Present)"}).code == 3);
  CHECK(run({"apply", t, "--actions", "Fly(Father)"}).code == 2);
  auto f = run({"apply", t, "--actions", "Go(Father,Home,PO1)", "--formula", "At(Father,PO1)"});
  CHECK(f.code == 0);
  CHECK(f.out.find("true") != std::string::npos);

  CHECK(run({"contract", t}).code == 0);
  auto dot = run({"dot", t});
  CHECK(dot.code == 0);
  CHECK(dot.out.rfind("digraph", 0) == 0);
  auto adot = run({"dot", task("birthday_private_ask.eplan"), "--action", "Ask(Father,Employee)"});
  CHECK(adot.code == 0);
  CHECK(adot.out.find("Employee2") != std::string::npos);

  auto printed = run({"print", t});
  REQUIRE(printed.code == 0);
  auto reparsed = delp::parse_task(printed.out);
  CHECK(reparsed.ok());
}

TEST_CASE("validate plan and policy files") {
  auto t = task("birthday_two_offices.eplan");
  auto good = scratch("good.plan");
  std::ofstream(good) << "Go(Father,Home,PO1)\nTryPickUp(Father,Present,PO1)\nGo(Father,PO1,PO2)\n"
                         "TryPickUp(Father,Present,PO2)\nGo(Father,PO2,Home)\nWrap(Father,Present)\n";
  CHECK(run({"validate", t, "--plan", good.string()}).code == 0);
  auto bad = scratch("bad.plan");
  std::ofstream(bad) << "Go(Father,Home,PO1)\nWrap(Father,Present)\n";
  auto r = run({"validate", t, "--plan", bad.string(), "--format", "json"});
  CHECK(r.code == 3);
  CHECK(parse_json(r).at("valid") == false);

  auto policy = scratch("policy.json");
  REQUIRE(run({"solve", t, "--mode", "policy", "--max-depth", "8", "-o", policy.string()}).code == 0);
  CHECK(run({"validate", t, "--policy", policy.string()}).code == 0);
  auto garbage = scratch("garbage.json");
  std::ofstream(garbage) << "{not json";
  CHECK(run({"validate", t, "--policy", garbage.string()}).code == 2);
  CHECK(run({"validate", t}).code == 2);
}

TEST_CASE("execute is deterministic for a seed") {
  auto t = task("birthday_two_offices.eplan");
  auto policy = scratch("exec_policy.json");
  REQUIRE(run({"solve", t, "--mode", "policy", "--max-depth", "8", "-o", policy.string()}).code == 0);
  auto first = run({"execute", t, "--policy", policy.string(), "--seed", "1", "--format", "json"});
  auto second = run({"execute", t, "--policy", policy.string(), "--seed", "1", "--format", "json"});
  CHECK(first.code == 0);
  CHECK(first.out == second.out);
  auto j = parse_json(first);
  CHECK(j.at("outcome") == "success");
  auto direct = run({"execute", t, "--max-depth", "8", "--seed", "1", "--start", "1"});
  CHECK(direct.code == 0);
  CHECK(direct.out.find("6 steps") != std::string::npos);
}

TEST_CASE("thread and backend options") {
  auto t = task("birthday_ask.eplan");
  auto serial = run({"--backend", "serial", "solve", t, "--mode", "policy", "--max-depth", "8", "--format", "json"});
  auto omp = run({"--backend", "openmp", "--threads", "3", "solve", t, "--mode", "policy", "--max-depth", "8",
                  "--format", "json"});
  REQUIRE(serial.code == 0);
  REQUIRE(omp.code == 0);
  CHECK(parse_json(serial).at("policy") == parse_json(omp).at("policy"));
  CHECK(run({"--backend", "gpu", "check", t, "--formula", "top"}).code == 2);
}

}  // TEST_SUITE
