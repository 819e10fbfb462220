#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "json.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(MODREP_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

int count_rows(const nlohmann::json& report) {
  int rows = 0;
  for (const auto& c : report["checks"])
    if (c["name"].get<std::string>().rfind("V[", 0) == 0) ++rows;
  return rows;
}

}  // namespace

TEST_CASE("classify row counts") {
  for (auto [p, n, rows] : {std::array{2, 2, 2}, std::array{3, 2, 6}, std::array{2, 3, 4}}) {
    Run r = run("classify --p " + std::to_string(p) + " --n " + std::to_string(n));
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["suite"] == "classification");
    CHECK(count_rows(j) == rows);
    for (const auto& c : j["checks"]) {
      CHECK(c.contains("paper_ref"));
      CHECK(c.contains("witness"));
    }
  }
}

TEST_CASE("identical configuration gives identical output") {
  const std::string args = "relations --p 3 --rep sym:1,det:0 --levi none --depth 1 --seed 5";
  Run a = run(args), b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(run(args + " --jobs 2").out == a.out);
}

TEST_CASE("tsv output") {
  Run r = run("satake --p 2 --rep steinberg --levi none --s 1,0 --depth 1 --format tsv");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("config\tsuite\tname\tpaper_ref\tstatus\twitness\n", 0) == 0);
  CHECK(r.out.find("\tfail\t") == std::string::npos);
}

TEST_CASE("exit code reflects failed checks") {
  CHECK(run("gl2-remark --p 3 --depth 1").code == 0);
  Run r = run("gl2-remark --p 2 --depth 2");
  CHECK(r.code == 1);
  auto j = nlohmann::json::parse(r.out);
  bool has_fail = false;
  for (const auto& c : j["checks"]) has_fail = has_fail || c["status"] == "fail";
  CHECK(has_fail);
}

TEST_CASE("usage errors") {
  CHECK(run("classify --p 4").code == 2);
  CHECK(run("relations --p 2 --s 0,1 --levi none").code == 2);
  CHECK(run("relations --p 2 --levi 1").code == 2);
  CHECK(run("relations --p 2 --rep sym:5").code == 2);
  CHECK(run("").code != 0);
}

TEST_CASE("output file") {
  auto path = std::filesystem::temp_directory_path() / "modrep_cli_test.json";
  std::filesystem::remove(path);
  Run r = run("classify --p 2 --n 2 --out " + path.string());
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  auto j = nlohmann::json::parse(f);
  CHECK(count_rows(j) == 2);
  std::filesystem::remove(path);
}
