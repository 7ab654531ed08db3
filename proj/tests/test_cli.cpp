#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef FSV_CLI_PATH
#define FSV_CLI_PATH "fsv"
#endif

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FSV_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_file(const std::string& path, const std::string& text) {
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::ofstream f(path);
  f << text;
}

const char* kGoodScenario = R"({
  "domain": {"dim": 1, "min": [0.0], "max": [1.0]},
  "resolution": 8,
  "s": 0.5,
  "q": {"type": "constant", "value": 2.0},
  "p": {"type": "constant", "value": 2.0},
  "task": "modular",
  "payload": {"u": {"expr": ["*", "x", "x"]}},
  "output": "build/test_out/cli_report.json"
})";

}  // namespace

TEST_CASE("cli exit codes") {
  SECTION("version succeeds") { CHECK(run_cli("version") == 0); }
  SECTION("run on a valid scenario writes the report and exits 0") {
    write_file("build/test_out/cli_ok.json", kGoodScenario);
    CHECK(run_cli("run build/test_out/cli_ok.json") == 0);
    std::ifstream rep("build/test_out/cli_report.json");
    CHECK(rep.good());
  }
  SECTION("validate on a valid scenario exits 0") {
    write_file("build/test_out/cli_ok.json", kGoodScenario);
    CHECK(run_cli("validate build/test_out/cli_ok.json") == 0);
  }
  SECTION("validation errors exit 1") {
    write_file("build/test_out/cli_bad.json", R"({"domain": 3})");
    CHECK(run_cli("validate build/test_out/cli_bad.json") == 1);
    CHECK(run_cli("run build/test_out/cli_bad.json") == 1);
    CHECK(run_cli("run /nonexistent.json") == 1);
  }
  SECTION("task failure exits 2") {
    std::string failing = kGoodScenario;
    const std::string from = "\"task\": \"modular\",\n  \"payload\": {\"u\": {\"expr\": [\"*\", \"x\", \"x\"]}},";
    const std::string to =
        "\"task\": \"capacity\",\n  \"payload\": {\"set\": {\"cells\": [3]}, "
        "\"solver\": {\"max_iterations\": 1, \"pg_tol\": 1e-300, \"objective_tol\": 1e-300}},";
    failing.replace(failing.find(from), from.size(), to);
    write_file("build/test_out/cli_fail.json", failing);
    CHECK(run_cli("run build/test_out/cli_fail.json") == 2);
  }
}

TEST_CASE("cli reruns are byte-identical in the deterministic section") {
  write_file("build/test_out/cli_ok.json", kGoodScenario);
  REQUIRE(run_cli("run build/test_out/cli_ok.json") == 0);
  std::ifstream first("build/test_out/cli_report.json");
  std::string a((std::istreambuf_iterator<char>(first)), std::istreambuf_iterator<char>());
  REQUIRE(run_cli("run build/test_out/cli_ok.json") == 0);
  std::ifstream second("build/test_out/cli_report.json");
  std::string b((std::istreambuf_iterator<char>(second)), std::istreambuf_iterator<char>());
  const auto det = [](const std::string& s) {
    return nlohmann::json::parse(s)["deterministic"].dump();
  };
  CHECK(det(a) == det(b));
}
