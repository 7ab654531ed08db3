#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "fsv/fsv.hpp"

namespace {

int cmd_validate(const std::string& path) {
  const fsv::ParseOutcome out = fsv::parse_scenario(path);
  if (out.ok()) {
    std::printf("%s: valid (task %s)\n", path.c_str(), out.scenario->task.c_str());
    return 0;
  }
  for (const std::string& e : out.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
  return 1;
}

int cmd_run(const std::string& path) {
  const fsv::ParseOutcome out = fsv::parse_scenario(path);
  if (!out.ok()) {
    for (const std::string& e : out.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
    return 1;
  }
  const fsv::Scenario& sc = *out.scenario;
  try {
    const fsv::RunReport rep = fsv::run_scenario(sc);
    fsv::emit_report(rep, sc.output);
    for (const auto& e : rep.deterministic["results"]) {
      std::printf("%s: %s\n", e["name"].get<std::string>().c_str(),
                  e["verdict"].get<std::string>().c_str());
      if (e.contains("message"))
        std::printf("  %s\n", e["message"].get<std::string>().c_str());
    }
    std::printf("report: %s\n", sc.output.c_str());
    return fsv::report_passed(rep) ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional variable-exponent Sobolev modulars, norms, and relative capacity"};
  app.require_subcommand(1);

  std::string run_path, validate_path;
  CLI::App* run = app.add_subcommand("run", "run a scenario file and write its report");
  run->add_option("scenario", run_path, "scenario JSON file")->required();
  CLI::App* validate = app.add_subcommand("validate", "check a scenario file and report every error");
  validate->add_option("scenario", validate_path, "scenario JSON file")->required();
  CLI::App* version = app.add_subcommand("version", "print the tool version");

  CLI11_PARSE(app, argc, argv);

  if (version->parsed()) {
    std::printf("%s %s\n", fsv::kToolName, fsv::kToolVersion);
    return 0;
  }
  if (validate->parsed()) return cmd_validate(validate_path);
  return cmd_run(run_path);
}
