#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fsv/capacity.hpp"
#include "fsv/norms.hpp"
#include "fsv/scenario.hpp"
#include "fsv/trace.hpp"
#include "fsv/version.hpp"

namespace fsv {

/// Deterministic payload (byte-identical across re-runs of the same
/// scenario) plus wall-clock data kept in a separate section so diff-based
/// regression testing works.
struct RunReport {
  nlohmann::json deterministic;
  nlohmann::json timing;
};

namespace report_detail {

using nlohmann::json;

inline json mask_to_json(const SetMask& m) {
  json j = json::object();
  j["cells"] = m.cell_indices();
  j["boundary"] = m.node_indices();
  return j;
}

inline json norm_to_json(const NormReport& n) {
  json j = json::object();
  j["value"] = n.value;
  j["iterations"] = n.iterations;
  j["residual"] = n.residual;
  return j;
}

inline void check_finite(const json& j, const std::string& where) {
  if (j.is_number_float() && !std::isfinite(j.get<double>()))
    throw EvaluationError("report contains a non-finite number at " + where);
  if (j.is_object())
    for (auto& [k, v] : j.items()) check_finite(v, where + "." + k);
  if (j.is_array())
    for (std::size_t i = 0; i < j.size(); ++i)
      check_finite(j[i], where + "[" + std::to_string(i) + "]");
}

inline json run_task(const Scenario& sc) {
  namespace sd = scenario_detail;
  json values = json::object();

  auto grid = Grid::build(sc.domain, sc.resolutions.front());
  const ExponentField field = build_exponent_field(sc, grid);
  const SolverOptions opts = sd::solver_from_json(sc.payload["solver"]);

  if (sc.task == "modular") {
    const GridFunction u = sd::function_from_json(sc.payload["u"], grid);
    const ModularBreakdown b = sobolev_modular(u, field, sc.s);
    values["lebesgue"] = b.lebesgue;
    values["gagliardo"] = b.gagliardo;
    values["total"] = b.total;
  } else if (sc.task == "norm") {
    const GridFunction u = sd::function_from_json(sc.payload["u"], grid);
    const NormReport lux = luxembourg_norm(u, field);
    const NormReport semi = gagliardo_seminorm(u, field, sc.s);
    const NormReport rho = modular_norm(u, field, sc.s);
    values["luxembourg"] = norm_to_json(lux);
    values["gagliardo_seminorm"] = norm_to_json(semi);
    values["sobolev_norm"] = lux.value + semi.value;
    values["modular_norm"] = norm_to_json(rho);
  } else if (sc.task == "capacity") {
    const SetMask set = sd::mask_from_json(sc.payload["set"], *grid);
    const CapacityResult r = capacity_set(set, grid, field, sc.s, opts);
    values["value"] = r.value;
    values["iterations"] = r.iterations;
    values["pg_residual"] = r.pg_residual;
    values["converged"] = r.converged;
    values["admissible_set"] = mask_to_json(r.admissible_set);
    values["equilibrium"] = json::object();
    values["equilibrium"]["cells"] = r.equilibrium.cell_values();
    values["equilibrium"]["boundary"] = r.equilibrium.node_values();
  } else if (sc.task == "axioms") {
    std::vector<SetMask> sets;
    for (const json& mj : sc.payload["sets"]) sets.push_back(sd::mask_from_json(mj, *grid));
    const AxiomReport rep = verify_capacity_axioms(sets, ModularEvaluator(grid, field, sc.s),
                                                   opts, sc.payload["tolerance"].get<double>());
    values["max_capacity"] = rep.max_capacity;
    values["tolerance"] = rep.tolerance;
    values["all_pass"] = rep.all_pass;
    values["checks"] = json::array();
    for (const AxiomCheck& c : rep.checks) {
      json cj = json::object();
      cj["property"] = c.property;
      cj["margin"] = c.margin;
      cj["pass"] = c.pass;
      cj["detail"] = c.detail;
      values["checks"].push_back(cj);
    }
    if (!rep.all_pass) values["verdict_override"] = "fail";
  } else if (sc.task == "certificate") {
    std::vector<GridFunction> seq;
    for (const json& fj : sc.payload["sequence"]) seq.push_back(sd::function_from_json(fj, grid));
    const ConvergenceCertificate cert = quasi_convergence_certificate(
        seq, ModularEvaluator(grid, field, sc.s), sc.payload["tail_start"].get<int>());
    values["verdict"] = cert.verdict;
    values["tail_start"] = cert.tail_start;
    values["exceptional_bound"] = cert.exceptional_bound;
    values["exceptional_set"] = mask_to_json(cert.exceptional_set);
    values["records"] = json::array();
    for (const CertificateRecord& r : cert.records) {
      json rj = json::object();
      rj["index"] = r.index;
      rj["threshold"] = r.threshold;
      rj["budget"] = r.budget;
      rj["bound"] = r.bound;
      rj["within"] = r.within;
      rj["level_set"] = mask_to_json(r.level_set);
      values["records"].push_back(rj);
    }
    if (!cert.verdict) values["verdict_override"] = "fail";
  } else if (sc.task == "boundary") {
    const PolarityReport rep =
        boundary_polarity_check(sc.domain, sc.resolutions, field, sc.s, opts);
    values["verdict"] = rep.verdict;
    values["series"] = json::array();
    for (const PolarityEntry& e : rep.series) {
      json ej = json::object();
      ej["resolution"] = std::vector<int>{e.resolution[0], e.resolution[1]};
      ej["value"] = e.value;
      values["series"].push_back(ej);
    }
  } else if (sc.task == "removability") {
    const SetMask removed = sd::mask_from_json(sc.payload["removed"], *grid);
    std::vector<SetMask> tests;
    for (const json& mj : sc.payload["test_sets"]) tests.push_back(sd::mask_from_json(mj, *grid));
    const RemovabilityReport rep = removable_set_check(
        removed, tests, grid, field, sc.s, sc.payload["tau"].get<double>(), opts);
    values["capacity_of_removed"] = rep.capacity_of_removed;
    values["base_values"] = rep.base_values;
    values["reduced_values"] = rep.reduced_values;
    values["max_discrepancy"] = rep.max_discrepancy;
    values["tau"] = rep.tau;
    values["removable"] = rep.removable;
  } else {
    throw UsageError("unknown task '" + sc.task + "'");
  }
  return values;
}

}  // namespace report_detail

/// Runs the scenario's task. Task errors become result entries with verdict
/// "fail" (or "inapplicable" for a rejected certificate precondition);
/// the report is produced either way. Deterministic for a fixed scenario.
inline RunReport run_scenario(const Scenario& sc) {
  using nlohmann::json;
  const auto t0 = std::chrono::steady_clock::now();

  json entry = json::object();
  entry["name"] = sc.task;
  try {
    json values = report_detail::run_task(sc);
    std::string verdict = "pass";
    if (values.contains("verdict_override")) {
      verdict = values["verdict_override"].get<std::string>();
      values.erase("verdict_override");
    }
    entry["verdict"] = verdict;
    entry["values"] = values;
  } catch (const CertificateInapplicableError& e) {
    entry["verdict"] = "inapplicable";
    entry["message"] = e.what();
    entry["values"] = json::object();
    entry["values"]["index"] = e.index();
    entry["values"]["gap_norm"] = e.gap_norm();
    entry["values"]["allowed"] = e.allowed();
  } catch (const NonConvergenceError& e) {
    entry["verdict"] = "fail";
    entry["message"] = e.what();
    entry["values"] = json::object();
    entry["values"]["best_value"] = e.best().value;
    entry["values"]["iterations"] = e.best().iterations;
    entry["values"]["pg_residual"] = e.best().pg_residual;
  } catch (const Error& e) {
    entry["verdict"] = "fail";
    entry["message"] = e.what();
    entry["values"] = json::object();
  }

  RunReport rep;
  rep.deterministic = json::object();
  rep.deterministic["tool"] = json::object();
  rep.deterministic["tool"]["name"] = kToolName;
  rep.deterministic["tool"]["version"] = kToolVersion;
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a_hash(sc.canonical.dump())));
    rep.deterministic["scenario_hash"] = std::string("fnv1a:") + buf;
  }
  rep.deterministic["seed"] = sc.seed;
  rep.deterministic["task"] = sc.task;
  rep.deterministic["results"] = json::array({entry});

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.timing = json::object();
  rep.timing["total_seconds"] = secs;
  rep.timing["tasks"] = json::array();
  rep.timing["tasks"].push_back(json::object({{"name", sc.task}, {"seconds", secs}}));
  return rep;
}

inline bool report_passed(const RunReport& rep) {
  for (const auto& e : rep.deterministic["results"])
    if (e["verdict"].get<std::string>() != "pass") return false;
  return true;
}

/// Writes the report JSON; refinement-series results additionally produce a
/// sibling CSV ("resolution,value") next to the report for plotting.
inline void emit_report(const RunReport& rep, const std::string& path) {
  report_detail::check_finite(rep.deterministic, "deterministic");
  nlohmann::json full = nlohmann::json::object();
  full["deterministic"] = rep.deterministic;
  full["timing"] = rep.timing;

  namespace fs = std::filesystem;
  const fs::path out(path);
  if (out.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(out.parent_path(), ec);
  }
  {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw Error("cannot open report output '" + path + "' for writing");
    f << full.dump(2) << "\n";
    if (!f) throw Error("failed while writing report to '" + path + "'");
  }

  for (const auto& e : rep.deterministic["results"]) {
    if (!e.contains("values") || !e["values"].contains("series")) continue;
    fs::path csv = out;
    csv.replace_extension(".csv");
    std::ofstream f(csv, std::ios::binary);
    if (!f) throw Error("cannot open series output '" + csv.string() + "' for writing");
    f << "resolution,value\n";
    for (const auto& row : e["values"]["series"]) {
      const auto& r = row["resolution"];
      std::string label = std::to_string(r[0].get<int>());
      if (r.size() > 1 && r[1].get<int>() > 1)
        label += "x" + std::to_string(r[1].get<int>());
      f << label << "," << row["value"].dump() << "\n";
    }
    if (!f) throw Error("failed while writing series to '" + csv.string() + "'");
  }
}

inline RunReport read_report(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open report '" + path + "'");
  nlohmann::json full = nlohmann::json::parse(f);
  RunReport rep;
  rep.deterministic = full.at("deterministic");
  rep.timing = full.at("timing");
  return rep;
}

}  // namespace fsv
