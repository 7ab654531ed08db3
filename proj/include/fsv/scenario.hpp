#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fsv/exponents.hpp"
#include "fsv/expression.hpp"
#include "fsv/grid.hpp"
#include "fsv/grid_function.hpp"

namespace fsv {

/// One scenario file = one run. Top-level keys: domain, resolution, s, q, p,
/// task, payload, seed, output. `canonical` is the normalized scenario with
/// all defaults filled in; its serialization is what gets hashed.
struct Scenario {
  DomainSpec domain = DomainSpec::interval(0.0, 1.0);
  std::vector<std::array<int, 2>> resolutions;
  double s = 0.5;
  nlohmann::json q_spec;
  nlohmann::json p_spec;
  std::string task;
  nlohmann::json payload;
  std::uint64_t seed = 0;
  std::string output = "report.json";
  nlohmann::json canonical;
};

struct ParseOutcome {
  std::optional<Scenario> scenario;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty() && scenario.has_value(); }
};

inline std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace scenario_detail {

using nlohmann::json;

inline const std::set<std::string> kTasks = {"modular",     "norm",     "capacity",
                                             "axioms",      "certificate", "boundary",
                                             "removability"};

inline bool is_integer(const json& j) {
  return j.is_number_integer() || j.is_number_unsigned();
}

inline std::optional<DomainSpec> parse_domain(const json& j, std::vector<std::string>& errs) {
  if (!j.is_object()) {
    errs.push_back("domain: must be an object with dim/min/max");
    return std::nullopt;
  }
  for (auto& [key, _] : j.items()) {
    if (key != "dim" && key != "min" && key != "max" && key != "holes")
      errs.push_back("domain: unknown key '" + key + "'");
  }
  if (!j.contains("dim") || !is_integer(j["dim"])) {
    errs.push_back("domain.dim: required integer (1 or 2)");
    return std::nullopt;
  }
  const int dim = j["dim"].get<int>();
  if (dim != 1 && dim != 2) {
    errs.push_back("domain.dim: must be 1 or 2");
    return std::nullopt;
  }
  auto read_axis = [&](const char* key) -> std::optional<std::array<double, 2>> {
    if (!j.contains(key) || !j[key].is_array() ||
        static_cast<int>(j[key].size()) != dim) {
      errs.push_back(std::string("domain.") + key + ": required array of " +
                     std::to_string(dim) + " numbers");
      return std::nullopt;
    }
    std::array<double, 2> out{0.0, 0.0};
    for (int d = 0; d < dim; ++d) {
      if (!j[key][d].is_number()) {
        errs.push_back(std::string("domain.") + key + ": entries must be numbers");
        return std::nullopt;
      }
      out[d] = j[key][d].get<double>();
    }
    return out;
  };
  auto lo = read_axis("min");
  auto hi = read_axis("max");
  std::vector<Box> holes;
  if (j.contains("holes")) {
    if (!j["holes"].is_array()) {
      errs.push_back("domain.holes: must be an array of {min,max} boxes");
      return std::nullopt;
    }
    for (const json& hj : j["holes"]) {
      if (!hj.is_object() || !hj.contains("min") || !hj.contains("max") ||
          !hj["min"].is_array() || !hj["max"].is_array() ||
          static_cast<int>(hj["min"].size()) != dim ||
          static_cast<int>(hj["max"].size()) != dim) {
        errs.push_back("domain.holes: each hole needs min/max arrays of length dim");
        return std::nullopt;
      }
      Box b;
      for (int d = 0; d < dim; ++d) {
        if (!hj["min"][d].is_number() || !hj["max"][d].is_number()) {
          errs.push_back("domain.holes: entries must be numbers");
          return std::nullopt;
        }
        b.lo[d] = hj["min"][d].get<double>();
        b.hi[d] = hj["max"][d].get<double>();
      }
      holes.push_back(b);
    }
  }
  if (!lo || !hi) return std::nullopt;
  try {
    return DomainSpec(dim, *lo, *hi, std::move(holes));
  } catch (const Error& e) {
    errs.push_back(std::string("domain: ") + e.what());
    return std::nullopt;
  }
}

inline std::vector<std::array<int, 2>> parse_resolutions(const json& j, int dim,
                                                         std::vector<std::string>& errs) {
  std::vector<std::array<int, 2>> out;
  auto one = [&](const json& r) -> std::optional<std::array<int, 2>> {
    if (is_integer(r)) {
      int n = r.get<int>();
      if (n < 2) {
        errs.push_back("resolution: must be >= 2 per axis");
        return std::nullopt;
      }
      return std::array<int, 2>{n, dim == 2 ? n : 1};
    }
    if (r.is_array() && r.size() == 2 && is_integer(r[0]) && is_integer(r[1])) {
      std::array<int, 2> res{r[0].get<int>(), r[1].get<int>()};
      if (res[0] < 2 || (dim == 2 && res[1] < 2)) {
        errs.push_back("resolution: must be >= 2 per axis");
        return std::nullopt;
      }
      if (dim == 1) res[1] = 1;
      return res;
    }
    errs.push_back("resolution: expected an integer or a [nx, ny] pair");
    return std::nullopt;
  };
  // A bare integer is one resolution. In 2D a two-integer array is one
  // [nx, ny] pair; any other array is a refinement series whose entries are
  // integers or pairs.
  if (!j.is_array()) {
    auto v = one(j);
    if (v) out.push_back(*v);
    return out;
  }
  if (dim == 2 && j.size() == 2 && is_integer(j[0]) && is_integer(j[1])) {
    auto v = one(j);
    if (v) out.push_back(*v);
    return out;
  }
  for (const json& r : j) {
    auto v = one(r);
    if (v) out.push_back(*v);
  }
  return out;
}

inline void check_exponent_spec(const json& j, const char* name, int dim, bool pair,
                                std::vector<std::string>& errs) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    errs.push_back(std::string(name) + ": must be an object with a 'type' field");
    return;
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "constant") {
    if (!j.contains("value") || !j["value"].is_number())
      errs.push_back(std::string(name) + ": constant spec needs a numeric 'value'");
    else if (!(j["value"].get<double>() > 1.0))
      errs.push_back(std::string(name) + ": exponent must exceed 1");
  } else if (type == "expression") {
    if (!j.contains("expr")) {
      errs.push_back(std::string(name) + ": expression spec needs 'expr'");
      return;
    }
    try {
      Expr e = expr_from_json(j["expr"]);
      e.validate(dim, pair ? 2 : 1);
    } catch (const Error& e) {
      errs.push_back(std::string(name) + ": " + e.what());
    }
  } else if (type == "tabulated") {
    if (!j.contains("values") || !j["values"].is_array()) {
      errs.push_back(std::string(name) + ": tabulated spec needs a 'values' array");
      return;
    }
    if (!pair) {
      for (const json& v : j["values"]) {
        if (!v.is_number()) {
          errs.push_back(std::string(name) + ": tabulated values must be numbers");
          return;
        }
        if (!(v.get<double>() > 1.0)) {
          errs.push_back(std::string(name) + ": exponent must exceed 1");
          return;
        }
      }
    } else {
      for (const json& row : j["values"]) {
        if (!row.is_array()) {
          errs.push_back(std::string(name) + ": tabulated pair values must be an array of rows");
          return;
        }
        for (const json& v : row) {
          if (!v.is_number()) {
            errs.push_back(std::string(name) + ": tabulated values must be numbers");
            return;
          }
          if (!(v.get<double>() > 1.0)) {
            errs.push_back(std::string(name) + ": exponent must exceed 1");
            return;
          }
        }
      }
    }
  } else {
    errs.push_back(std::string(name) + ": unknown type '" + type + "'");
  }
}

inline ScalarSpec scalar_spec_from_json(const json& j, const std::shared_ptr<const Grid>& grid) {
  const std::string type = j["type"].get<std::string>();
  if (type == "constant") return ScalarSpec::constant(j["value"].get<double>());
  if (type == "expression") return ScalarSpec::expression(expr_from_json(j["expr"]));
  std::vector<double> values;
  for (const json& v : j["values"]) values.push_back(v.get<double>());
  return ScalarSpec::tabulated(grid, std::move(values));
}

inline PairSpec pair_spec_from_json(const json& j, const std::shared_ptr<const Grid>& grid) {
  const std::string type = j["type"].get<std::string>();
  if (type == "constant") return PairSpec::constant(j["value"].get<double>());
  if (type == "expression") return PairSpec::expression(expr_from_json(j["expr"]));
  std::vector<double> values;
  for (const json& row : j["values"])
    for (const json& v : row) values.push_back(v.get<double>());
  return PairSpec::tabulated(grid, std::move(values));
}

inline void check_mask_json(const json& j, const std::string& where, const Grid* grid,
                            std::vector<std::string>& errs) {
  if (!j.is_object()) {
    errs.push_back(where + ": mask must be an object with 'cells'/'boundary' index lists");
    return;
  }
  for (auto& [key, value] : j.items()) {
    if (key != "cells" && key != "boundary") {
      errs.push_back(where + ": unknown mask key '" + key + "'");
      continue;
    }
    if (!value.is_array()) {
      errs.push_back(where + "." + key + ": must be an index array");
      continue;
    }
    const int limit = grid ? (key == "cells" ? grid->cell_count() : grid->boundary_count()) : -1;
    for (const json& v : value) {
      if (!is_integer(v)) {
        errs.push_back(where + "." + key + ": indices must be integers");
        break;
      }
      const long long idx = v.get<long long>();
      if (idx < 0 || (limit >= 0 && idx >= limit)) {
        errs.push_back(where + "." + key + ": index " + std::to_string(idx) + " out of range");
        break;
      }
    }
  }
}

inline SetMask mask_from_json(const json& j, const Grid& grid) {
  SetMask m = SetMask::empty(grid);
  if (j.contains("cells"))
    for (const json& v : j["cells"]) m.cells.at(v.get<std::size_t>()) = 1;
  if (j.contains("boundary"))
    for (const json& v : j["boundary"]) m.nodes.at(v.get<std::size_t>()) = 1;
  return m;
}

inline void check_function_spec(const json& j, const std::string& where, int dim,
                                const Grid* grid, std::vector<std::string>& errs) {
  if (!j.is_object() || (j.contains("expr") == j.contains("values"))) {
    errs.push_back(where + ": function spec needs exactly one of 'expr' or 'values'");
    return;
  }
  if (j.contains("expr")) {
    try {
      Expr e = expr_from_json(j["expr"]);
      e.validate(dim, 1);
    } catch (const Error& e) {
      errs.push_back(where + ": " + e.what());
    }
    return;
  }
  const json& v = j["values"];
  if (!v.is_object() || !v.contains("cells") || !v["cells"].is_array()) {
    errs.push_back(where + ".values: needs a 'cells' number array");
    return;
  }
  for (const json& x : v["cells"])
    if (!x.is_number()) {
      errs.push_back(where + ".values.cells: entries must be numbers");
      return;
    }
  if (grid && static_cast<int>(v["cells"].size()) != grid->cell_count())
    errs.push_back(where + ".values.cells: expected " + std::to_string(grid->cell_count()) +
                   " entries");
  if (v.contains("boundary")) {
    if (!v["boundary"].is_array()) {
      errs.push_back(where + ".values.boundary: must be a number array");
      return;
    }
    for (const json& x : v["boundary"])
      if (!x.is_number()) {
        errs.push_back(where + ".values.boundary: entries must be numbers");
        return;
      }
    if (grid && static_cast<int>(v["boundary"].size()) != grid->boundary_count())
      errs.push_back(where + ".values.boundary: expected " +
                     std::to_string(grid->boundary_count()) + " entries");
  }
}

inline GridFunction function_from_json(const json& j, const std::shared_ptr<const Grid>& grid) {
  if (j.contains("expr")) {
    const Expr e = expr_from_json(j["expr"]);
    std::vector<double> cells(grid->cell_count());
    std::vector<double> nodes(grid->boundary_count());
    for (int i = 0; i < grid->cell_count(); ++i) cells[i] = e.eval(grid->cell_centers()[i]);
    for (int b = 0; b < grid->boundary_count(); ++b) nodes[b] = e.eval(grid->boundary_nodes()[b]);
    return GridFunction(grid, std::move(cells), std::move(nodes));
  }
  std::vector<double> cells = j["values"]["cells"].get<std::vector<double>>();
  std::vector<double> nodes(grid->boundary_count(), 0.0);
  if (j["values"].contains("boundary"))
    nodes = j["values"]["boundary"].get<std::vector<double>>();
  return GridFunction(grid, std::move(cells), std::move(nodes));
}

inline json normalized_solver_json(const json& payload, std::vector<std::string>& errs) {
  json sv = json::object();
  sv["max_iterations"] = 50000;
  sv["objective_tol"] = 1e-10;
  sv["pg_tol"] = 1e-8;
  sv["start"] = "indicator";
  if (!payload.contains("solver")) return sv;
  const json& in = payload["solver"];
  if (!in.is_object()) {
    errs.push_back("payload.solver: must be an object");
    return sv;
  }
  for (auto& [key, value] : in.items()) {
    if (key == "max_iterations") {
      if (!is_integer(value) || value.get<long long>() < 1)
        errs.push_back("payload.solver.max_iterations: positive integer required");
      else
        sv[key] = value.get<long long>();
    } else if (key == "objective_tol" || key == "pg_tol") {
      if (!value.is_number() || !(value.get<double>() > 0.0))
        errs.push_back("payload.solver." + key + ": positive number required");
      else
        sv[key] = value.get<double>();
    } else if (key == "start") {
      if (!value.is_string() ||
          (value.get<std::string>() != "indicator" && value.get<std::string>() != "ones"))
        errs.push_back("payload.solver.start: 'indicator' or 'ones'");
      else
        sv[key] = value.get<std::string>();
    } else {
      errs.push_back("payload.solver: unknown key '" + key + "'");
    }
  }
  return sv;
}

inline SolverOptions solver_from_json(const json& sv) {
  SolverOptions o;
  o.max_iterations = sv["max_iterations"].get<int>();
  o.objective_tol = sv["objective_tol"].get<double>();
  o.pg_tol = sv["pg_tol"].get<double>();
  o.start = sv["start"].get<std::string>() == "ones" ? SolverOptions::Start::Ones
                                                     : SolverOptions::Start::Indicator;
  return o;
}

}  // namespace scenario_detail

/// Parses and validates a scenario, reporting every violation found rather
/// than stopping at the first. A returned Scenario has all defaults filled.
inline ParseOutcome parse_scenario_text(const std::string& text, const std::string& origin) {
  using nlohmann::json;
  namespace sd = scenario_detail;
  ParseOutcome out;
  auto& errs = out.errors;
  try {
    json root = json::parse(text, nullptr, true, true);  // allow comments
    if (!root.is_object()) {
      errs.push_back(origin + ": scenario must be a JSON object");
      return out;
    }
    static const std::set<std::string> kKeys = {"domain", "resolution", "s",    "q",
                                                "p",      "task",       "payload", "seed",
                                                "output"};
    for (auto& [key, _] : root.items())
      if (!kKeys.count(key)) errs.push_back("unknown top-level key '" + key + "'");
    for (const char* req : {"domain", "resolution", "s", "q", "p", "task"})
      if (!root.contains(req)) errs.push_back(std::string("missing required key '") + req + "'");

    std::optional<DomainSpec> domain =
        root.contains("domain") ? sd::parse_domain(root["domain"], errs) : std::nullopt;
    const int dim = domain ? domain->dim() : 1;

    std::vector<std::array<int, 2>> resolutions;
    if (root.contains("resolution"))
      resolutions = sd::parse_resolutions(root["resolution"], dim, errs);
    if (resolutions.empty()) errs.push_back("resolution: at least one resolution is required");

    double s = 0.5;
    if (root.contains("s")) {
      if (!root["s"].is_number()) {
        errs.push_back("s: must be a number");
      } else {
        s = root["s"].get<double>();
        if (!(s > 0.0 && s < 1.0)) errs.push_back("s: must lie strictly inside (0,1)");
      }
    }

    if (root.contains("q")) sd::check_exponent_spec(root["q"], "q", dim, false, errs);
    if (root.contains("p")) sd::check_exponent_spec(root["p"], "p", dim, true, errs);

    std::string task;
    if (root.contains("task")) {
      if (!root["task"].is_string() || !sd::kTasks.count(root["task"].get<std::string>()))
        errs.push_back("task: must be one of modular|norm|capacity|axioms|certificate|boundary|"
                       "removability");
      else
        task = root["task"].get<std::string>();
    }

    // A skeleton grid enables range validation of payload indices and
    // tabulated exponent sizes; grid construction errors are themselves
    // validation errors.
    std::shared_ptr<const Grid> grid;
    if (domain && !resolutions.empty()) {
      try {
        grid = Grid::build(*domain, resolutions.front());
      } catch (const Error& e) {
        errs.push_back(std::string("grid: ") + e.what());
      }
    }
    if (grid) {
      if (root.contains("q") && root["q"].is_object() && root["q"].value("type", "") == "tabulated" &&
          root["q"].contains("values") &&
          static_cast<int>(root["q"]["values"].size()) != grid->cell_count())
        errs.push_back("q: tabulated values must have one entry per cell");
      if (root.contains("p") && root["p"].is_object() && root["p"].value("type", "") == "tabulated" &&
          root["p"].contains("values")) {
        const auto& rows = root["p"]["values"];
        bool shape_ok = static_cast<int>(rows.size()) == grid->cell_count();
        for (const json& row : rows)
          shape_ok = shape_ok && row.is_array() &&
                     static_cast<int>(row.size()) == grid->cell_count();
        if (!shape_ok) errs.push_back("p: tabulated values must be a cells x cells matrix");
      }
    }

    json payload = root.value("payload", json::object());
    if (!payload.is_object()) {
      errs.push_back("payload: must be an object");
      payload = json::object();
    }
    const Grid* gptr = grid.get();
    json solver = sd::normalized_solver_json(payload, errs);
    json norm_payload = json::object();
    norm_payload["solver"] = solver;

    if (task == "modular" || task == "norm") {
      if (!payload.contains("u"))
        errs.push_back("payload.u: required for the " + task + " task");
      else {
        sd::check_function_spec(payload["u"], "payload.u", dim, gptr, errs);
        norm_payload["u"] = payload["u"];
      }
    } else if (task == "capacity") {
      if (!payload.contains("set"))
        errs.push_back("payload.set: required for the capacity task");
      else {
        sd::check_mask_json(payload["set"], "payload.set", gptr, errs);
        norm_payload["set"] = payload["set"];
      }
    } else if (task == "axioms") {
      if (!payload.contains("sets") || !payload["sets"].is_array() || payload["sets"].size() < 2)
        errs.push_back("payload.sets: the axioms task needs an array of at least 2 masks");
      else {
        for (std::size_t i = 0; i < payload["sets"].size(); ++i)
          sd::check_mask_json(payload["sets"][i], "payload.sets[" + std::to_string(i) + "]", gptr,
                              errs);
        norm_payload["sets"] = payload["sets"];
      }
      double tol = 1e-6;
      if (payload.contains("tolerance")) {
        if (!payload["tolerance"].is_number() || !(payload["tolerance"].get<double>() > 0.0))
          errs.push_back("payload.tolerance: positive number required");
        else
          tol = payload["tolerance"].get<double>();
      }
      norm_payload["tolerance"] = tol;
    } else if (task == "certificate") {
      if (!payload.contains("sequence") || !payload["sequence"].is_array() ||
          payload["sequence"].size() < 2)
        errs.push_back("payload.sequence: the certificate task needs >= 2 function specs");
      else {
        for (std::size_t i = 0; i < payload["sequence"].size(); ++i)
          sd::check_function_spec(payload["sequence"][i],
                                  "payload.sequence[" + std::to_string(i) + "]", dim, gptr, errs);
        norm_payload["sequence"] = payload["sequence"];
      }
      long long tail = 1;
      if (payload.contains("tail_start")) {
        if (!sd::is_integer(payload["tail_start"]) || payload["tail_start"].get<long long>() < 1)
          errs.push_back("payload.tail_start: positive integer required");
        else
          tail = payload["tail_start"].get<long long>();
      }
      norm_payload["tail_start"] = tail;
    } else if (task == "boundary") {
      if (resolutions.size() < 3)
        errs.push_back("resolution: the boundary task needs a series of >= 3 resolutions");
    } else if (task == "removability") {
      if (!payload.contains("removed"))
        errs.push_back("payload.removed: required for the removability task");
      else {
        sd::check_mask_json(payload["removed"], "payload.removed", gptr, errs);
        if (payload["removed"].is_object() && payload["removed"].contains("boundary") &&
            !payload["removed"]["boundary"].empty())
          errs.push_back("payload.removed: must consist of cells only");
        norm_payload["removed"] = payload["removed"];
      }
      json tests = json::array();
      if (payload.contains("test_sets")) {
        if (!payload["test_sets"].is_array())
          errs.push_back("payload.test_sets: must be an array of masks");
        else {
          for (std::size_t i = 0; i < payload["test_sets"].size(); ++i)
            sd::check_mask_json(payload["test_sets"][i],
                                "payload.test_sets[" + std::to_string(i) + "]", gptr, errs);
          tests = payload["test_sets"];
        }
      }
      norm_payload["test_sets"] = tests;
      double tau = 1e-6;
      if (payload.contains("tau")) {
        if (!payload["tau"].is_number() || !(payload["tau"].get<double>() > 0.0))
          errs.push_back("payload.tau: positive number required");
        else
          tau = payload["tau"].get<double>();
      }
      norm_payload["tau"] = tau;
    }
    for (auto& [key, _] : payload.items()) {
      static const std::set<std::string> kPayloadKeys = {
          "u", "set", "sets", "sequence", "removed", "test_sets", "tau", "tolerance",
          "tail_start", "solver"};
      if (!kPayloadKeys.count(key)) errs.push_back("payload: unknown key '" + key + "'");
    }

    std::uint64_t seed = 0;
    if (root.contains("seed")) {
      if (!sd::is_integer(root["seed"]) || root["seed"].get<long long>() < 0)
        errs.push_back("seed: non-negative integer required");
      else
        seed = root["seed"].get<std::uint64_t>();
    }
    std::string output = "report.json";
    if (root.contains("output")) {
      if (!root["output"].is_string() || root["output"].get<std::string>().empty())
        errs.push_back("output: non-empty string required");
      else
        output = root["output"].get<std::string>();
    }

    // Constructing the exponent field runs the sampled bound checks, which
    // catch expression exponents dipping to 1 or below.
    if (errs.empty() && grid) {
      try {
        ExponentField field(*domain, sd::scalar_spec_from_json(root["q"], grid),
                            sd::pair_spec_from_json(root["p"], grid));
      } catch (const Error& e) {
        errs.push_back(std::string("exponents: ") + e.what());
      }
    }

    if (!errs.empty()) return out;

    Scenario sc;
    sc.domain = *domain;
    sc.resolutions = resolutions;
    sc.s = s;
    sc.q_spec = root["q"];
    sc.p_spec = root["p"];
    sc.task = task;
    sc.payload = norm_payload;
    sc.seed = seed;
    sc.output = output;

    json canon = json::object();
    canon["domain"] = json::object();
    canon["domain"]["dim"] = sc.domain.dim();
    canon["domain"]["min"] = std::vector<double>(sc.domain.bounds().lo.begin(),
                                                 sc.domain.bounds().lo.begin() + sc.domain.dim());
    canon["domain"]["max"] = std::vector<double>(sc.domain.bounds().hi.begin(),
                                                 sc.domain.bounds().hi.begin() + sc.domain.dim());
    canon["domain"]["holes"] = json::array();
    for (const Box& h : sc.domain.holes()) {
      json hj = json::object();
      hj["min"] = std::vector<double>(h.lo.begin(), h.lo.begin() + sc.domain.dim());
      hj["max"] = std::vector<double>(h.hi.begin(), h.hi.begin() + sc.domain.dim());
      canon["domain"]["holes"].push_back(hj);
    }
    canon["resolution"] = json::array();
    for (const auto& r : sc.resolutions)
      canon["resolution"].push_back(std::vector<int>{r[0], r[1]});
    canon["s"] = sc.s;
    canon["q"] = sc.q_spec;
    canon["p"] = sc.p_spec;
    canon["task"] = sc.task;
    canon["payload"] = sc.payload;
    canon["seed"] = sc.seed;
    canon["output"] = sc.output;
    sc.canonical = std::move(canon);

    out.scenario = std::move(sc);
    return out;
  } catch (const nlohmann::json::exception& e) {
    errs.push_back(origin + ": invalid JSON: " + e.what());
    return out;
  } catch (const std::exception& e) {
    errs.push_back(origin + ": " + e.what());
    return out;
  }
}

inline ParseOutcome parse_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseOutcome out;
    out.errors.push_back(path + ": cannot open file");
    return out;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str(), path);
}

/// Builds the exponent field a validated scenario describes; tabulated specs
/// bind to the given carrier grid.
inline ExponentField build_exponent_field(const Scenario& sc,
                                          const std::shared_ptr<const Grid>& grid) {
  return ExponentField(sc.domain, scenario_detail::scalar_spec_from_json(sc.q_spec, grid),
                       scenario_detail::pair_spec_from_json(sc.p_spec, grid));
}

}  // namespace fsv
