#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fsv/grid_function.hpp"
#include "fsv/modular.hpp"

namespace fsv {

/// Projected-gradient options. The box constraint u in [0,1] is a lossless
/// restriction of the admissible class: clamping an admissible function to
/// [0,1] preserves admissibility and never increases the modular.
struct SolverOptions {
  double objective_tol = 1e-10;  // stop on relative decrease below this
  double pg_tol = 1e-8;          // stop on projected-gradient sup-norm below this
  int max_iterations = 50000;
  double armijo_slope = 1e-4;
  double backtrack = 0.5;
  enum class Start { Indicator, Ones } start = Start::Indicator;
};

/// Capacity value with the minimizer and solver diagnostics. The value
/// always equals the modular of the returned equilibrium function.
struct CapacityResult {
  double value = 0.0;
  GridFunction equilibrium;
  int iterations = 0;
  double pg_residual = 0.0;
  SetMask admissible_set;
  bool converged = false;
};

/// Thrown when the iteration cap is hit before either stopping rule fires;
/// carries the best (feasible) iterate, whose modular still upper-bounds the
/// capacity.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(std::string what, CapacityResult best)
      : Error(std::move(what)), best_(std::move(best)) {}
  const CapacityResult& best() const { return best_; }

 private:
  CapacityResult best_;
};

namespace detail {

/// KKT residual of min f over the box with equality pins: at free interior
/// coordinates |g|, at the lower bound max(0, -g), at the upper bound
/// max(0, g), zero at pinned coordinates.
inline double kkt_residual(const std::vector<double>& x, const std::vector<double>& g,
                           const std::vector<std::uint8_t>& pinned) {
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (pinned[i]) continue;
    double v;
    if (x[i] <= 0.0)
      v = std::max(0.0, -g[i]);
    else if (x[i] >= 1.0)
      v = std::max(0.0, g[i]);
    else
      v = std::abs(g[i]);
    r = std::max(r, v);
  }
  return r;
}

inline void project_box(std::vector<double>& x, const std::vector<std::uint8_t>& pinned) {
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = pinned[i] ? 1.0 : std::clamp(x[i], 0.0, 1.0);
}

}  // namespace detail

/// Capacity of a (relatively open) mask O: minimizes the modular over grid
/// functions with u = 1 on O's cells and boundary nodes and u in [0,1]
/// elsewhere. Boundary-node values never enter the modular; nodes outside O
/// are reported as 0 in the equilibrium.
///
/// Projected gradient with Armijo backtracking (slope 1e-4, shrink 0.5) and
/// a safeguarded Barzilai-Borwein trial step; initialization is the
/// indicator of O. Forced cases short-circuit: an empty mask has capacity 0,
/// and a mask covering every cell has capacity rho(1).
inline CapacityResult capacity_relative_open(const SetMask& set, const ModularEvaluator& ev,
                                             const SolverOptions& opts = {}) {
  const Grid& g = ev.grid();
  require_mask(g, set, "capacity_relative_open");
  const int n = g.cell_count();

  auto node_values = [&](const SetMask& m) {
    std::vector<double> nodes(g.boundary_count(), 0.0);
    for (int b = 0; b < g.boundary_count(); ++b) nodes[b] = m.nodes[b] ? 1.0 : 0.0;
    return nodes;
  };
  auto finish = [&](std::vector<double> cells, int iters, double pg, bool ok) {
    GridFunction eq(ev.grid_ptr(), std::move(cells), node_values(set));
    CapacityResult r{0.0, eq, iters, pg, set, ok};
    r.value = ev.evaluate(eq).total;
    return r;
  };

  if (!set.any()) return finish(std::vector<double>(n, 0.0), 0, 0.0, true);
  if (set.cell_population() == n) return finish(std::vector<double>(n, 1.0), 0, 0.0, true);

  const std::vector<std::uint8_t>& pinned = set.cells;
  std::vector<double> x(n, 0.0);
  if (opts.start == SolverOptions::Start::Ones) std::fill(x.begin(), x.end(), 1.0);
  detail::project_box(x, pinned);

  std::vector<double> grad, x_trial, grad_prev, x_prev;
  double f = ev.evaluate(x).total;
  double step = 1.0;
  std::vector<double> best_x = x;
  double best_f = f;

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    ev.gradient(x, grad);
    const double pg = detail::kkt_residual(x, grad, pinned);
    if (pg <= opts.pg_tol) return finish(x, iter - 1, pg, true);

    // Barzilai-Borwein trial step from the previous accepted move.
    if (!x_prev.empty()) {
      double num = 0.0, den = 0.0;
      for (int i = 0; i < n; ++i) {
        const double dx = x[i] - x_prev[i];
        num += dx * dx;
        den += dx * (grad[i] - grad_prev[i]);
      }
      if (den > 0.0 && std::isfinite(num / den))
        step = std::clamp(num / den, 1e-16, 1e12);
      else
        step = std::clamp(step * 2.0, 1e-16, 1e12);
    }

    double f_new = f;
    bool moved = false;
    for (int bt = 0; bt < 120; ++bt) {
      x_trial = x;
      for (int i = 0; i < n; ++i) x_trial[i] -= step * grad[i];
      detail::project_box(x_trial, pinned);
      double lin = 0.0, dist2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = x_trial[i] - x[i];
        lin += grad[i] * d;
        dist2 += d * d;
      }
      if (dist2 == 0.0) break;  // no feasible descent direction
      f_new = ev.evaluate(x_trial).total;
      if (f_new <= f + opts.armijo_slope * lin) {
        moved = true;
        break;
      }
      step *= opts.backtrack;
    }
    if (!moved) return finish(x, iter, pg, true);

    x_prev = x;
    grad_prev = grad;
    x = x_trial;
    const double decrease = f - f_new;
    const bool stalled = decrease < opts.objective_tol * std::max(1.0, std::abs(f));
    f = f_new;
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
    if (stalled) {
      ev.gradient(x, grad);
      return finish(x, iter, detail::kkt_residual(x, grad, pinned), true);
    }
  }

  ev.gradient(best_x, grad);
  const double pg = detail::kkt_residual(best_x, grad, pinned);
  throw NonConvergenceError("capacity solver hit the iteration cap",
                            finish(best_x, opts.max_iterations, pg, false));
}

inline CapacityResult capacity_relative_open(const SetMask& set,
                                             const std::shared_ptr<const Grid>& grid,
                                             const ExponentField& field, double s,
                                             const SolverOptions& opts = {}) {
  return capacity_relative_open(set, ModularEvaluator(grid, field, s), opts);
}

/// Capacity of an arbitrary subset of the closure: the one-ring open hull is
/// the minimal relatively open superset under the grid topology, so the
/// infimum over discrete open supersets is attained there.
inline CapacityResult capacity_set(const SetMask& set, const ModularEvaluator& ev,
                                   const SolverOptions& opts = {}) {
  require_mask(ev.grid(), set, "capacity_set");
  return capacity_relative_open(open_neighborhood(ev.grid(), set), ev, opts);
}

inline CapacityResult capacity_set(const SetMask& set, const std::shared_ptr<const Grid>& grid,
                                   const ExponentField& field, double s,
                                   const SolverOptions& opts = {}) {
  return capacity_set(set, ModularEvaluator(grid, field, s), opts);
}

/// The modular minimizer over the admissible class of O.
inline GridFunction equilibrium_potential(const SetMask& set, const ModularEvaluator& ev,
                                          const SolverOptions& opts = {}) {
  return capacity_relative_open(set, ev, opts).equilibrium;
}

/// Upper bound on the capacity of O certified by any admissible u >= 1 on O:
/// clamping u to [0,1] (and forcing 1 on O, where u already reaches 1)
/// preserves admissibility and never increases the modular, so the returned
/// modular dominates the capacity.
inline double capacity_upper_bound(const GridFunction& u, const SetMask& set,
                                   const ModularEvaluator& ev) {
  const Grid& g = ev.grid();
  require_mask(g, set, "capacity_upper_bound");
  if (u.grid_ptr().get() != &g) throw UsageError("capacity_upper_bound: grid mismatch");
  constexpr double kSlack = 1e-12;
  for (int i = 0; i < g.cell_count(); ++i)
    if (set.cells[i] && u.cell_values()[i] < 1.0 - kSlack)
      throw AdmissibilityError("capacity_upper_bound: u < 1 on a flagged cell");
  for (int b = 0; b < g.boundary_count(); ++b)
    if (set.nodes[b] && u.node_values()[b] < 1.0 - kSlack)
      throw AdmissibilityError("capacity_upper_bound: u < 1 on a flagged boundary node");
  std::vector<double> cells(u.cell_values());
  for (int i = 0; i < g.cell_count(); ++i)
    cells[i] = set.cells[i] ? 1.0 : std::clamp(cells[i], 0.0, 1.0);
  return ev.evaluate(cells).total;
}

inline double capacity_upper_bound(const GridFunction& u, const SetMask& set,
                                   const ExponentField& field, double s) {
  return capacity_upper_bound(u, set, ModularEvaluator(u.grid_ptr(), field, s));
}

struct AxiomCheck {
  std::string property;
  double margin = 0.0;  // >= -tolerance means pass
  bool pass = false;
  std::string detail;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  double max_capacity = 0.0;
  double tolerance = 0.0;
  bool all_pass = false;
};

/// Checks the capacity set-function axioms on a family of masks: the empty
/// set has capacity exactly zero, monotonicity over every nested pair in the
/// family, finite subadditivity and strong subadditivity over every pair,
/// and the measure bound |E| <= C(E). Failures are report entries, not
/// exceptions. The tolerance is `tol_scale` times the largest capacity seen.
inline AxiomReport verify_capacity_axioms(const std::vector<SetMask>& sets,
                                          const ModularEvaluator& ev,
                                          const SolverOptions& opts = {},
                                          double tol_scale = 1e-6) {
  if (sets.size() < 2) throw UsageError("verify_capacity_axioms: need at least 2 sets");
  const Grid& g = ev.grid();
  for (const SetMask& m : sets) require_mask(g, m, "verify_capacity_axioms");

  std::map<std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>, double> memo;
  auto cap = [&](const SetMask& m) {
    auto key = std::make_pair(m.cells, m.nodes);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const double v = capacity_set(m, ev, opts).value;
    memo.emplace(std::move(key), v);
    return v;
  };

  AxiomReport rep;
  std::vector<double> c(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) c[i] = cap(sets[i]);
  rep.max_capacity = *std::max_element(c.begin(), c.end());
  rep.tolerance = tol_scale * rep.max_capacity;

  {
    const double c_empty = capacity_set(SetMask::empty(g), ev, opts).value;
    rep.checks.push_back({"empty-set-zero", -c_empty, c_empty == 0.0, "C(empty)"});
  }
  {
    double worst = std::numeric_limits<double>::infinity();
    std::string where = "no nested pairs in the family";
    for (std::size_t i = 0; i < sets.size(); ++i) {
      for (std::size_t j = 0; j < sets.size(); ++j) {
        if (i == j || !mask_subset(sets[i], sets[j])) continue;
        const double m = c[j] - c[i];
        if (m < worst) {
          worst = m;
          where = "sets " + std::to_string(i) + " in " + std::to_string(j);
        }
      }
    }
    const bool vacuous = !std::isfinite(worst);
    rep.checks.push_back({"monotone", vacuous ? 0.0 : worst,
                          vacuous || worst >= -rep.tolerance, where});
  }
  {
    double worst = std::numeric_limits<double>::infinity();
    double worst_strong = worst;
    std::string where, where_strong;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      for (std::size_t j = i + 1; j < sets.size(); ++j) {
        const double cu = cap(mask_union(sets[i], sets[j]));
        const double ci = cap(mask_intersection(sets[i], sets[j]));
        const double sub = c[i] + c[j] - cu;
        const double strong = c[i] + c[j] - cu - ci;
        if (sub < worst) {
          worst = sub;
          where = "pair " + std::to_string(i) + "," + std::to_string(j);
        }
        if (strong < worst_strong) {
          worst_strong = strong;
          where_strong = "pair " + std::to_string(i) + "," + std::to_string(j);
        }
      }
    }
    rep.checks.push_back({"finite-subadditivity", worst, worst >= -rep.tolerance, where});
    rep.checks.push_back(
        {"strong-subadditivity", worst_strong, worst_strong >= -rep.tolerance, where_strong});
  }
  {
    double worst = std::numeric_limits<double>::infinity();
    std::string where;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const double m = c[i] - measure(g, sets[i]);
      if (m < worst) {
        worst = m;
        where = "set " + std::to_string(i);
      }
    }
    rep.checks.push_back({"measure-bound", worst, worst >= -rep.tolerance, where});
  }

  rep.all_pass = true;
  for (const AxiomCheck& a : rep.checks) rep.all_pass = rep.all_pass && a.pass;
  return rep;
}

}  // namespace fsv
