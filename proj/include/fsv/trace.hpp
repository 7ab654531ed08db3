#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fsv/capacity.hpp"
#include "fsv/norms.hpp"

namespace fsv {

/// One step of the quasi-uniform convergence chain: the level set where the
/// consecutive gap exceeds 2^-i, the certified capacity upper bound for it,
/// and the budget 4^-i it has to stay under.
struct CertificateRecord {
  int index = 0;
  SetMask level_set;
  double bound = 0.0;
  double threshold = 0.0;  // 2^-index
  double budget = 0.0;     // 4^-index
  bool within = false;
};

struct ConvergenceCertificate {
  std::vector<CertificateRecord> records;
  int tail_start = 1;
  SetMask exceptional_set;       // union of level sets from tail_start on
  double exceptional_bound = 0;  // literal partial sum of the budgets
  bool verdict = false;
};

/// The gap precondition ||u_{i+1} - u_i|| <= 8^-i failed at `index`.
class CertificateInapplicableError : public Error {
 public:
  CertificateInapplicableError(std::string what, int index, double gap_norm, double allowed)
      : Error(std::move(what)), index_(index), gap_norm_(gap_norm), allowed_(allowed) {}
  int index() const { return index_; }
  double gap_norm() const { return gap_norm_; }
  double allowed() const { return allowed_; }

 private:
  int index_;
  double gap_norm_, allowed_;
};

/// Certificate for quasi-uniform convergence of a Cauchy-like sequence.
///
/// Requires the Sobolev-norm gaps ||u_{i+1} - u_i|| <= 8^-i (checked; a
/// violation raises CertificateInapplicableError naming the index). For each
/// gap the level set G_i = { |u_{i+1} - u_i| > 2^-i } admits the certificate
/// function 2^i |u_{i+1} - u_i|, which exceeds 1 on G_i, so its clamped
/// modular upper-bounds C(G_i); the unit-ball property keeps that bound
/// below 4^-i. The tail exceptional set is the union of the G_i from
/// `tail_start` on, with the literal partial sum of the budgets as its bound.
inline ConvergenceCertificate quasi_convergence_certificate(
    const std::vector<GridFunction>& sequence, const ModularEvaluator& ev, int tail_start = 1) {
  if (sequence.size() < 2)
    throw UsageError("quasi_convergence_certificate: need at least 2 functions");
  if (tail_start < 1) throw UsageError("quasi_convergence_certificate: tail_start must be >= 1");
  const Grid& g = ev.grid();
  for (const GridFunction& u : sequence)
    if (u.grid_ptr().get() != &g)
      throw UsageError("quasi_convergence_certificate: functions on different grids");

  // The norm comparison gets a hair of slack for bisection residue.
  constexpr double kGapSlack = 1e-12;
  constexpr double kBoundSlack = 1e-9;

  ConvergenceCertificate cert;
  cert.tail_start = tail_start;
  cert.exceptional_set = SetMask::empty(g);
  cert.verdict = true;

  for (std::size_t k = 0; k + 1 < sequence.size(); ++k) {
    const int i = static_cast<int>(k) + 1;
    const GridFunction diff = scale_and_combine(1.0, sequence[k + 1], -1.0, sequence[k]);
    const double gap = sobolev_norm(diff, ev.field(), ev.s());
    const double allowed = std::pow(8.0, -i);
    if (gap > allowed * (1.0 + kGapSlack) + kGapSlack)
      throw CertificateInapplicableError(
          "certificate inapplicable: gap norm exceeds 8^-i at index " + std::to_string(i), i,
          gap, allowed);

    const double threshold = std::pow(2.0, -i);
    SetMask level = SetMask::empty(g);
    for (int c = 0; c < g.cell_count(); ++c)
      if (std::abs(diff.cell_values()[c]) > threshold) level.cells[c] = 1;
    for (int b = 0; b < g.boundary_count(); ++b)
      if (std::abs(diff.node_values()[b]) > threshold) level.nodes[b] = 1;

    CertificateRecord rec;
    rec.index = i;
    rec.level_set = level;
    rec.threshold = threshold;
    rec.budget = std::pow(4.0, -i);
    if (level.any()) {
      const GridFunction witness =
          scale_and_combine(std::pow(2.0, i), absolute_value(diff), 0.0, diff);
      rec.bound = capacity_upper_bound(witness, level, ev);
    } else {
      rec.bound = 0.0;
    }
    rec.within = rec.bound <= rec.budget + kBoundSlack;
    cert.verdict = cert.verdict && rec.within;
    if (i >= tail_start) {
      cert.exceptional_set = mask_union(cert.exceptional_set, level);
      cert.exceptional_bound += rec.budget;
    }
    cert.records.push_back(std::move(rec));
  }
  return cert;
}

/// Capacity of the boundary superlevel set { nodes : |u| > eps }; zero
/// whenever every boundary value of u is at most eps in magnitude.
inline double boundary_trace_deficiency(const GridFunction& u, double eps,
                                        const ModularEvaluator& ev,
                                        const SolverOptions& opts = {}) {
  if (!(eps > 0.0)) throw ParameterError("boundary_trace_deficiency: eps must be positive");
  const Grid& g = ev.grid();
  if (u.grid_ptr().get() != &g) throw UsageError("boundary_trace_deficiency: grid mismatch");
  SetMask offending = SetMask::empty(g);
  bool any = false;
  for (int b = 0; b < g.boundary_count(); ++b) {
    if (std::abs(u.node_values()[b]) > eps) {
      offending.nodes[b] = 1;
      any = true;
    }
  }
  if (!any) return 0.0;
  return capacity_set(offending, ev, opts).value;
}

struct ZeroTraceResult {
  bool member = false;
  double deficiency = 0.0;
  SetMask offending;
};

/// Discrete zero-trace membership: the boundary values above eps must form a
/// node set of capacity at most delta. The continuum notion (every epsilon
/// admits an open set of smaller capacity) collapses at fixed resolution, so
/// the tolerance pair (eps, delta) is the assertable form.
inline ZeroTraceResult zero_trace_membership(const GridFunction& u, double eps, double delta,
                                             const ModularEvaluator& ev,
                                             const SolverOptions& opts = {}) {
  if (!(delta > 0.0)) throw ParameterError("zero_trace_membership: delta must be positive");
  const Grid& g = ev.grid();
  if (u.grid_ptr().get() != &g) throw UsageError("zero_trace_membership: grid mismatch");
  ZeroTraceResult r;
  r.offending = SetMask::empty(g);
  for (int b = 0; b < g.boundary_count(); ++b)
    if (std::abs(u.node_values()[b]) > eps) r.offending.nodes[b] = 1;
  r.deficiency = boundary_trace_deficiency(u, eps, ev, opts);
  r.member = r.deficiency <= delta;
  return r;
}

struct PolarityEntry {
  std::array<int, 2> resolution{0, 1};
  double value = 0.0;
};

struct PolarityReport {
  std::vector<PolarityEntry> series;
  std::string verdict;  // "decaying" | "bounded-below" | "inconclusive"
};

/// Capacity of the full boundary across a refinement series. Whether
/// C(boundary) tends to zero decides the polarity of the boundary; at desk
/// scale the report classifies the trend of the series.
inline PolarityReport boundary_polarity_check(const DomainSpec& domain,
                                              const std::vector<std::array<int, 2>>& resolutions,
                                              const ExponentField& field, double s,
                                              const SolverOptions& opts = {}) {
  if (resolutions.size() < 3)
    throw UsageError("boundary_polarity_check: need a refinement series of >= 3 resolutions");
  PolarityReport rep;
  for (const auto& res : resolutions) {
    auto grid = Grid::build(domain, res);
    ModularEvaluator ev(grid, field, s);
    const double v = capacity_set(boundary_mask(*grid), ev, opts).value;
    rep.series.push_back({res, v});
  }
  // Classify by decrement persistence: a series heading to zero keeps
  // shedding value at each refinement, while a series with a positive limit
  // shows collapsing decrements.
  std::vector<double> dec;
  for (std::size_t k = 0; k + 1 < rep.series.size(); ++k)
    dec.push_back(rep.series[k].value - rep.series[k + 1].value);
  constexpr double kTrendTol = 1e-9;
  bool non_increasing = true;
  for (double d : dec) non_increasing = non_increasing && d >= -kTrendTol;
  const double d_first = dec.front();
  const double d_last = dec.back();
  const bool stabilized = std::abs(d_last) <= std::max(kTrendTol, 0.25 * std::abs(d_first));
  if (stabilized)
    rep.verdict = "bounded-below";
  else if (non_increasing && d_first > kTrendTol && d_last >= 0.5 * d_first)
    rep.verdict = "tending-to-zero";
  else
    rep.verdict = "inconclusive";
  return rep;
}

struct RemovabilityReport {
  SetMask removed;
  double capacity_of_removed = 0.0;
  std::vector<double> base_values;     // test-set capacities over Omega
  std::vector<double> reduced_values;  // the same over Omega minus N
  double max_discrepancy = 0.0;
  double tau = 0.0;
  bool removable = false;
};

/// Deletes the cells of N from the domain, recomputes every test-set
/// capacity on the reduced grid, and reports the worst discrepancy next to
/// C(N). Removability at tolerance tau demands both C(N) <= tau and a
/// discrepancy within tau; at fixed resolution every nonempty cell set has
/// positive capacity, so nonempty verdicts are tolerance-bound by nature.
inline RemovabilityReport removable_set_check(const SetMask& removed,
                                              const std::vector<SetMask>& test_sets,
                                              const std::shared_ptr<const Grid>& grid,
                                              const ExponentField& field, double s,
                                              double tau = 1e-6, const SolverOptions& opts = {}) {
  require_mask(*grid, removed, "removable_set_check");
  if (removed.node_population() != 0)
    throw UsageError("removable_set_check: the removed set must consist of cells");
  for (const SetMask& t : test_sets) {
    require_mask(*grid, t, "removable_set_check");
    if (!mask_disjoint_cells(t, removed))
      throw UsageError("removable_set_check: a test set intersects the removed set");
  }

  RemovabilityReport rep;
  rep.removed = removed;
  rep.tau = tau;

  ModularEvaluator ev(grid, field, s);
  rep.capacity_of_removed = capacity_set(removed, ev, opts).value;

  std::shared_ptr<const Grid> reduced =
      removed.cell_population() == 0 ? grid : grid->without_cells(removed.cells);
  ModularEvaluator ev2(reduced, field, s);

  for (const SetMask& t : test_sets) {
    rep.base_values.push_back(capacity_set(t, ev, opts).value);
    SetMask mapped = SetMask::empty(*reduced);
    for (int i : t.cell_indices()) {
      auto c = reduced->locate_cell(grid->cell_centers()[i]);
      if (!c) throw UsageError("removable_set_check: test cell missing from the reduced domain");
      mapped.cells[*c] = 1;
    }
    for (int b : t.node_indices()) {
      auto nb = reduced->find_boundary_node(grid->boundary_nodes()[b]);
      if (!nb)
        throw UsageError("removable_set_check: test boundary node missing from the reduced domain");
      mapped.nodes[*nb] = 1;
    }
    rep.reduced_values.push_back(capacity_set(mapped, ev2, opts).value);
    rep.max_discrepancy = std::max(
        rep.max_discrepancy, std::abs(rep.base_values.back() - rep.reduced_values.back()));
  }

  rep.removable = rep.capacity_of_removed <= tau && rep.max_discrepancy <= tau;
  return rep;
}

}  // namespace fsv
