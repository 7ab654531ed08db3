#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fsv/error.hpp"
#include "fsv/expression.hpp"
#include "fsv/geometry.hpp"
#include "fsv/grid.hpp"

namespace fsv {

/// Deterministic sample lattice on the closure of the domain: `per_axis`
/// equispaced values per axis including the endpoints, filtered to the
/// closure (points strictly inside holes are dropped).
inline std::vector<Point> closure_lattice(const DomainSpec& domain, int per_axis) {
  if (per_axis < 2) throw UsageError("closure_lattice: need at least 2 points per axis");
  std::vector<Point> pts;
  const Box& b = domain.bounds();
  auto tick = [&](int d, int k) {
    return b.lo[d] + (b.hi[d] - b.lo[d]) * static_cast<double>(k) / (per_axis - 1);
  };
  if (domain.dim() == 1) {
    for (int k = 0; k < per_axis; ++k) {
      Point p = make_point(tick(0, k));
      if (domain.contains_closure(p)) pts.push_back(p);
    }
  } else {
    for (int kx = 0; kx < per_axis; ++kx) {
      for (int ky = 0; ky < per_axis; ++ky) {
        Point p = make_point(tick(0, kx), tick(1, ky));
        if (domain.contains_closure(p)) pts.push_back(p);
      }
    }
  }
  return pts;
}

/// One-point scalar spec: a constant, an expression over the grammar, or a
/// table of per-cell values on a grid (piecewise constant in space).
struct ScalarSpec {
  enum class Kind { Constant, Expression, Tabulated };
  Kind kind = Kind::Constant;
  double value = 0.0;
  Expr expr;
  std::vector<double> table;
  std::shared_ptr<const Grid> table_grid;

  static ScalarSpec constant(double v) {
    ScalarSpec s;
    s.kind = Kind::Constant;
    s.value = v;
    return s;
  }
  static ScalarSpec expression(Expr e) {
    ScalarSpec s;
    s.kind = Kind::Expression;
    s.expr = std::move(e);
    return s;
  }
  static ScalarSpec tabulated(std::shared_ptr<const Grid> g, std::vector<double> values) {
    ScalarSpec s;
    s.kind = Kind::Tabulated;
    s.table_grid = std::move(g);
    s.table = std::move(values);
    return s;
  }
};

/// Two-point spec for p(x,y). Tabulated tables are dense MxM over the cells
/// of the carrier grid and are stored symmetrized; an asymmetric input is a
/// construction error. Expression specs are symmetrized by evaluation,
/// p(x,y) := (f(x,y) + f(y,x)) / 2, which is exact for symmetric f.
struct PairSpec {
  enum class Kind { Constant, Expression, Tabulated };
  Kind kind = Kind::Constant;
  double value = 0.0;
  Expr expr;
  std::vector<double> table;  // row-major M*M
  std::shared_ptr<const Grid> table_grid;

  static PairSpec constant(double v) {
    PairSpec s;
    s.kind = Kind::Constant;
    s.value = v;
    return s;
  }
  static PairSpec expression(Expr e) {
    PairSpec s;
    s.kind = Kind::Expression;
    s.expr = std::move(e);
    return s;
  }
  static PairSpec tabulated(std::shared_ptr<const Grid> g, std::vector<double> values) {
    PairSpec s;
    s.kind = Kind::Tabulated;
    s.table_grid = std::move(g);
    s.table = std::move(values);
    return s;
  }
};

struct ExponentBounds {
  double q_minus = 0, q_plus = 0, p_minus = 0, p_plus = 0;
};

/// Result of a sampled regularity check: the smallest constant compatible
/// with the sampled pairs, the maximizing configuration, and a three-density
/// refinement trail used to flag divergence (a jump exponent shows unbounded
/// growth of the modulus as the lattice refines).
struct ModulusEstimate {
  double modulus = 0.0;
  std::vector<Point> witness;        // 2 points for q, 4 for p
  std::vector<int> density_sizes;    // per-axis lattice sizes, coarse -> fine
  std::vector<double> density_values;
  bool diverging = false;
};

/// The variable exponents q(x) and p(x,y) with their essential bounds.
/// Immutable after construction; evaluation clamps into the constructed
/// bounds so downstream code can rely on 1 < e_minus <= e <= e_plus.
class ExponentField {
 public:
  ExponentField(DomainSpec domain, ScalarSpec q, PairSpec p)
      : domain_(std::move(domain)), q_(std::move(q)), p_(std::move(p)) {
    validate_specs();
    std::tie(q_minus_, q_plus_) = q_bounds_exact_or_sampled(default_q_lattice());
    std::tie(p_minus_, p_plus_) = p_bounds_exact_or_sampled(default_p_lattice());
  }

  static ExponentField constants(DomainSpec domain, double q0, double p0) {
    return ExponentField(std::move(domain), ScalarSpec::constant(q0), PairSpec::constant(p0));
  }

  const DomainSpec& domain() const { return domain_; }
  double q_minus() const { return q_minus_; }
  double q_plus() const { return q_plus_; }
  double p_minus() const { return p_minus_; }
  double p_plus() const { return p_plus_; }

  double eval_q(const Point& x) const {
    if (!domain_.contains_closure(x)) throw DomainError("eval_q: point outside the closed domain");
    return std::clamp(raw_q(x), q_minus_, q_plus_);
  }

  /// Symmetric by construction: eval_p(x,y) == eval_p(y,x) exactly.
  double eval_p(const Point& x, const Point& y) const {
    if (!domain_.contains_closure(x) || !domain_.contains_closure(y))
      throw DomainError("eval_p: point outside the closed domain");
    return std::clamp(raw_p(x, y), p_minus_, p_plus_);
  }

  /// Essential bounds: exact for constant/tabulated specs, sampled min/max
  /// over a deterministic lattice of roughly `samples` evaluations otherwise.
  ExponentBounds exponent_bounds(int samples) const {
    if (samples < 1) throw UsageError("exponent_bounds: samples must be >= 1");
    ExponentBounds b;
    std::tie(b.q_minus, b.q_plus) = q_bounds_exact_or_sampled(q_lattice_for(samples));
    std::tie(b.p_minus, b.p_plus) = p_bounds_exact_or_sampled(p_lattice_for(samples));
    return b;
  }

  /// sup over sampled pairs with 0 < |x-y| <= 1/2 of |q(x)-q(y)| * (-log|x-y|).
  ModulusEstimate check_log_holder(int samples) const {
    if (samples < 2) throw UsageError("check_log_holder: samples must be >= 2");
    const int m = q_lattice_for(samples);
    ModulusEstimate est;
    est.modulus = log_holder_at(m, &est.witness);
    attach_density_study(est, m, [this](int mm) { return log_holder_at(mm, nullptr); });
    return est;
  }

  /// Two-point analogue with the distance |x-x'| + |y-y'| <= 1/2 and
  /// |p(x,y) - p(x',y')| in the numerator.
  ModulusEstimate check_bb_condition(int samples) const {
    if (samples < 2) throw UsageError("check_bb_condition: samples must be >= 2");
    const int m = p_lattice_for(samples);
    ModulusEstimate est;
    est.modulus = bb_at(m, &est.witness);
    attach_density_study(est, m, [this](int mm) { return bb_at(mm, nullptr); });
    return est;
  }

 private:
  void validate_specs() {
    if (q_.kind == ScalarSpec::Kind::Expression) q_.expr.validate(domain_.dim(), 1);
    if (p_.kind == PairSpec::Kind::Expression) p_.expr.validate(domain_.dim(), 2);
    if (q_.kind == ScalarSpec::Kind::Tabulated) {
      if (!q_.table_grid) throw UsageError("tabulated q needs a carrier grid");
      if (static_cast<int>(q_.table.size()) != q_.table_grid->cell_count())
        throw UsageError("tabulated q: table size does not match grid cell count");
    }
    if (p_.kind == PairSpec::Kind::Tabulated) {
      if (!p_.table_grid) throw UsageError("tabulated p needs a carrier grid");
      const int m = p_.table_grid->cell_count();
      if (p_.table.size() != static_cast<std::size_t>(m) * m)
        throw UsageError("tabulated p: table must be M*M over the grid cells");
      for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
          if (p_.table[static_cast<std::size_t>(i) * m + j] !=
              p_.table[static_cast<std::size_t>(j) * m + i])
            throw UsageError("tabulated p: conflicting values for a symmetric pair");
        }
      }
    }
  }

  double raw_q(const Point& x) const {
    switch (q_.kind) {
      case ScalarSpec::Kind::Constant:
        return q_.value;
      case ScalarSpec::Kind::Expression:
        return q_.expr.eval(x);
      case ScalarSpec::Kind::Tabulated: {
        auto cell = q_.table_grid->locate_cell_closure(x);
        if (!cell) throw DomainError("eval_q: point outside the tabulation grid");
        return q_.table[static_cast<std::size_t>(*cell)];
      }
    }
    throw EvaluationError("eval_q: corrupt spec");
  }

  double raw_p(const Point& x, const Point& y) const {
    switch (p_.kind) {
      case PairSpec::Kind::Constant:
        return p_.value;
      case PairSpec::Kind::Expression:
        return 0.5 * (p_.expr.eval(x, y) + p_.expr.eval(y, x));
      case PairSpec::Kind::Tabulated: {
        auto i = p_.table_grid->locate_cell_closure(x);
        auto j = p_.table_grid->locate_cell_closure(y);
        if (!i || !j) throw DomainError("eval_p: point outside the tabulation grid");
        return p_.table[static_cast<std::size_t>(*i) * p_.table_grid->cell_count() + *j];
      }
    }
    throw EvaluationError("eval_p: corrupt spec");
  }

  // Per-axis lattice size giving roughly `samples` evaluations in total:
  // q is sampled on points (n-dimensional), p on ordered pairs of points.
  int q_lattice_for(int samples) const {
    if (domain_.dim() == 1) return std::max(2, samples);
    return std::max(2, static_cast<int>(std::floor(std::sqrt(static_cast<double>(samples)))));
  }
  int p_lattice_for(int samples) const {
    const double root = domain_.dim() == 1 ? std::sqrt(static_cast<double>(samples))
                                           : std::pow(static_cast<double>(samples), 0.25);
    return std::max(2, static_cast<int>(std::floor(root)));
  }
  int default_q_lattice() const { return domain_.dim() == 1 ? 4097 : 65; }
  int default_p_lattice() const { return domain_.dim() == 1 ? 257 : 17; }

  std::pair<double, double> q_bounds_exact_or_sampled(int per_axis) const {
    double lo = 0, hi = 0;
    switch (q_.kind) {
      case ScalarSpec::Kind::Constant:
        lo = hi = q_.value;
        break;
      case ScalarSpec::Kind::Tabulated: {
        auto [mn, mx] = std::minmax_element(q_.table.begin(), q_.table.end());
        lo = *mn;
        hi = *mx;
        break;
      }
      case ScalarSpec::Kind::Expression: {
        lo = std::numeric_limits<double>::infinity();
        hi = -lo;
        for (const Point& x : closure_lattice(domain_, per_axis)) {
          double v = q_.expr.eval(x);
          if (!std::isfinite(v)) throw EvaluationError("q expression produced a non-finite value");
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        break;
      }
    }
    if (!(lo > 1.0)) throw InvalidExponentError("q must satisfy q(x) > 1 everywhere");
    return {lo, hi};
  }

  std::pair<double, double> p_bounds_exact_or_sampled(int per_axis) const {
    double lo = 0, hi = 0;
    switch (p_.kind) {
      case PairSpec::Kind::Constant:
        lo = hi = p_.value;
        break;
      case PairSpec::Kind::Tabulated: {
        auto [mn, mx] = std::minmax_element(p_.table.begin(), p_.table.end());
        lo = *mn;
        hi = *mx;
        break;
      }
      case PairSpec::Kind::Expression: {
        lo = std::numeric_limits<double>::infinity();
        hi = -lo;
        const std::vector<Point> pts = closure_lattice(domain_, per_axis);
        for (const Point& x : pts) {
          for (const Point& y : pts) {
            double v = 0.5 * (p_.expr.eval(x, y) + p_.expr.eval(y, x));
            if (!std::isfinite(v))
              throw EvaluationError("p expression produced a non-finite value");
            lo = std::min(lo, v);
            hi = std::max(hi, v);
          }
        }
        break;
      }
    }
    if (!(lo > 1.0)) throw InvalidExponentError("p must satisfy p(x,y) > 1 everywhere");
    return {lo, hi};
  }

  double log_holder_at(int per_axis, std::vector<Point>* witness) const {
    const std::vector<Point> pts = closure_lattice(domain_, per_axis);
    std::vector<double> qv(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) qv[i] = eval_q(pts[i]);
    double best = 0.0;
    std::size_t bi = 0, bj = 0;
    bool found = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double d = distance(pts[i], pts[j]);
        if (!(d > 0.0) || d > 0.5) continue;
        const double v = std::abs(qv[i] - qv[j]) * (-std::log(d));
        if (!found || v > best) {
          best = v;
          bi = i;
          bj = j;
          found = true;
        }
      }
    }
    if (witness && found) *witness = {pts[bi], pts[bj]};
    return found ? best : 0.0;
  }

  double bb_at(int per_axis, std::vector<Point>* witness) const {
    const std::vector<Point> pts = closure_lattice(domain_, per_axis);
    const std::size_t L = pts.size();
    std::vector<double> pv(L * L);
    for (std::size_t i = 0; i < L; ++i)
      for (std::size_t j = 0; j < L; ++j) pv[i * L + j] = eval_p(pts[i], pts[j]);
    double best = 0.0;
    std::size_t b0 = 0, b1 = 0, c0 = 0, c1 = 0;
    bool found = false;
    for (std::size_t a = 0; a < L * L; ++a) {
      const std::size_t i = a / L, j = a % L;
      for (std::size_t b = a + 1; b < L * L; ++b) {
        const std::size_t k = b / L, l = b % L;
        const double d = distance(pts[i], pts[k]) + distance(pts[j], pts[l]);
        if (!(d > 0.0) || d > 0.5) continue;
        const double v = std::abs(pv[a] - pv[b]) * (-std::log(d));
        if (!found || v > best) {
          best = v;
          b0 = i;
          b1 = j;
          c0 = k;
          c1 = l;
          found = true;
        }
      }
    }
    if (witness && found) *witness = {pts[b0], pts[b1], pts[c0], pts[c1]};
    return found ? best : 0.0;
  }

  template <class F>
  void attach_density_study(ModulusEstimate& est, int m, F value_at) const {
    const int m2 = std::max(2, (m + 1) / 2);
    const int m3 = std::max(2, (m2 + 1) / 2);
    if (!(m3 < m2 && m2 < m)) {
      est.density_sizes = {m};
      est.density_values = {est.modulus};
      return;
    }
    const double v1 = value_at(m3);
    const double v2 = value_at(m2);
    est.density_sizes = {m3, m2, m};
    est.density_values = {v1, v2, est.modulus};
    const double margin = 0.01 * std::max(1.0, est.modulus);
    est.diverging = (est.modulus > v2 + margin) && (v2 > v1 + margin);
  }

  DomainSpec domain_;
  ScalarSpec q_;
  PairSpec p_;
  double q_minus_ = 0, q_plus_ = 0, p_minus_ = 0, p_plus_ = 0;
};

}  // namespace fsv
