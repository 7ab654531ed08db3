#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fsv/modular.hpp"

namespace fsv {

/// Luxembourg-type norm value with solver diagnostics. The residual is
/// |rho(u / value) - 1|; it is zero by convention for the zero function.
struct NormReport {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

namespace detail {

/// Bisection for inf{ lambda > 0 : rho(u/lambda) <= 1 } when lambda ->
/// rho(u/lambda) is continuous and strictly decreasing to 0 (u != 0).
/// The bracket starts at [eps, max(1, rho(u)) * (1 + max|u|)] and the top is
/// doubled until rho at the top is <= 1, so bracketing is guaranteed;
/// overflow of rho at tiny lambda saturates to +inf and compares correctly.
template <class RhoFn>
NormReport luxembourg_bisect(const RhoFn& rho, double max_abs_u, int max_iterations = 300) {
  NormReport r;
  double lo = 1e-300;
  double hi = std::max(1.0, rho(1.0)) * (1.0 + max_abs_u);
  int iters = 0;
  while (rho(hi) > 1.0) {
    hi *= 2.0;
    ++iters;
    if (!(hi < 1e300)) break;
  }
  // Geometric phase first: the bracket bottom starts near the underflow
  // floor, and log-space halving collapses those decades in a few steps.
  while (hi / lo > 4.0 && iters < max_iterations) {
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    if (rho(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
    ++iters;
  }
  // Width target 1e-10 relative; keep polishing while the residual at the
  // feasible end is above 1e-9 and the bracket still has slack.
  while (iters < max_iterations) {
    const bool wide = (hi - lo) > 1e-10 * std::max(1.0, hi);
    const bool rough = std::abs(rho(hi) - 1.0) > 1e-9;
    if (!wide && !rough) break;
    if ((hi - lo) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) break;
    const double mid = 0.5 * (lo + hi);
    if (rho(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
    ++iters;
  }
  r.value = hi;
  r.lo = lo;
  r.hi = hi;
  r.iterations = iters;
  r.residual = std::abs(rho(hi) - 1.0);
  return r;
}

inline std::vector<double> scaled(const std::vector<double>& v, double inv_lambda) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * inv_lambda;
  return out;
}

inline bool all_cells_zero(const GridFunction& u) {
  for (double v : u.cell_values())
    if (v != 0.0) return false;
  return true;
}

inline bool cells_constant(const GridFunction& u) {
  if (u.cell_values().empty()) return true;
  const double c = u.cell_values().front();
  for (double v : u.cell_values())
    if (v != c) return false;
  return true;
}

}  // namespace detail

/// inf{ lambda > 0 : lebesgue_modular(u/lambda) <= 1 }; exactly 0 iff u
/// vanishes on all cells.
inline NormReport luxembourg_norm(const GridFunction& u, const ExponentField& field) {
  if (detail::all_cells_zero(u)) return {};
  ModularEvaluator ev(u.grid_ptr(), field, 0.5);
  const auto& cells = u.cell_values();
  auto rho = [&](double lambda) { return ev.lebesgue(detail::scaled(cells, 1.0 / lambda)); };
  return detail::luxembourg_bisect(rho, u.max_abs());
}

/// inf{ lambda > 0 : gagliardo_modular(u/lambda) <= 1 }; 0 for constants.
inline NormReport gagliardo_seminorm(const GridFunction& u, const ExponentField& field, double s) {
  ModularEvaluator ev(u.grid_ptr(), field, s);
  if (detail::cells_constant(u)) return {};
  const auto& cells = u.cell_values();
  auto rho = [&](double lambda) { return ev.gagliardo(detail::scaled(cells, 1.0 / lambda)); };
  return detail::luxembourg_bisect(rho, u.max_abs());
}

/// Luxembourg norm plus Gagliardo seminorm.
inline double sobolev_norm(const GridFunction& u, const ExponentField& field, double s) {
  return luxembourg_norm(u, field).value + gagliardo_seminorm(u, field, s).value;
}

/// Norm induced by the full modular: inf{ lambda : total(u/lambda) <= 1 }.
/// Equivalent to sobolev_norm (no constants are asserted).
inline NormReport modular_norm(const GridFunction& u, const ExponentField& field, double s) {
  ModularEvaluator ev(u.grid_ptr(), field, s);
  if (detail::all_cells_zero(u)) return {};
  const auto& cells = u.cell_values();
  auto rho = [&](double lambda) {
    return ev.evaluate(detail::scaled(cells, 1.0 / lambda)).total;
  };
  return detail::luxembourg_bisect(rho, u.max_abs());
}

}  // namespace fsv
