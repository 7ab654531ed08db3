#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "fsv/error.hpp"
#include "fsv/exponents.hpp"
#include "fsv/grid.hpp"
#include "fsv/grid_function.hpp"
#include "fsv/summation.hpp"

namespace fsv {

struct ModularBreakdown {
  double lebesgue = 0.0;
  double gagliardo = 0.0;
  double total = 0.0;
};

/// Evaluates the variable-exponent Lebesgue modular, the singular-kernel
/// Gagliardo double sum, their total, and the exact nodewise gradient, for a
/// fixed (grid, q, p, s).
///
/// Quadrature is piecewise constant at cell centers:
///   lebesgue  = sum_i |u_i|^{q_i} h^n
///   gagliardo = sum_{i != j} |u_i - u_j|^{p_ij} / d_ij^{n + s p_ij} h^{2n}
/// with d_ij the center-to-center distance. Diagonal pairs vanish and are
/// omitted; distinct centers are at least h apart, so every retained term is
/// finite. The ordered-pair sum equals twice the i<j sum because p is
/// symmetric, and doubling is exact in floating point.
///
/// All reductions run through PairwiseAccumulator over a fixed term order
/// (cells ascending; pairs ascending i-major), so results are reproducible
/// bit-for-bit regardless of how callers schedule evaluations. Per-pair
/// exponents and kernel weights are cached when the pair count is moderate;
/// the streaming fallback computes identical terms in the identical order.
class ModularEvaluator {
 public:
  ModularEvaluator(std::shared_ptr<const Grid> grid, ExponentField field, double s,
                   std::size_t pair_cache_limit = kPairCacheLimit)
      : grid_(std::move(grid)), field_(std::move(field)), s_(s) {
    if (!(s_ > 0.0 && s_ < 1.0)) throw ParameterError("s must lie in (0,1)");
    if (!grid_) throw UsageError("ModularEvaluator: null grid");
    const int n = grid_->cell_count();
    measure_ = grid_->cell_measure();
    measure2_ = measure_ * measure_;
    q_.resize(n);
    for (int i = 0; i < n; ++i) q_[i] = field_.eval_q(grid_->cell_centers()[i]);
    const std::size_t pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
    cached_ = pairs <= pair_cache_limit;
    if (cached_) {
      pexp_.resize(pairs);
      kern_.resize(pairs);
      std::size_t k = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++k) {
          pexp_[k] = pair_exponent(i, j);
          kern_[k] = pair_kernel(i, j, pexp_[k]);
        }
      }
    }
  }

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  const ExponentField& field() const { return field_; }
  double s() const { return s_; }
  const std::vector<double>& cell_exponents() const { return q_; }

  double lebesgue(std::span<const double> cells) const {
    require_cells(cells);
    PairwiseAccumulator acc;
    for (std::size_t i = 0; i < cells.size(); ++i)
      acc.add(std::pow(std::abs(cells[i]), q_[i]) * measure_);
    return acc.total();
  }

  double gagliardo(std::span<const double> cells) const {
    require_cells(cells);
    const int n = grid_->cell_count();
    PairwiseAccumulator acc;
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j, ++k) {
        const double pij = cached_ ? pexp_[k] : pair_exponent(i, j);
        const double w = cached_ ? kern_[k] : pair_kernel(i, j, pij);
        acc.add(std::pow(std::abs(cells[i] - cells[j]), pij) * w);
      }
    }
    return 2.0 * acc.total();
  }

  ModularBreakdown evaluate(std::span<const double> cells) const {
    ModularBreakdown b;
    b.lebesgue = lebesgue(cells);
    b.gagliardo = gagliardo(cells);
    b.total = b.lebesgue + b.gagliardo;
    return b;
  }

  /// d/du_i of the total modular:
  ///   q_i |u_i|^{q_i - 1} sgn(u_i) h^n
  ///   + sum_{j != i} 2 p_ij |u_i - u_j|^{p_ij - 1} sgn(u_i - u_j) w_ij.
  /// Exponents exceed 1, so the terms vanish continuously at u_i = 0 and
  /// u_i = u_j and the modular is differentiable.
  void gradient(std::span<const double> cells, std::vector<double>& out) const {
    require_cells(cells);
    const int n = grid_->cell_count();
    out.assign(cells.size(), 0.0);
    for (int i = 0; i < n; ++i)
      out[i] = q_[i] * std::pow(std::abs(cells[i]), q_[i] - 1.0) * sgn(cells[i]) * measure_;
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j, ++k) {
        const double pij = cached_ ? pexp_[k] : pair_exponent(i, j);
        const double w = cached_ ? kern_[k] : pair_kernel(i, j, pij);
        const double diff = cells[i] - cells[j];
        const double t = 2.0 * pij * std::pow(std::abs(diff), pij - 1.0) * sgn(diff) * w;
        out[i] += t;
        out[j] -= t;
      }
    }
  }

  double lebesgue(const GridFunction& u) const {
    require_grid(u);
    return lebesgue(std::span<const double>(u.cell_values()));
  }
  double gagliardo(const GridFunction& u) const {
    require_grid(u);
    return gagliardo(std::span<const double>(u.cell_values()));
  }
  ModularBreakdown evaluate(const GridFunction& u) const {
    require_grid(u);
    return evaluate(std::span<const double>(u.cell_values()));
  }
  GridFunction gradient(const GridFunction& u) const {
    require_grid(u);
    std::vector<double> g;
    gradient(std::span<const double>(u.cell_values()), g);
    std::vector<double> nodes(grid_->boundary_count(), 0.0);
    return GridFunction(grid_, std::move(g), std::move(nodes));
  }

  static constexpr std::size_t kPairCacheLimit = 1u << 21;  // ~2M pairs, 32 MiB

 private:
  static double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

  double pair_exponent(int i, int j) const {
    return field_.eval_p(grid_->cell_centers()[i], grid_->cell_centers()[j]);
  }
  double pair_kernel(int i, int j, double pij) const {
    const double d = distance(grid_->cell_centers()[i], grid_->cell_centers()[j]);
    return measure2_ / std::pow(d, grid_->dim() + s_ * pij);
  }

  void require_cells(std::span<const double> cells) const {
    if (static_cast<int>(cells.size()) != grid_->cell_count())
      throw UsageError("modular: cell value array does not match grid");
    for (double v : cells)
      if (!std::isfinite(v)) throw EvaluationError("modular: non-finite cell value");
  }
  void require_grid(const GridFunction& u) const {
    if (u.grid_ptr().get() != grid_.get())
      throw UsageError("modular: function lives on a different grid");
  }

  std::shared_ptr<const Grid> grid_;
  ExponentField field_;
  double s_;
  double measure_ = 0.0, measure2_ = 0.0;
  std::vector<double> q_;
  bool cached_ = false;
  std::vector<double> pexp_, kern_;
};

inline double lebesgue_modular(const GridFunction& u, const ExponentField& field) {
  // The Lebesgue part needs no s; any interior value works.
  ModularEvaluator ev(u.grid_ptr(), field, 0.5);
  return ev.lebesgue(u);
}

inline double gagliardo_modular(const GridFunction& u, const ExponentField& field, double s) {
  ModularEvaluator ev(u.grid_ptr(), field, s);
  return ev.gagliardo(u);
}

inline ModularBreakdown sobolev_modular(const GridFunction& u, const ExponentField& field,
                                        double s) {
  ModularEvaluator ev(u.grid_ptr(), field, s);
  return ev.evaluate(u);
}

inline GridFunction modular_gradient(const GridFunction& u, const ExponentField& field, double s) {
  ModularEvaluator ev(u.grid_ptr(), field, s);
  return ev.gradient(u);
}

}  // namespace fsv
