#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "fsv/error.hpp"
#include "fsv/grid.hpp"

namespace fsv {

/// A real value per cell plus a real value per boundary node. Cell values
/// enter integrals; boundary values only enter admissibility constraints and
/// trace checks. Immutable after construction.
class GridFunction {
 public:
  GridFunction(std::shared_ptr<const Grid> grid, std::vector<double> cell_values,
               std::vector<double> node_values)
      : grid_(std::move(grid)), cell_(std::move(cell_values)), node_(std::move(node_values)) {
    if (!grid_) throw UsageError("GridFunction: null grid");
    if (static_cast<int>(cell_.size()) != grid_->cell_count() ||
        static_cast<int>(node_.size()) != grid_->boundary_count())
      throw UsageError("GridFunction: value arrays do not match grid sizes");
    for (double v : cell_)
      if (!std::isfinite(v)) throw EvaluationError("GridFunction: non-finite cell value");
    for (double v : node_)
      if (!std::isfinite(v)) throw EvaluationError("GridFunction: non-finite boundary value");
  }

  static GridFunction constant(std::shared_ptr<const Grid> grid, double c) {
    std::vector<double> cells(grid->cell_count(), c);
    std::vector<double> nodes(grid->boundary_count(), c);
    return GridFunction(std::move(grid), std::move(cells), std::move(nodes));
  }

  static GridFunction zero(std::shared_ptr<const Grid> grid) { return constant(std::move(grid), 0.0); }

  static GridFunction indicator(std::shared_ptr<const Grid> grid, const SetMask& m) {
    require_mask(*grid, m, "indicator");
    std::vector<double> cells(grid->cell_count(), 0.0);
    std::vector<double> nodes(grid->boundary_count(), 0.0);
    for (int i = 0; i < grid->cell_count(); ++i) cells[i] = m.cells[i] ? 1.0 : 0.0;
    for (int b = 0; b < grid->boundary_count(); ++b) nodes[b] = m.nodes[b] ? 1.0 : 0.0;
    return GridFunction(std::move(grid), std::move(cells), std::move(nodes));
  }

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  const std::vector<double>& cell_values() const { return cell_; }
  const std::vector<double>& node_values() const { return node_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : cell_) m = std::max(m, std::abs(v));
    for (double v : node_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::shared_ptr<const Grid> grid_;
  std::vector<double> cell_;
  std::vector<double> node_;
};

namespace detail {
inline void require_same_grid(const GridFunction& u, const GridFunction& v, const char* what) {
  if (u.grid_ptr().get() != v.grid_ptr().get())
    throw UsageError(std::string(what) + ": functions live on different grids");
}

template <class F>
GridFunction zip(const GridFunction& u, const GridFunction& v, F f) {
  std::vector<double> cells(u.cell_values().size());
  std::vector<double> nodes(u.node_values().size());
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = f(u.cell_values()[i], v.cell_values()[i]);
  for (std::size_t b = 0; b < nodes.size(); ++b) nodes[b] = f(u.node_values()[b], v.node_values()[b]);
  return GridFunction(u.grid_ptr(), std::move(cells), std::move(nodes));
}

template <class F>
GridFunction map(const GridFunction& u, F f) {
  std::vector<double> cells(u.cell_values().size());
  std::vector<double> nodes(u.node_values().size());
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = f(u.cell_values()[i]);
  for (std::size_t b = 0; b < nodes.size(); ++b) nodes[b] = f(u.node_values()[b]);
  return GridFunction(u.grid_ptr(), std::move(cells), std::move(nodes));
}
}  // namespace detail

inline GridFunction pointwise_max(const GridFunction& u, const GridFunction& v) {
  detail::require_same_grid(u, v, "pointwise_max");
  return detail::zip(u, v, [](double a, double b) { return std::max(a, b); });
}

inline GridFunction pointwise_min(const GridFunction& u, const GridFunction& v) {
  detail::require_same_grid(u, v, "pointwise_min");
  return detail::zip(u, v, [](double a, double b) { return std::min(a, b); });
}

inline GridFunction positive_part(const GridFunction& u) {
  return detail::map(u, [](double a) { return std::max(a, 0.0); });
}

inline GridFunction negative_part(const GridFunction& u) {
  return detail::map(u, [](double a) { return std::max(-a, 0.0); });
}

inline GridFunction absolute_value(const GridFunction& u) {
  return detail::map(u, [](double a) { return std::abs(a); });
}

/// Clamp to [-level, level]; identity once level >= max|u|.
inline GridFunction truncate(const GridFunction& u, double level) {
  if (!(level > 0.0)) throw ParameterError("truncate: level must be positive");
  return detail::map(u, [level](double a) { return std::clamp(a, -level, level); });
}

inline GridFunction scale_and_combine(double alpha, const GridFunction& u, double beta,
                                      const GridFunction& v) {
  detail::require_same_grid(u, v, "scale_and_combine");
  return detail::zip(u, v, [alpha, beta](double a, double b) { return alpha * a + beta * b; });
}

}  // namespace fsv
