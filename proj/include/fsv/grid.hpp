#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fsv/error.hpp"
#include "fsv/geometry.hpp"

namespace fsv {

/// Uniform cell-centered discretization of a bounded open domain.
///
/// Cells carry the Lebesgue weight h^n; the boundary is represented by
/// explicit zero-measure nodes placed at the midpoints of cell faces lying on
/// the topological boundary (outer box or hole walls). Each boundary node is
/// adjacent to exactly one cell. Cells are ordered lexicographically by
/// lattice index (axis 0 major), boundary nodes lexicographically by
/// coordinates; both orders are deterministic.
///
/// Hole faces must lie on the cell lattice so that the kept cells tile Omega
/// exactly and the sum of cell measures equals |Omega|.
class Grid {
 public:
  static std::shared_ptr<const Grid> build(const DomainSpec& domain,
                                           std::array<int, 2> resolution) {
    return std::shared_ptr<const Grid>(new Grid(domain, resolution));
  }

  int dim() const { return domain_.dim(); }
  const DomainSpec& domain() const { return domain_; }
  std::array<int, 2> resolution() const { return res_; }
  std::array<double, 2> spacing() const { return h_; }
  double cell_measure() const { return cell_measure_; }
  double domain_volume() const { return domain_.volume(); }

  int cell_count() const { return static_cast<int>(centers_.size()); }
  int boundary_count() const { return static_cast<int>(nodes_.size()); }

  const std::vector<Point>& cell_centers() const { return centers_; }
  const std::vector<Point>& boundary_nodes() const { return nodes_; }

  /// Cell -> neighbouring cells sharing a face (sorted, symmetric).
  const std::vector<std::vector<int>>& cell_neighbors() const { return cell_nbrs_; }
  /// Boundary node -> its unique adjacent cell.
  const std::vector<int>& node_cell() const { return node_cell_; }
  /// Cell -> boundary nodes sitting on its faces.
  const std::vector<std::vector<int>>& cell_nodes() const { return cell_nodes_; }

  /// Index of the cell whose half-open box contains p, for p in the open set.
  std::optional<int> locate_cell(const Point& p) const {
    if (!domain_.contains_open(p)) return std::nullopt;
    std::array<int, 2> ij{0, 0};
    for (int d = 0; d < dim(); ++d) {
      double t = (p.c[d] - domain_.bounds().lo[d]) / h_[d];
      ij[d] = std::clamp(static_cast<int>(std::floor(t)), 0, res_[d] - 1);
    }
    int cell = lattice_[lattice_index(ij)];
    return cell >= 0 ? std::optional<int>(cell) : std::nullopt;
  }

  /// Like locate_cell but accepts closure points (boundary and hole walls);
  /// a point on a lattice line resolves to the lowest adjacent kept cell.
  std::optional<int> locate_cell_closure(const Point& p) const {
    if (!domain_.contains_closure(p)) return std::nullopt;
    std::array<std::vector<int>, 2> cand;
    for (int d = 0; d < dim(); ++d) {
      double t = (p.c[d] - domain_.bounds().lo[d]) / h_[d];
      int base = std::clamp(static_cast<int>(std::floor(t)), 0, res_[d] - 1);
      double r = std::round(t);
      if (std::abs(t - r) <= 1e-9 * std::max(1.0, std::abs(t))) {
        int k = static_cast<int>(r);
        if (k - 1 >= 0 && k - 1 < res_[d]) cand[d].push_back(k - 1);
        if (k >= 0 && k < res_[d]) cand[d].push_back(k);
      } else {
        cand[d].push_back(base);
      }
      std::sort(cand[d].begin(), cand[d].end());
      cand[d].erase(std::unique(cand[d].begin(), cand[d].end()), cand[d].end());
    }
    if (dim() == 1) cand[1] = {0};
    for (int ix : cand[0]) {
      for (int iy : cand[1]) {
        int cell = lattice_[lattice_index({ix, iy})];
        if (cell >= 0) return cell;
      }
    }
    return std::nullopt;
  }

  /// Boundary node at the given coordinates, if present (tolerance 1e-12).
  std::optional<int> find_boundary_node(const Point& p) const {
    for (int b = 0; b < boundary_count(); ++b) {
      if (std::abs(nodes_[b].c[0] - p.c[0]) <= 1e-12 &&
          std::abs(nodes_[b].c[1] - p.c[1]) <= 1e-12)
        return b;
    }
    return std::nullopt;
  }

  /// Grid over Omega minus the closed cells flagged in `cells`, at the same
  /// resolution. Deleted cell boxes become holes of the new domain.
  std::shared_ptr<const Grid> without_cells(std::span<const std::uint8_t> cells) const {
    if (static_cast<int>(cells.size()) != cell_count())
      throw UsageError("cell flag array does not match grid size");
    std::vector<Box> holes = domain_.holes();
    for (int i = 0; i < cell_count(); ++i) {
      if (!cells[i]) continue;
      holes.push_back(cell_box(i));
    }
    DomainSpec reduced(dim(), domain_.bounds().lo, domain_.bounds().hi, std::move(holes));
    return build(reduced, res_);
  }

  /// Closed box of cell i.
  Box cell_box(int i) const {
    const auto ij = cell_lattice_[i];
    Box b;
    for (int d = 0; d < dim(); ++d) {
      b.lo[d] = domain_.bounds().lo[d] + ij[d] * h_[d];
      b.hi[d] = domain_.bounds().lo[d] + (ij[d] + 1) * h_[d];
    }
    return b;
  }

 private:
  Grid(const DomainSpec& domain, std::array<int, 2> resolution)
      : domain_(domain), res_(resolution) {
    const int n = dim();
    if (n == 1) res_[1] = 1;
    for (int d = 0; d < n; ++d) {
      if (res_[d] < 2) throw GridError("resolution must be >= 2 per axis");
      h_[d] = (domain_.bounds().hi[d] - domain_.bounds().lo[d]) / res_[d];
    }
    if (n == 1) h_[1] = 1.0;
    cell_measure_ = h_[0] * (n == 2 ? h_[1] : 1.0);

    check_hole_alignment();

    lattice_.assign(static_cast<std::size_t>(res_[0]) * res_[1], -1);
    for (int ix = 0; ix < res_[0]; ++ix) {
      for (int iy = 0; iy < res_[1]; ++iy) {
        Point c = lattice_center({ix, iy});
        if (!domain_.contains_open(c)) continue;
        lattice_[lattice_index({ix, iy})] = static_cast<int>(centers_.size());
        centers_.push_back(c);
        cell_lattice_.push_back({ix, iy});
      }
    }
    if (centers_.empty()) throw GridError("domain is empty at this resolution");

    const double tiled = cell_measure_ * static_cast<double>(centers_.size());
    const double vol = domain_.volume();
    if (std::abs(tiled - vol) > 1e-12 * std::max(1.0, std::abs(vol)))
      throw GridError("cells do not tile the domain; hole faces must lie on the cell lattice");

    build_adjacency();
    build_boundary_nodes();
  }

  std::size_t lattice_index(std::array<int, 2> ij) const {
    return static_cast<std::size_t>(ij[0]) * res_[1] + ij[1];
  }

  Point lattice_center(std::array<int, 2> ij) const {
    Point p;
    p.dim = dim();
    for (int d = 0; d < dim(); ++d)
      p.c[d] = domain_.bounds().lo[d] + (ij[d] + 0.5) * h_[d];
    return p;
  }

  void check_hole_alignment() const {
    for (const Box& hole : domain_.holes()) {
      for (int d = 0; d < dim(); ++d) {
        for (double edge : {hole.lo[d], hole.hi[d]}) {
          double t = (edge - domain_.bounds().lo[d]) / h_[d];
          if (std::abs(t - std::round(t)) > 1e-9 * std::max(1.0, std::abs(t)))
            throw GridError("hole faces must lie on the cell lattice");
        }
      }
    }
  }

  void build_adjacency() {
    cell_nbrs_.assign(centers_.size(), {});
    for (int i = 0; i < cell_count(); ++i) {
      const auto ij = cell_lattice_[i];
      for (int d = 0; d < dim(); ++d) {
        for (int step : {-1, +1}) {
          auto nb = ij;
          nb[d] += step;
          if (nb[d] < 0 || nb[d] >= res_[d]) continue;
          int j = lattice_[lattice_index(nb)];
          if (j >= 0) cell_nbrs_[i].push_back(j);
        }
      }
      std::sort(cell_nbrs_[i].begin(), cell_nbrs_[i].end());
    }
  }

  void build_boundary_nodes() {
    struct Face {
      Point mid;
      int cell;
    };
    std::vector<Face> faces;
    for (int i = 0; i < cell_count(); ++i) {
      const auto ij = cell_lattice_[i];
      for (int d = 0; d < dim(); ++d) {
        for (int step : {-1, +1}) {
          auto nb = ij;
          nb[d] += step;
          bool open = nb[d] >= 0 && nb[d] < res_[d] && lattice_[lattice_index(nb)] >= 0;
          if (open) continue;
          Point mid = centers_[i];
          mid.c[d] += 0.5 * step * h_[d];
          faces.push_back({mid, i});
        }
      }
    }
    std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
      if (a.mid.c[0] != b.mid.c[0]) return a.mid.c[0] < b.mid.c[0];
      return a.mid.c[1] < b.mid.c[1];
    });
    cell_nodes_.assign(centers_.size(), {});
    nodes_.reserve(faces.size());
    node_cell_.reserve(faces.size());
    for (const Face& f : faces) {
      int b = static_cast<int>(nodes_.size());
      nodes_.push_back(f.mid);
      node_cell_.push_back(f.cell);
      cell_nodes_[f.cell].push_back(b);
    }
  }

  DomainSpec domain_;
  std::array<int, 2> res_{2, 1};
  std::array<double, 2> h_{0.0, 1.0};
  double cell_measure_ = 0.0;
  std::vector<int> lattice_;  // full lattice -> kept cell index or -1
  std::vector<Point> centers_;
  std::vector<std::array<int, 2>> cell_lattice_;
  std::vector<std::vector<int>> cell_nbrs_;
  std::vector<Point> nodes_;
  std::vector<int> node_cell_;
  std::vector<std::vector<int>> cell_nodes_;
};

/// A subset of the closed domain: flags over cells and boundary nodes.
struct SetMask {
  std::vector<std::uint8_t> cells;
  std::vector<std::uint8_t> nodes;

  static SetMask empty(const Grid& g) {
    SetMask m;
    m.cells.assign(g.cell_count(), 0);
    m.nodes.assign(g.boundary_count(), 0);
    return m;
  }

  static SetMask of_cells(const Grid& g, std::span<const int> cell_indices) {
    SetMask m = empty(g);
    for (int i : cell_indices) {
      if (i < 0 || i >= g.cell_count()) throw UsageError("cell index out of range");
      m.cells[i] = 1;
    }
    return m;
  }

  static SetMask of_nodes(const Grid& g, std::span<const int> node_indices) {
    SetMask m = empty(g);
    for (int b : node_indices) {
      if (b < 0 || b >= g.boundary_count()) throw UsageError("boundary node index out of range");
      m.nodes[b] = 1;
    }
    return m;
  }

  static SetMask full(const Grid& g) {
    SetMask m;
    m.cells.assign(g.cell_count(), 1);
    m.nodes.assign(g.boundary_count(), 1);
    return m;
  }

  bool matches(const Grid& g) const {
    return static_cast<int>(cells.size()) == g.cell_count() &&
           static_cast<int>(nodes.size()) == g.boundary_count();
  }

  int cell_population() const {
    int k = 0;
    for (auto f : cells) k += f ? 1 : 0;
    return k;
  }
  int node_population() const {
    int k = 0;
    for (auto f : nodes) k += f ? 1 : 0;
    return k;
  }
  bool any() const { return cell_population() + node_population() > 0; }

  std::vector<int> cell_indices() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(cells.size()); ++i)
      if (cells[i]) out.push_back(i);
    return out;
  }
  std::vector<int> node_indices() const {
    std::vector<int> out;
    for (int b = 0; b < static_cast<int>(nodes.size()); ++b)
      if (nodes[b]) out.push_back(b);
    return out;
  }
};

inline void require_mask(const Grid& g, const SetMask& m, const char* what) {
  if (!m.matches(g)) throw UsageError(std::string(what) + ": mask does not match grid");
}

inline SetMask mask_union(const SetMask& a, const SetMask& b) {
  if (a.cells.size() != b.cells.size() || a.nodes.size() != b.nodes.size())
    throw UsageError("mask_union: size mismatch");
  SetMask r = a;
  for (std::size_t i = 0; i < b.cells.size(); ++i) r.cells[i] |= b.cells[i];
  for (std::size_t i = 0; i < b.nodes.size(); ++i) r.nodes[i] |= b.nodes[i];
  return r;
}

inline SetMask mask_intersection(const SetMask& a, const SetMask& b) {
  if (a.cells.size() != b.cells.size() || a.nodes.size() != b.nodes.size())
    throw UsageError("mask_intersection: size mismatch");
  SetMask r = a;
  for (std::size_t i = 0; i < b.cells.size(); ++i) r.cells[i] &= b.cells[i];
  for (std::size_t i = 0; i < b.nodes.size(); ++i) r.nodes[i] &= b.nodes[i];
  return r;
}

inline bool mask_subset(const SetMask& a, const SetMask& b) {
  if (a.cells.size() != b.cells.size() || a.nodes.size() != b.nodes.size())
    throw UsageError("mask_subset: size mismatch");
  for (std::size_t i = 0; i < a.cells.size(); ++i)
    if (a.cells[i] && !b.cells[i]) return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i)
    if (a.nodes[i] && !b.nodes[i]) return false;
  return true;
}

inline bool mask_disjoint_cells(const SetMask& a, const SetMask& b) {
  for (std::size_t i = 0; i < a.cells.size(); ++i)
    if (a.cells[i] && b.cells[i]) return false;
  return true;
}

/// Mask selecting every boundary node and no cells.
inline SetMask boundary_mask(const Grid& g) {
  SetMask m = SetMask::empty(g);
  std::fill(m.nodes.begin(), m.nodes.end(), std::uint8_t{1});
  return m;
}

/// One adjacency ring around the mask: the minimal relatively open superset
/// under the grid topology. Adds the cells adjacent to flagged cells or
/// flagged boundary nodes, and the boundary nodes sitting on flagged cells.
inline SetMask open_neighborhood(const Grid& g, const SetMask& m) {
  require_mask(g, m, "open_neighborhood");
  SetMask r = m;
  for (int i = 0; i < g.cell_count(); ++i) {
    if (!m.cells[i]) continue;
    for (int j : g.cell_neighbors()[i]) r.cells[j] = 1;
    for (int b : g.cell_nodes()[i]) r.nodes[b] = 1;
  }
  for (int b = 0; b < g.boundary_count(); ++b) {
    if (m.nodes[b]) r.cells[g.node_cell()[b]] = 1;
  }
  return r;
}

/// Lebesgue measure of the mask; boundary nodes carry zero weight.
inline double measure(const Grid& g, const SetMask& m) {
  require_mask(g, m, "measure");
  return g.cell_measure() * static_cast<double>(m.cell_population());
}

}  // namespace fsv
