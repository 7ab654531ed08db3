#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "fsv/error.hpp"

namespace fsv {

/// A point of R^n, n in {1,2}. The second coordinate is unused when dim == 1.
struct Point {
  int dim = 1;
  std::array<double, 2> c{0.0, 0.0};

  double x() const { return c[0]; }
  double y() const { return c[1]; }
};

inline Point make_point(double x) { return Point{1, {x, 0.0}}; }
inline Point make_point(double x, double y) { return Point{2, {x, y}}; }

inline double distance(const Point& a, const Point& b) {
  const double dx = a.c[0] - b.c[0];
  if (a.dim == 1) return std::abs(dx);
  const double dy = a.c[1] - b.c[1];
  return std::hypot(dx, dy);
}

/// Axis-aligned closed box; only the first `dim` axes are meaningful.
struct Box {
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{0.0, 0.0};
};

/// A bounded open domain: an interval (dim 1) or an axis-aligned rectangle
/// (dim 2), minus a finite union of closed sub-boxes with pairwise disjoint
/// interiors.
class DomainSpec {
 public:
  DomainSpec(int dim, std::array<double, 2> lo, std::array<double, 2> hi,
             std::vector<Box> holes = {})
      : dim_(dim), bounds_{lo, hi}, holes_(std::move(holes)) {
    if (dim_ != 1 && dim_ != 2) throw GridError("domain dimension must be 1 or 2");
    for (int d = 0; d < dim_; ++d) {
      if (!(std::isfinite(lo[d]) && std::isfinite(hi[d]) && lo[d] < hi[d]))
        throw GridError("domain bounds must satisfy lo < hi on every axis");
    }
    for (const Box& h : holes_) {
      for (int d = 0; d < dim_; ++d) {
        if (!(h.lo[d] < h.hi[d])) throw GridError("hole must have positive extent");
        if (h.lo[d] < bounds_.lo[d] - kGeomTol || h.hi[d] > bounds_.hi[d] + kGeomTol)
          throw GridError("hole must lie inside the domain bounds");
      }
    }
    for (std::size_t a = 0; a < holes_.size(); ++a) {
      for (std::size_t b = a + 1; b < holes_.size(); ++b) {
        if (interiors_overlap(holes_[a], holes_[b]))
          throw GridError("holes must have pairwise disjoint interiors");
      }
    }
  }

  static DomainSpec interval(double a, double b, std::vector<Box> holes = {}) {
    return DomainSpec(1, {a, 0.0}, {b, 0.0}, std::move(holes));
  }
  static DomainSpec rectangle(std::array<double, 2> lo, std::array<double, 2> hi,
                              std::vector<Box> holes = {}) {
    return DomainSpec(2, lo, hi, std::move(holes));
  }

  int dim() const { return dim_; }
  const Box& bounds() const { return bounds_; }
  const std::vector<Box>& holes() const { return holes_; }

  /// Membership in the open set Omega.
  bool contains_open(const Point& p) const {
    for (int d = 0; d < dim_; ++d) {
      if (!(p.c[d] > bounds_.lo[d] && p.c[d] < bounds_.hi[d])) return false;
    }
    for (const Box& h : holes_) {
      if (in_closed_box(h, p)) return false;
    }
    return true;
  }

  /// Membership in the closure of Omega (tolerance kGeomTol on the outer box).
  bool contains_closure(const Point& p) const {
    for (int d = 0; d < dim_; ++d) {
      if (p.c[d] < bounds_.lo[d] - kGeomTol || p.c[d] > bounds_.hi[d] + kGeomTol)
        return false;
    }
    for (const Box& h : holes_) {
      if (in_open_box(h, p)) return false;
    }
    return true;
  }

  /// Lebesgue measure of Omega (holes have disjoint interiors, so additive).
  double volume() const {
    double v = box_volume(bounds_);
    for (const Box& h : holes_) v -= box_volume(h);
    return v;
  }

  static constexpr double kGeomTol = 1e-12;

 private:
  bool in_closed_box(const Box& b, const Point& p) const {
    for (int d = 0; d < dim_; ++d) {
      if (p.c[d] < b.lo[d] || p.c[d] > b.hi[d]) return false;
    }
    return true;
  }
  bool in_open_box(const Box& b, const Point& p) const {
    for (int d = 0; d < dim_; ++d) {
      if (p.c[d] <= b.lo[d] || p.c[d] >= b.hi[d]) return false;
    }
    return true;
  }
  bool interiors_overlap(const Box& a, const Box& b) const {
    for (int d = 0; d < dim_; ++d) {
      if (std::max(a.lo[d], b.lo[d]) >= std::min(a.hi[d], b.hi[d])) return false;
    }
    return true;
  }
  double box_volume(const Box& b) const {
    double v = 1.0;
    for (int d = 0; d < dim_; ++d) v *= (b.hi[d] - b.lo[d]);
    return v;
  }

  int dim_;
  Box bounds_;
  std::vector<Box> holes_;
};

}  // namespace fsv
