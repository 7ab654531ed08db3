#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fsv/error.hpp"
#include "fsv/geometry.hpp"

namespace fsv {

/// Closed-form expressions over a fixed grammar: constants, coordinates of
/// one or two points, the distance |x-y| between the two points, and the
/// n-ary combinators +, *, min, max. Deliberately no general parser.
///
/// JSON encoding (used in scenario files and tests):
///   number                     constant
///   "x" | "x1" | "x2"          coordinate of the first point
///   "y" | "y1" | "y2"          coordinate of the second point
///   "dist"                     |x - y|
///   ["+"|"*"|"min"|"max", e, e, ...]
class Expr {
 public:
  enum class Op { Constant, Coord, PairDistance, Add, Mul, Min, Max };

  static Expr constant(double v) {
    Expr e;
    e.op_ = Op::Constant;
    e.value_ = v;
    return e;
  }
  static Expr coord(int arg, int axis) {
    Expr e;
    e.op_ = Op::Coord;
    e.arg_ = arg;
    e.axis_ = axis;
    return e;
  }
  static Expr pair_distance() {
    Expr e;
    e.op_ = Op::PairDistance;
    return e;
  }
  static Expr nary(Op op, std::vector<Expr> args) {
    if (args.size() < 2) throw UsageError("expression: combinator needs at least two arguments");
    Expr e;
    e.op_ = op;
    e.kids_ = std::move(args);
    return e;
  }

  double eval(std::span<const Point> pts) const {
    switch (op_) {
      case Op::Constant:
        return value_;
      case Op::Coord:
        return pts[static_cast<std::size_t>(arg_)].c[static_cast<std::size_t>(axis_)];
      case Op::PairDistance:
        return distance(pts[0], pts[1]);
      case Op::Add: {
        double t = 0.0;
        for (const Expr& k : kids_) t += k.eval(pts);
        return t;
      }
      case Op::Mul: {
        double t = 1.0;
        for (const Expr& k : kids_) t *= k.eval(pts);
        return t;
      }
      case Op::Min: {
        double t = kids_.front().eval(pts);
        for (std::size_t i = 1; i < kids_.size(); ++i) t = std::min(t, kids_[i].eval(pts));
        return t;
      }
      case Op::Max: {
        double t = kids_.front().eval(pts);
        for (std::size_t i = 1; i < kids_.size(); ++i) t = std::max(t, kids_[i].eval(pts));
        return t;
      }
    }
    throw EvaluationError("expression: corrupt node");
  }

  double eval(const Point& x) const {
    const Point pts[1] = {x};
    return eval(std::span<const Point>(pts, 1));
  }
  double eval(const Point& x, const Point& y) const {
    const Point pts[2] = {x, y};
    return eval(std::span<const Point>(pts, 2));
  }

  /// Rejects references beyond `max_args` points or beyond dimension `dim`.
  void validate(int dim, int max_args) const {
    switch (op_) {
      case Op::Constant:
        return;
      case Op::Coord:
        if (arg_ >= max_args)
          throw UsageError("expression: second-point coordinate in a one-point context");
        if (axis_ >= dim) throw UsageError("expression: coordinate axis exceeds domain dimension");
        return;
      case Op::PairDistance:
        if (max_args < 2) throw UsageError("expression: 'dist' in a one-point context");
        return;
      default:
        for (const Expr& k : kids_) k.validate(dim, max_args);
    }
  }

 private:
  Op op_ = Op::Constant;
  double value_ = 0.0;
  int arg_ = 0;
  int axis_ = 0;
  std::vector<Expr> kids_;
};

inline Expr expr_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Expr::constant(j.get<double>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "x" || s == "x1") return Expr::coord(0, 0);
    if (s == "x2") return Expr::coord(0, 1);
    if (s == "y" || s == "y1") return Expr::coord(1, 0);
    if (s == "y2") return Expr::coord(1, 1);
    if (s == "dist") return Expr::pair_distance();
    throw UsageError("expression: unknown symbol '" + s + "'");
  }
  if (j.is_array()) {
    if (j.size() < 3 || !j[0].is_string())
      throw UsageError("expression: combinator form is [op, e, e, ...]");
    const std::string op = j[0].get<std::string>();
    Expr::Op kind;
    if (op == "+")
      kind = Expr::Op::Add;
    else if (op == "*")
      kind = Expr::Op::Mul;
    else if (op == "min")
      kind = Expr::Op::Min;
    else if (op == "max")
      kind = Expr::Op::Max;
    else
      throw UsageError("expression: unknown operator '" + op + "'");
    std::vector<Expr> args;
    for (std::size_t i = 1; i < j.size(); ++i) args.push_back(expr_from_json(j[i]));
    return Expr::nary(kind, std::move(args));
  }
  throw UsageError("expression: expected number, symbol, or [op, ...] array");
}

}  // namespace fsv
