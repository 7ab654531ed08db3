#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fsv/exponents.hpp"

using namespace fsv;

namespace {

const DomainSpec kUnit = DomainSpec::interval(0.0, 1.0);

Expr two_plus_x() {
  return Expr::nary(Expr::Op::Add, {Expr::constant(2.0), Expr::coord(0, 0)});
}
Expr two_plus_dist() {
  return Expr::nary(Expr::Op::Add, {Expr::constant(2.0), Expr::pair_distance()});
}
// 2 + indicator(x > 1/2), written as 2 + max(0, min(1, 4000 (x - 1/2)))
// which jumps from 2 to 3 across the midpoint at lattice scale.
Expr jump_q() {
  Expr ramp = Expr::nary(
      Expr::Op::Mul, {Expr::constant(4000.0),
                      Expr::nary(Expr::Op::Add, {Expr::coord(0, 0), Expr::constant(-0.5)})});
  Expr clipped = Expr::nary(Expr::Op::Max,
                            {Expr::constant(0.0), Expr::nary(Expr::Op::Min, {Expr::constant(1.0), ramp})});
  return Expr::nary(Expr::Op::Add, {Expr::constant(2.0), clipped});
}

}  // namespace

TEST_CASE("eval_q") {
  SECTION("constant") {
    ExponentField f = ExponentField::constants(kUnit, 2.0, 2.0);
    CHECK(f.eval_q(make_point(0.3)) == 2.0);
    CHECK(f.eval_q(make_point(1.0)) == 2.0);  // closure point
    CHECK_THROWS_AS(f.eval_q(make_point(1.5)), DomainError);
  }
  SECTION("expression") {
    ExponentField f(kUnit, ScalarSpec::expression(two_plus_x()), PairSpec::constant(2.0));
    CHECK(f.eval_q(make_point(0.5)) == Catch::Approx(2.5));
    CHECK(f.q_minus() == Catch::Approx(2.0));
    CHECK(f.q_plus() == Catch::Approx(3.0));
  }
  SECTION("tabulated") {
    auto g = Grid::build(kUnit, {4, 1});
    ExponentField f(kUnit, ScalarSpec::tabulated(g, {2.0, 3.0, 2.0, 3.0}), PairSpec::constant(2.0));
    CHECK(f.eval_q(make_point(0.375)) == 3.0);  // cell 1
    CHECK(f.eval_q(make_point(0.0)) == 2.0);    // closure endpoint resolves to cell 0
  }
  SECTION("exponent must exceed 1") {
    Expr drifts_low = Expr::nary(Expr::Op::Add, {Expr::constant(0.5), Expr::coord(0, 0)});
    CHECK_THROWS_AS(ExponentField(kUnit, ScalarSpec::expression(drifts_low), PairSpec::constant(2.0)),
                    InvalidExponentError);
    CHECK_THROWS_AS(ExponentField::constants(kUnit, 1.0, 2.0), InvalidExponentError);
  }
}

TEST_CASE("eval_p") {
  SECTION("constant") {
    ExponentField f = ExponentField::constants(kUnit, 2.0, 2.0);
    CHECK(f.eval_p(make_point(0.1), make_point(0.9)) == 2.0);
  }
  SECTION("expression 2 + |x-y|") {
    ExponentField f(kUnit, ScalarSpec::constant(2.0), PairSpec::expression(two_plus_dist()));
    CHECK(f.eval_p(make_point(0.0), make_point(1.0)) == Catch::Approx(3.0));
  }
  SECTION("symmetry holds exactly for random pairs") {
    // an asymmetric expression gets symmetrized by evaluation
    Expr asym = Expr::nary(Expr::Op::Add, {Expr::constant(2.0), Expr::coord(0, 0)});
    ExponentField f(kUnit, ScalarSpec::constant(2.0), PairSpec::expression(asym));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
      Point a = make_point(dist(rng)), b = make_point(dist(rng));
      CHECK(f.eval_p(a, b) == f.eval_p(b, a));
    }
  }
  SECTION("tabulated conflict is a construction error") {
    auto g = Grid::build(kUnit, {2, 1});
    CHECK_THROWS_AS(ExponentField(kUnit, ScalarSpec::constant(2.0),
                                  PairSpec::tabulated(g, {2.0, 2.5, 2.6, 2.0})),
                    UsageError);
    ExponentField ok(kUnit, ScalarSpec::constant(2.0), PairSpec::tabulated(g, {2.0, 2.5, 2.5, 2.0}));
    CHECK(ok.eval_p(g->cell_centers()[0], g->cell_centers()[1]) == 2.5);
  }
}

TEST_CASE("exponent bounds") {
  SECTION("constants are exact") {
    ExponentField f = ExponentField::constants(kUnit, 2.0, 3.0);
    ExponentBounds b = f.exponent_bounds(10);
    CHECK(b.q_minus == 2.0);
    CHECK(b.q_plus == 2.0);
    CHECK(b.p_minus == 3.0);
    CHECK(b.p_plus == 3.0);
  }
  SECTION("expression bounds from a 1001-point lattice") {
    ExponentField f(kUnit, ScalarSpec::expression(two_plus_x()), PairSpec::constant(2.0));
    ExponentBounds b = f.exponent_bounds(1001);
    CHECK(b.q_minus == Catch::Approx(2.0).margin(1e-3));
    CHECK(b.q_plus == Catch::Approx(3.0).margin(1e-3));
  }
  SECTION("tabulated extrema") {
    auto g = Grid::build(kUnit, {3, 1});
    ExponentField f(kUnit, ScalarSpec::tabulated(g, {2.0, 5.0, 3.0}), PairSpec::constant(2.0));
    ExponentBounds b = f.exponent_bounds(1);
    CHECK(b.q_minus == 2.0);
    CHECK(b.q_plus == 5.0);
  }
}

namespace {

// Independent recomputation of the log-Holder modulus over the same lattice
// definition: per-axis count m = samples in 1D, endpoints included.
double log_holder_oracle(const ExponentField& f, int samples) {
  std::vector<Point> pts;
  for (int k = 0; k < samples; ++k)
    pts.push_back(make_point(static_cast<double>(k) / (samples - 1)));
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double d = distance(pts[i], pts[j]);
      if (!(d > 0.0) || d > 0.5) continue;
      best = std::max(best, std::abs(f.eval_q(pts[i]) - f.eval_q(pts[j])) * (-std::log(d)));
    }
  }
  return best;
}

double bb_oracle(const ExponentField& f, int samples) {
  const int m = std::max(2, static_cast<int>(std::floor(std::sqrt(static_cast<double>(samples)))));
  std::vector<Point> pts;
  for (int k = 0; k < m; ++k) pts.push_back(make_point(static_cast<double>(k) / (m - 1)));
  double best = 0.0;
  std::vector<std::pair<Point, Point>> pairs;
  for (const Point& a : pts)
    for (const Point& b : pts) pairs.emplace_back(a, b);
  for (std::size_t u = 0; u < pairs.size(); ++u) {
    for (std::size_t v = u + 1; v < pairs.size(); ++v) {
      double d = distance(pairs[u].first, pairs[v].first) +
                 distance(pairs[u].second, pairs[v].second);
      if (!(d > 0.0) || d > 0.5) continue;
      best = std::max(best, std::abs(f.eval_p(pairs[u].first, pairs[u].second) -
                                     f.eval_p(pairs[v].first, pairs[v].second)) *
                                (-std::log(d)));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("log-Holder modulus") {
  SECTION("constant field gives exactly zero") {
    ExponentField f = ExponentField::constants(kUnit, 2.0, 2.0);
    CHECK(f.check_log_holder(101).modulus == 0.0);
  }
  SECTION("q = 2 + x matches the dense-lattice oracle") {
    ExponentField f(kUnit, ScalarSpec::expression(two_plus_x()), PairSpec::constant(2.0));
    ModulusEstimate est = f.check_log_holder(1001);
    CHECK(est.modulus == Catch::Approx(log_holder_oracle(f, 1001)).margin(1e-6));
    // sup of t * (-log t) over (0, 1/2] sits at t = 1/e
    CHECK(est.modulus == Catch::Approx(1.0 / std::exp(1.0)).margin(1e-3));
    CHECK_FALSE(est.diverging);
    REQUIRE(est.witness.size() == 2);
    CHECK(std::abs(distance(est.witness[0], est.witness[1]) - 1.0 / std::exp(1.0)) < 5e-3);
  }
  SECTION("jump exponent is flagged as diverging") {
    ExponentField f(kUnit, ScalarSpec::expression(jump_q()), PairSpec::constant(2.0));
    ModulusEstimate est = f.check_log_holder(801);
    CHECK(est.diverging);
    REQUIRE(est.density_values.size() == 3);
    CHECK(est.density_values[0] < est.density_values[1]);
    CHECK(est.density_values[1] < est.density_values[2]);
  }
}

TEST_CASE("condition (B-B) modulus") {
  SECTION("constant p gives zero") {
    ExponentField f = ExponentField::constants(kUnit, 2.0, 2.0);
    CHECK(f.check_bb_condition(100).modulus == 0.0);
  }
  SECTION("p = 2 + |x-y| matches the dense-lattice oracle") {
    ExponentField f(kUnit, ScalarSpec::constant(2.0), PairSpec::expression(two_plus_dist()));
    ModulusEstimate est = f.check_bb_condition(900);
    CHECK(est.modulus == Catch::Approx(bb_oracle(f, 900)).margin(1e-6));
    CHECK(est.modulus > 0.0);
    CHECK_FALSE(est.diverging);
  }
  SECTION("jump p is flagged as diverging") {
    ExponentField f(kUnit, ScalarSpec::constant(2.0), PairSpec::expression(jump_q()));
    ModulusEstimate est = f.check_bb_condition(1600);
    CHECK(est.diverging);
  }
}

TEST_CASE("evaluations stay inside the constructed bounds on all grid nodes") {
  auto g = Grid::build(kUnit, {16, 1});
  Expr q = Expr::nary(Expr::Op::Add, {Expr::constant(2.0), Expr::coord(0, 0)});
  Expr p = Expr::nary(Expr::Op::Add, {Expr::constant(2.0), Expr::pair_distance()});
  ExponentField f(kUnit, ScalarSpec::expression(q), PairSpec::expression(p));
  std::vector<Point> pts = g->cell_centers();
  pts.insert(pts.end(), g->boundary_nodes().begin(), g->boundary_nodes().end());
  for (const Point& a : pts) {
    const double qa = f.eval_q(a);
    CHECK(qa >= f.q_minus());
    CHECK(qa <= f.q_plus());
    for (const Point& b : pts) {
      const double pab = f.eval_p(a, b);
      CHECK(pab >= f.p_minus());
      CHECK(pab <= f.p_plus());
    }
  }
}

TEST_CASE("regularity checks reject degenerate sample counts") {
  ExponentField f = ExponentField::constants(kUnit, 2.0, 2.0);
  CHECK_THROWS_AS(f.check_log_holder(1), UsageError);
  CHECK_THROWS_AS(f.exponent_bounds(0), UsageError);
}
