#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fsv/grid_function.hpp"

using namespace fsv;

namespace {

std::shared_ptr<const Grid> grid8() {
  return Grid::build(DomainSpec::interval(0.0, 1.0), {8, 1});
}

GridFunction random_function(const std::shared_ptr<const Grid>& g, std::mt19937_64& rng,
                             double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> cells(g->cell_count()), nodes(g->boundary_count());
  for (double& v : cells) v = dist(rng);
  for (double& v : nodes) v = dist(rng);
  return GridFunction(g, std::move(cells), std::move(nodes));
}

}  // namespace

TEST_CASE("lattice operations") {
  auto g = grid8();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    GridFunction u = random_function(g, rng);
    GridFunction v = random_function(g, rng);
    GridFunction mx = pointwise_max(u, v);
    GridFunction mn = pointwise_min(u, v);
    for (int i = 0; i < g->cell_count(); ++i) {
      CHECK(mx.cell_values()[i] + mn.cell_values()[i] ==
            u.cell_values()[i] + v.cell_values()[i]);
    }
    // absorption: max(u, min(u,v)) == u
    GridFunction absorbed = pointwise_max(u, pointwise_min(u, v));
    CHECK(absorbed.cell_values() == u.cell_values());
    CHECK(absorbed.node_values() == u.node_values());
  }
  GridFunction u = random_function(g, rng);
  GridFunction mm = pointwise_max(u, u);
  CHECK(mm.cell_values() == u.cell_values());
}

TEST_CASE("indicator max is the union indicator") {
  auto g = grid8();
  const int ia[] = {0, 2, 3};
  const int ib[] = {2, 5};
  SetMask a = SetMask::of_cells(*g, ia);
  SetMask b = SetMask::of_cells(*g, ib);
  GridFunction cu = pointwise_max(GridFunction::indicator(g, a), GridFunction::indicator(g, b));
  GridFunction cw = GridFunction::indicator(g, mask_union(a, b));
  CHECK(cu.cell_values() == cw.cell_values());
}

TEST_CASE("positive and negative parts") {
  auto g = grid8();
  GridFunction c = GridFunction::constant(g, -3.0);
  CHECK(positive_part(c).cell_values()[0] == 0.0);
  CHECK(negative_part(c).cell_values()[0] == 3.0);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    GridFunction u = random_function(g, rng);
    GridFunction up = positive_part(u);
    GridFunction un = negative_part(u);
    for (int i = 0; i < g->cell_count(); ++i) {
      CHECK(up.cell_values()[i] >= 0.0);
      CHECK(un.cell_values()[i] >= 0.0);
      CHECK(up.cell_values()[i] - un.cell_values()[i] == u.cell_values()[i]);
    }
  }
}

TEST_CASE("truncation") {
  auto g = grid8();
  GridFunction five = GridFunction::constant(g, 5.0);
  CHECK(truncate(five, 3.0).cell_values()[0] == 3.0);

  std::mt19937_64 rng(13);
  GridFunction u = random_function(g, rng);
  GridFunction same = truncate(u, u.max_abs() + 0.5);
  CHECK(same.cell_values() == u.cell_values());
  // exact fixed point at level == max|u|
  GridFunction at = truncate(u, u.max_abs());
  CHECK(at.cell_values() == u.cell_values());

  GridFunction ab = truncate(truncate(u, 1.0), 0.4);
  GridFunction ba = truncate(u, 0.4);
  CHECK(ab.cell_values() == ba.cell_values());
  CHECK_THROWS_AS(truncate(u, 0.0), ParameterError);
}

TEST_CASE("linear combinations") {
  auto g = grid8();
  std::mt19937_64 rng(17);
  GridFunction u = random_function(g, rng);
  GridFunction v = random_function(g, rng);
  CHECK(scale_and_combine(1.0, u, 0.0, v).cell_values() == u.cell_values());
  CHECK(scale_and_combine(0.0, u, 0.0, v).max_abs() == 0.0);
  GridFunction half = scale_and_combine(0.5, u, 0.5, u);
  for (int i = 0; i < g->cell_count(); ++i)
    CHECK(half.cell_values()[i] == Catch::Approx(u.cell_values()[i]));

  auto g2 = Grid::build(DomainSpec::interval(0.0, 1.0), {4, 1});
  GridFunction w = GridFunction::zero(g2);
  CHECK_THROWS_AS(scale_and_combine(1.0, u, 1.0, w), UsageError);
  CHECK_THROWS_AS(pointwise_max(u, w), UsageError);
}

TEST_CASE("non-finite values are rejected") {
  auto g = grid8();
  std::vector<double> cells(g->cell_count(), 0.0);
  std::vector<double> nodes(g->boundary_count(), 0.0);
  cells[3] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(GridFunction(g, cells, nodes), EvaluationError);
}
