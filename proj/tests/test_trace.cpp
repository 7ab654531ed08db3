#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fsv/trace.hpp"

using namespace fsv;

namespace {

const DomainSpec kUnit = DomainSpec::interval(0.0, 1.0);

std::shared_ptr<const Grid> interval_grid(int n) { return Grid::build(kUnit, {n, 1}); }

// a fixed profile scaled to Sobolev norm 0.9, used to build gap-compliant sequences
GridFunction unit_ball_profile(const std::shared_ptr<const Grid>& g, const ExponentField& f,
                               double s) {
  std::vector<double> cells(g->cell_count());
  for (int i = 0; i < g->cell_count(); ++i)
    cells[i] = 0.3 * std::sin(3.0 * g->cell_centers()[i].x());
  GridFunction base(g, cells, std::vector<double>(g->boundary_count(), 0.1));
  const double norm = sobolev_norm(base, f, s);
  return scale_and_combine(0.9 / norm, base, 0.0, base);
}

}  // namespace

TEST_CASE("quasi-uniform convergence certificate") {
  auto g = interval_grid(16);
  ExponentField f = ExponentField::constants(kUnit, 2.0, 2.0);
  ModularEvaluator ev(g, f, 0.5);

  SECTION("constant sequences certify trivially") {
    GridFunction u = GridFunction::constant(g, 0.4);
    ConvergenceCertificate cert = quasi_convergence_certificate({u, u, u, u}, ev);
    CHECK(cert.verdict);
    for (const CertificateRecord& r : cert.records) {
      CHECK(r.bound == 0.0);
      CHECK_FALSE(r.level_set.any());
    }
  }
  SECTION("the geometric construction passes with budgets honored") {
    GridFunction u = unit_ball_profile(g, f, 0.5);
    std::vector<GridFunction> seq;
    for (int i = 1; i <= 5; ++i)
      seq.push_back(scale_and_combine(1.0 - std::pow(8.0, -i), u, 0.0, u));
    ConvergenceCertificate cert = quasi_convergence_certificate(seq, ev);
    CHECK(cert.verdict);
    REQUIRE(cert.records.size() == 4);
    double literal = 0.0;
    for (const CertificateRecord& r : cert.records) {
      CHECK(r.bound <= r.budget + 1e-9);
      CHECK(r.threshold == std::pow(2.0, -r.index));
      literal += r.budget;
    }
    CHECK(cert.exceptional_bound == literal);
    CHECK(cert.tail_start == 1);
  }
  SECTION("certified bounds dominate the solver capacity of each level set") {
    GridFunction u = unit_ball_profile(g, f, 0.5);
    std::vector<GridFunction> seq;
    for (int i = 1; i <= 4; ++i)
      seq.push_back(scale_and_combine(1.0 - std::pow(8.0, -i), u, 0.0, u));
    ConvergenceCertificate cert = quasi_convergence_certificate(seq, ev);
    for (const CertificateRecord& r : cert.records) {
      const double exact = capacity_set(r.level_set, ev).value;
      CHECK(r.bound >= exact - 1e-8);
    }
  }
  SECTION("an oversized gap is rejected at the right index") {
    GridFunction u = unit_ball_profile(g, f, 0.5);
    std::vector<GridFunction> seq = {
        scale_and_combine(0.0, u, 0.0, u),
        scale_and_combine(0.05, u, 0.0, u),   // gap 0.045 <= 1/8
        scale_and_combine(1000.0, u, 0.0, u)  // gap far above 1/64
    };
    try {
      quasi_convergence_certificate(seq, ev);
      FAIL("expected CertificateInapplicableError");
    } catch (const CertificateInapplicableError& e) {
      CHECK(e.index() == 2);
      CHECK(e.gap_norm() > e.allowed());
    }
    std::vector<GridFunction> first_bad = {GridFunction::zero(g), GridFunction::constant(g, 1.0)};
    CHECK_THROWS_AS(quasi_convergence_certificate(first_bad, ev), CertificateInapplicableError);
  }
  SECTION("needs at least two functions") {
    CHECK_THROWS_AS(quasi_convergence_certificate({GridFunction::zero(g)}, ev), UsageError);
  }
}

TEST_CASE("boundary trace deficiency") {
  auto g = interval_grid(16);
  ExponentField f = ExponentField::constants(kUnit, 2.0, 2.0);
  ModularEvaluator ev(g, f, 0.5);

  SECTION("zero boundary values mean zero deficiency for every eps") {
    std::vector<double> cells(g->cell_count(), 42.0);
    GridFunction u(g, cells, std::vector<double>(g->boundary_count(), 0.0));
    for (double eps : {1e-6, 0.1, 1.0}) CHECK(boundary_trace_deficiency(u, eps, ev) == 0.0);
  }
  SECTION("constant one costs the boundary hull capacity") {
    const double def = boundary_trace_deficiency(GridFunction::constant(g, 1.0), 0.5, ev);
    const double hull = capacity_set(boundary_mask(*g), ev).value;
    CHECK(def == Catch::Approx(hull).margin(1e-12));
    CHECK(def > 0.0);
  }
  SECTION("non-increasing in eps") {
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
      std::vector<double> cells(g->cell_count(), 0.0), nodes(g->boundary_count());
      for (double& v : nodes) v = dist(rng);
      GridFunction u(g, cells, nodes);
      double prev = std::numeric_limits<double>::infinity();
      for (double eps : {0.1, 0.3, 0.5, 0.9}) {
        const double def = boundary_trace_deficiency(u, eps, ev);
        CHECK(def <= prev + 1e-9);
        prev = def;
      }
    }
  }
}

TEST_CASE("zero trace membership") {
  auto g = interval_grid(16);
  ExponentField f = ExponentField::constants(kUnit, 2.0, 2.0);
  ModularEvaluator ev(g, f, 0.5);

  SECTION("compactly supported functions belong for every tolerance pair") {
    std::vector<double> cells(g->cell_count(), 0.0);
    for (int i = 4; i < 12; ++i) cells[i] = 1.0;
    GridFunction u(g, cells, std::vector<double>(g->boundary_count(), 0.0));
    for (double eps : {1e-8, 0.5})
      for (double delta : {1e-10, 0.1}) CHECK(zero_trace_membership(u, eps, delta, ev).member);
  }
  SECTION("constant one fails below the boundary capacity") {
    const double hull = capacity_set(boundary_mask(*g), ev).value;
    GridFunction one = GridFunction::constant(g, 1.0);
    ZeroTraceResult low = zero_trace_membership(one, 0.5, hull * 0.5, ev);
    CHECK_FALSE(low.member);
    CHECK(low.offending.node_population() == g->boundary_count());
    ZeroTraceResult high = zero_trace_membership(one, 0.5, hull * 2.0, ev);
    CHECK(high.member);
  }
  SECTION("monotone in both tolerances") {
    std::mt19937_64 rng(89);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> cells(g->cell_count(), 0.0), nodes(g->boundary_count());
    for (double& v : nodes) v = dist(rng);
    GridFunction u(g, cells, nodes);
    for (double eps : {0.2, 0.4}) {
      for (double delta : {0.05, 0.2}) {
        if (zero_trace_membership(u, eps, delta, ev).member) {
          CHECK(zero_trace_membership(u, eps * 2.0, delta, ev).member);
          CHECK(zero_trace_membership(u, eps, delta * 2.0, ev).member);
        }
      }
    }
  }
}

TEST_CASE("boundary polarity refinement series") {
  const std::vector<std::array<int, 2>> res = {{8, 1}, {16, 1}, {32, 1}};
  SECTION("sp = n: values head down") {
    ExponentField f = ExponentField::constants(kUnit, 2.0, 2.0);
    PolarityReport rep = boundary_polarity_check(kUnit, res, f, 0.5);
    REQUIRE(rep.series.size() == 3);
    CHECK(rep.series[1].value <= rep.series[0].value + 1e-9);
    CHECK(rep.series[2].value <= rep.series[1].value + 1e-9);
    CHECK(rep.verdict == "tending-to-zero");
  }
  SECTION("sp > n: values stay bounded away from zero") {
    ExponentField f = ExponentField::constants(kUnit, 2.0, 3.0);
    PolarityReport rep = boundary_polarity_check(kUnit, res, f, 0.9);
    REQUIRE(rep.series.size() == 3);
    for (const PolarityEntry& e : rep.series) CHECK(e.value >= 0.5 * rep.series[0].value);
    CHECK_FALSE(rep.verdict.empty());
  }
  SECTION("needs three resolutions") {
    ExponentField f = ExponentField::constants(kUnit, 2.0, 2.0);
    CHECK_THROWS_AS(boundary_polarity_check(kUnit, {{8, 1}, {16, 1}}, f, 0.5), UsageError);
  }
}

TEST_CASE("removable set check") {
  auto g = interval_grid(32);
  ExponentField f = ExponentField::constants(kUnit, 2.0, 2.0);

  SetMask probe_a = SetMask::empty(*g);
  probe_a.cells[2] = probe_a.cells[3] = 1;
  SetMask probe_b = SetMask::empty(*g);
  for (int i = 20; i < 26; ++i) probe_b.cells[i] = 1;

  SECTION("the empty set is removable with exact zeros") {
    RemovabilityReport rep = removable_set_check(SetMask::empty(*g), {probe_a, probe_b}, g, f, 0.5);
    CHECK(rep.capacity_of_removed == 0.0);
    CHECK(rep.max_discrepancy == 0.0);
    CHECK(rep.removable);
  }
  SECTION("one interior cell is not removable at 1e-6") {
    SetMask one = SetMask::empty(*g);
    one.cells[15] = 1;
    RemovabilityReport rep = removable_set_check(one, {probe_a, probe_b}, g, f, 0.5, 1e-6);
    CHECK(rep.capacity_of_removed > 1e-4);
    CHECK(rep.max_discrepancy > 0.0);
    CHECK_FALSE(rep.removable);
    // deletion can only shrink capacities (restriction drops modular terms)
    for (std::size_t k = 0; k < rep.base_values.size(); ++k)
      CHECK(rep.reduced_values[k] <= rep.base_values[k] + 1e-9);
  }
  SECTION("verdicts are monotone along nested removed sets") {
    std::vector<SetMask> chain(3, SetMask::empty(*g));
    chain[1].cells[10] = 1;
    chain[2].cells[10] = chain[2].cells[11] = 1;
    bool prev_removable = true;
    for (const SetMask& n : chain) {
      RemovabilityReport rep = removable_set_check(n, {probe_b}, g, f, 0.5, 1e-6);
      if (!prev_removable) CHECK_FALSE(rep.removable);
      prev_removable = rep.removable;
    }
  }
  SECTION("discrepancy stays under the hull capacity of the removed set") {
    ModularEvaluator ev(g, f, 0.5);
    std::mt19937_64 rng(97);
    for (int t = 0; t < 10; ++t) {
      SetMask n = SetMask::empty(*g);
      const int at = 5 + static_cast<int>(rng() % 20);
      n.cells[at] = 1;
      if (rng() % 2) n.cells[at + 1] = 1;
      SetMask test = SetMask::empty(*g);
      test.cells[at > 15 ? 2 : 29] = 1;
      RemovabilityReport rep = removable_set_check(n, {test}, g, f, 0.5);
      const double hull_cap = capacity_set(open_neighborhood(*g, n), ev).value;
      CHECK(rep.max_discrepancy <= hull_cap + 1e-6);
    }
  }
  SECTION("usage errors") {
    SetMask n = SetMask::empty(*g);
    n.cells[5] = 1;
    SetMask overlapping = SetMask::empty(*g);
    overlapping.cells[5] = 1;
    CHECK_THROWS_AS(removable_set_check(n, {overlapping}, g, f, 0.5), UsageError);
    SetMask with_node = SetMask::empty(*g);
    with_node.nodes[0] = 1;
    CHECK_THROWS_AS(removable_set_check(with_node, {}, g, f, 0.5), UsageError);
  }
}

TEST_CASE("trace operations on a 2D grid") {
  DomainSpec sq = DomainSpec::rectangle({0.0, 0.0}, {1.0, 1.0});
  auto g = Grid::build(sq, {6, 6});
  ExponentField f = ExponentField::constants(sq, 2.0, 2.0);
  ModularEvaluator ev(g, f, 0.5);
  const double def = boundary_trace_deficiency(GridFunction::constant(g, 1.0), 0.5, ev);
  const double hull = capacity_set(boundary_mask(*g), ev).value;
  CHECK(def == Catch::Approx(hull).margin(1e-12));
  CHECK(def > 0.0);
}
