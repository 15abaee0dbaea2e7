#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "cases.hpp"
#include "sspf/ellipticity.hpp"
#include "sspf/error.hpp"

using namespace sspf;
using namespace sspf::testing;

namespace {

GridSpec square(int n, double half) { return GridSpec::from_extent({n, n}, {-half, -half}, {half, half}); }

}  // namespace

TEST_CASE("barrier construction") {
  SUBCASE("equality case") {
    // Corners at distance 1 from the centre.
    const double s = 1.0 / std::sqrt(2.0);
    const GridSpec g = square(5, s);
    const BarrierSpec b = make_barrier(g, 1.0, 0.1);
    CHECK(domain_radius(g, b.center) == doctest::Approx(1.0));
    CHECK(b.beta == doctest::Approx(1.0));
    CHECK(b.value({0.5, 0.0}) == doctest::Approx(0.05 * 0.25));
    CHECK(b.sup_gradient(1.0) == doctest::Approx(0.1));
    CHECK(b.sup_hessian() == doctest::Approx(0.1));
  }
  SUBCASE("loose sound speed bound") {
    const BarrierSpec b = make_barrier(square(5, 1.0 / std::sqrt(2.0)), 2.0, 0.1);
    CHECK(b.beta == 1.0);
    CHECK(b.coefficient() == doctest::Approx(0.025));
    CHECK(b.sup_gradient(1.0) == doctest::Approx(0.025));
  }
  SUBCASE("zero delta") {
    const BarrierSpec b = make_barrier(square(5, 0.5), 1.0, 0.0);
    CHECK(b.value({0.3, -0.2}) == 0.0);
    CHECK(b.gradient({0.3, -0.2}) == std::array<double, 2>{0.0, 0.0});
  }
  SUBCASE("bounds hold in closed form") {
    for (double c_hat : {0.2, 1.0, 3.0}) {
      for (double delta : {0.001, 0.1, 1.0}) {
        for (double half : {0.1, 0.7, 4.0}) {
          const GridSpec g = GridSpec::from_extent({7, 5}, {-half, 0.0}, {half, half});
          const BarrierSpec b = make_barrier(g, c_hat, delta);
          const double R = domain_radius(g, b.center);
          CHECK(b.sup_gradient(R) <= delta / c_hat * (1.0 + 1e-14));
          CHECK(b.sup_hessian() <= delta / (c_hat * c_hat) * (1.0 + 1e-14));
        }
      }
    }
  }
  SUBCASE("walls move the centre onto the wall line") {
    GridSpec g = GridSpec::from_extent({9, 5}, {-1.0, 0.0}, {1.0, 0.5});
    g.walls[static_cast<int>(Edge::Bottom)] = true;
    const BarrierSpec b = make_barrier(g, 1.0, 0.1);
    CHECK(b.center[1] == 0.0);
    CHECK(b.gradient({0.4, 0.0})[1] == 0.0);
    g.walls[static_cast<int>(Edge::Top)] = true;
    CHECK_THROWS_AS(make_barrier(g, 1.0, 0.1), PreconditionError);
  }
  SUBCASE("arguments") {
    CHECK_THROWS_AS(make_barrier(square(5, 1.0), 1.0, 1.5), PreconditionError);
    CHECK_THROWS_AS(make_barrier(square(5, 1.0), 0.0, 0.1), PreconditionError);
  }
}

TEST_CASE("verdicts on the quiescent state") {
  const GasModel gas = quiescent_gas();
  SUBCASE("half-width 0.7") {
    // Fine enough that interior nodes next to the corners exceed L^2 = 0.95.
    const ScalarField f = quiescent_field(square(257, 0.7));
    const double c_hat = auto_c_hat(f, gas);
    CHECK(c_hat == doctest::Approx(1.0));
    const EllipticityReport r = verify_max_principle(f, gas, make_barrier(f.grid(), c_hat, 0.05), 0.05);
    CHECK(r.verdict == Verdict::MaxOnBoundary);
    CHECK(r.max_interior_F <= r.max_boundary_F);
    CHECK(r.max_boundary_F >= 0.98);
    const Point corner = r.argmax_boundary.xi;
    CHECK(std::abs(corner[0]) == doctest::Approx(0.7));
    CHECK(std::abs(corner[1]) == doctest::Approx(0.7));
    CHECK(r.residual.max_abs <= r.solution_residual_tol);
  }
  SUBCASE("half-width 0.3") {
    const ScalarField f = quiescent_field(square(29, 0.3));
    const EllipticityReport r = verify_max_principle(f, gas, make_barrier(f.grid(), 1.0, 0.05), 0.05);
    CHECK(r.verdict == Verdict::UniformlySubElliptic);
    CHECK(r.max_interior_L2 <= 0.18);
  }
}

TEST_CASE("the crafted non-solution is flagged") {
  const ScalarField f = negative_control(129);
  const GasModel gas = gas_with(1.0);
  const EllipticityReport r = verify_max_principle(f, gas, make_barrier(f.grid(), 1.0, 0.1), 0.1);
  CHECK(r.verdict == Verdict::ViolationCandidate);
  CHECK(r.max_L <= 1.0);
  CHECK(r.max_interior_F > r.max_boundary_F + r.tolerance);
  // The interior peak sits on the ring r^2 = 2/3.
  const Point x = r.argmax_interior.xi;
  CHECK(x[0] * x[0] + x[1] * x[1] == doctest::Approx(2.0 / 3.0).epsilon(0.05));
  CHECK(r.residual.max_abs >= 1e3 * r.solution_residual_tol);
}

TEST_CASE("hypothesis violations are refused") {
  const GasModel gas = quiescent_gas();
  const ScalarField wide = quiescent_field(square(17, 0.9));
  try {
    (void)verify_max_principle(wide, gas, make_barrier(wide.grid(), 1.0, 0.1), 0.1);
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(e.node().has_value());
  }
  const ScalarField f = quiescent_field(square(17, 0.5));
  CHECK_THROWS_AS(verify_max_principle(f, gas, make_barrier(f.grid(), 0.5, 0.1), 0.1),
                  PreconditionError);

  GridSpec g = GridSpec::from_extent({9, 9}, {0.0, -0.4}, {0.4, 0.4});
  g.walls[static_cast<int>(Edge::Left)] = true;
  const std::array<double, 2> along{0.0, 0.2};
  const ScalarField w = uniform_flow(along, -1.0, gas, g);
  BarrierSpec off = make_barrier(g, 1.0, 0.1);
  off.center[0] = 0.2;
  CHECK_THROWS_AS(verify_max_principle(w, gas, off, 0.1), PreconditionError);
  const std::array<double, 2> across{0.3, 0.0};
  const ScalarField bad = uniform_flow(across, -1.0, gas, g);
  CHECK_THROWS_AS(verify_max_principle(bad, gas, make_barrier(g, 1.0, 0.1), 0.1), PreconditionError);
  CHECK_THROWS_AS(verify_max_principle(f, gas_with(-1.0), make_barrier(f.grid(), 1.0, 0.1), 0.1),
                  PreconditionError);
}

TEST_CASE("wall runs agree with their reflection") {
  const GasModel gas = quiescent_gas();
  GridSpec g = GridSpec::from_extent({17, 9}, {-0.6, 0.0}, {0.6, 0.6});
  g.walls[static_cast<int>(Edge::Bottom)] = true;
  const std::array<double, 2> v{0.1, 0.0};
  const ScalarField half = uniform_flow(v, -1.0, gas, g);
  const ScalarField full = reflect_even(half, Edge::Bottom);
  for (double delta : {0.001, 0.1}) {
    const EllipticityReport a = verify_max_principle(half, gas, make_barrier(g, 1.0, delta), delta);
    const EllipticityReport b =
        verify_max_principle(full, gas, make_barrier(full.grid(), 1.0, delta), delta);
    CHECK(a.verdict == b.verdict);
    CHECK(a.max_interior_F == doctest::Approx(b.max_interior_F));
    REQUIRE(a.walls.size() == 1);
    CHECK(a.walls[0].chi_n <= 1e-9);
  }
}

TEST_CASE("delta sweep") {
  const std::vector<double> deltas{0.001, 0.01, 0.05, 0.1};
  SUBCASE("solution") {
    const ScalarField f = quiescent_field(square(17, 0.7));
    const DeltaSweep s = sweep_delta(f, quiescent_gas(), 1.0, deltas);
    REQUIRE(s.entries.size() == 4);
    for (const auto& e : s.entries) CHECK(e.report.verdict != Verdict::ViolationCandidate);
    REQUIRE(s.empirical_delta_margin);
    CHECK(*s.empirical_delta_margin == 0.1);
  }
  SUBCASE("non-solution") {
    const DeltaSweep s = sweep_delta(negative_control(129), gas_with(1.0), 1.0, deltas);
    CHECK(s.entries.back().report.verdict == Verdict::ViolationCandidate);
    REQUIRE(s.empirical_delta_margin);
    CHECK(*s.empirical_delta_margin < 0.1);
  }
}

TEST_CASE("parabolic measure") {
  SUBCASE("isothermal rarefaction is parabolic everywhere") {
    const GasModel gas = gas_with(1.0);
    const Profile1D p = solve_1d(gas, OneDBranch::RarefactionPlus, {0.0, 0.0, 1.0}, -1.0, 1.0, 41);
    CHECK(parabolic_measure(to_field(p), gas, 1e-6) == 1.0);
  }
  SUBCASE("subsonic uniform flow") {
    const ScalarField f = quiescent_field(square(21, 0.35));
    CHECK(parabolic_measure(f, quiescent_gas(), 1e-6) == 0.0);
  }
  SUBCASE("monotone in the band") {
    const SolvedCase s = solve_radial_case(near_parabolic_case(), 17);
    const std::vector<double> bands{0.5, 0.1, 0.03, 0.01, 1e-3, 1e-6};
    double last = 1.0;
    for (double band : bands) {
      const double m = parabolic_measure(s.result.solution, s.gas, band);
      CHECK(m <= last);
      CHECK(m >= 0.0);
      last = m;
    }
    CHECK(last == 0.0);
  }
  SUBCASE("family") {
    const GasModel gas = quiescent_gas();
    const std::vector<ScalarField> fam{quiescent_field(square(9, 0.35)),
                                       quiescent_field(square(17, 0.7))};
    const std::vector<double> m = parabolic_measure(fam, gas, 0.2);
    REQUIRE(m.size() == 2);
    CHECK(m[0] == 0.0);
    CHECK(m[1] > 0.0);
  }
}

TEST_CASE("max-point identities are exact on a synthetic quadratic") {
  // chi = chi0 + g1 (x - p1) + (x-p)^T H (x-p)/2 with grad chi along axis 1
  // and chi_22 chosen so the chi equation holds at p.
  const GasModel gas = gas_with(1.4, 2.0);
  const GridSpec g = GridSpec::from_extent({13, 13}, {0.0, -0.1}, {0.6, 0.5});
  const NodeIndex node{6, 6};
  const Point p = g.xi(node);
  const double chi0 = 0.1;
  const double g1 = 0.5;
  const double c2 = 0.4 * (2.0 - chi0 - 0.5 * g1 * g1);
  const double L2 = g1 * g1 / c2;
  const double h11 = -0.8;
  const double h12 = 0.3;
  const double h22 = (L2 - 1.0) * h11 + L2 - 2.0;
  const ScalarField f = ScalarField::from_function(g, Variable::Chi, [&](const Point& x) {
    const double a = x[0] - p[0];
    const double b = x[1] - p[1];
    return chi0 + g1 * a + 0.5 * (h11 * a * a + 2.0 * h12 * a * b + h22 * b * b);
  });
  const BarrierSpec bar = stationary_barrier(f, gas, node, 1e5);
  const MaxPointDiagnostics m = maxpoint_diagnostics(f, gas, bar, node);
  CHECK(m.axis[0] == doctest::Approx(1.0));
  CHECK(m.L == doctest::Approx(std::sqrt(L2)).epsilon(1e-12));
  CHECK(m.chi_11 == doctest::Approx(h11).epsilon(1e-10));
  CHECK(m.chi_12 == doctest::Approx(h12).epsilon(1e-10));
  CHECK(m.chi_22 == doctest::Approx(h22).epsilon(1e-10));
  CHECK(std::abs(m.stationarity[0]) <= 1e-9);
  CHECK(std::abs(m.stationarity[1]) <= 1e-9);
  CHECK(m.gap_a <= 1e-10);
  CHECK(m.gap_b <= 1e-10);
  CHECK(m.gap_c <= 1e-10);
  CHECK(std::abs(m.residual) <= 1e-10);
  CHECK(m.fd_error_scale <= 1e-9);
  // The near-sonic form is off by L^2 - 1 away from the sonic line.
  CHECK(m.tangential_sum_near_sonic - m.tangential_sum_predicted ==
        doctest::Approx(L2 - 1.0).epsilon(1e-10));
}

TEST_CASE("max-point diagnostics refuse non-maxima") {
  const GasModel gas = quiescent_gas();
  const ScalarField f = quiescent_field(square(17, 0.7));
  const BarrierSpec b = make_barrier(f.grid(), 1.0, 0.05);
  CHECK_THROWS_AS(maxpoint_diagnostics(f, gas, b, {0, 0}), PreconditionError);
  CHECK_THROWS_AS(maxpoint_diagnostics(f, gas, b, {4, 4}), PreconditionError);
  CHECK_THROWS_AS(maxpoint_diagnostics(f, gas, b, {8, 8}), PreconditionError);
}

TEST_CASE("wall identities") {
  const GasModel gas = quiescent_gas();
  GridSpec g = GridSpec::from_extent({9, 17}, {0.0, -0.4}, {0.4, 0.4});
  g.walls[static_cast<int>(Edge::Left)] = true;
  SUBCASE("flow along the wall") {
    const std::array<double, 2> v{0.0, 0.2};
    const WallNorms w = check_wall_conditions(uniform_flow(v, -1.0, gas, g), gas, Edge::Left);
    CHECK(w.chi_n <= 1e-9);
    CHECK(w.chi_nt <= 1e-9);
    CHECK(w.chi_ntt <= 1e-9);
    CHECK(w.c2_n <= 1e-9);
    CHECK(w.chi_nnn <= 1e-9);
    CHECK_FALSE(w.slip_violated);
  }
  SUBCASE("flow through the wall") {
    const std::array<double, 2> v{0.3, 0.0};
    const WallNorms w = check_wall_conditions(uniform_flow(v, -1.0, gas, g), gas, Edge::Left);
    CHECK(w.chi_n == doctest::Approx(0.3));
    CHECK(w.slip_violated);
  }
  SUBCASE("preconditions") {
    const std::array<double, 2> v{0.0, 0.2};
    const ScalarField f = uniform_flow(v, -1.0, gas, g);
    CHECK_THROWS_AS(check_wall_conditions(f, gas, Edge::Right), PreconditionError);
    GridSpec thin = GridSpec::from_extent({4, 9}, {0.0, -0.4}, {0.3, 0.4});
    thin.walls[static_cast<int>(Edge::Left)] = true;
    CHECK_THROWS_AS(check_wall_conditions(uniform_flow(v, -1.0, gas, thin), gas, Edge::Left),
                    PreconditionError);
  }
}
