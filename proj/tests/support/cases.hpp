// Shared fixtures: exact fields and solved cases used by several suites.
#ifndef SSPF_TESTS_CASES_HPP_
#define SSPF_TESTS_CASES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "sspf/ellipticity.hpp"
#include "sspf/exact.hpp"
#include "sspf/field.hpp"
#include "sspf/solver.hpp"

namespace sspf::testing {

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) {
    m = std::max(m, std::abs(a.at(k) - b.at(k)));
  }
  return m;
}

inline GasModel gas_with(double gamma, double A = 0.0, double c0 = 1.0) {
  GasModel g;
  g.gamma = gamma;
  g.bernoulli_A = A;
  g.c0 = c0;
  return g;
}

/// Radial solution through chi(1) = 0, chi'(1) = 0.3 around the origin. The
/// Bernoulli constant fixes c^2(1); the profile stays subsonic on the test
/// squares below.
struct RadialCase {
  std::string name;
  GasModel gas;
  InitialCondition ic{1.0, 0.0, 0.3};
  bool wall = false;
};

inline std::vector<RadialCase> radial_cases(bool wall) {
  const std::string suffix = wall ? " half, bottom wall" : "";
  return {
      {"gamma 0.5" + suffix, gas_with(0.5, -2.0), {1.0, 0.0, 0.3}, wall},
      {"gamma 1" + suffix, gas_with(1.0, 0.0, 1.0), {1.0, 0.0, 0.3}, wall},
      {"gamma 1.4" + suffix, gas_with(1.4, 2.0), {1.0, 0.0, 0.3}, wall},
      {"gamma 2" + suffix, gas_with(2.0, 1.0), {1.0, 0.0, 0.3}, wall},
  };
}

/// [1.05, 1.35] x [-0.15, 0.15], or its upper half with a wall on the axis.
inline GridSpec radial_grid(int n, bool wall) {
  if (!wall) return GridSpec::from_extent({n, n}, {1.05, -0.15}, {1.35, 0.15});
  GridSpec g = GridSpec::from_extent({n, (n + 1) / 2}, {1.05, 0.0}, {1.35, 0.15});
  g.walls[static_cast<int>(Edge::Bottom)] = true;
  return g;
}

struct SolvedCase {
  std::string name;
  GasModel gas;
  ScalarField exact;
  SolveResult result;
};

inline SolvedCase solve_radial_case(const RadialCase& c, int n) {
  const GridSpec g = radial_grid(n, c.wall);
  ScalarField exact = sample_radial(c.gas, c.ic, g);
  SolveResult r = solve_dirichlet(g, exact, c.gas);
  return {c.name, c.gas, std::move(exact), std::move(r)};
}

/// Quiescent uniform state chi = -|xi|^2/2 - 1 with gamma = 2, so c = 1 and
/// L = |xi|.
inline GasModel quiescent_gas() { return gas_with(2.0); }

inline ScalarField quiescent_field(const GridSpec& g) {
  const std::array<double, 2> v{0.0, 0.0};
  return uniform_flow(v, -1.0, quiescent_gas(), g);
}

inline SolvedCase solve_quiescent_case(int n, double half_width) {
  const GridSpec g =
      GridSpec::from_extent({n, n}, {-half_width, -half_width}, {half_width, half_width});
  ScalarField exact = quiescent_field(g);
  // Start away from the exact field so the iteration does real work.
  std::vector<double> guess(exact.values().begin(), exact.values().end());
  for (int i = 1; i < n - 1; ++i) {
    for (int j = 1; j < n - 1; ++j) {
      const Point xi = g.xi(i, j);
      guess[g.index(i, j)] += 0.05 * std::cos(3.0 * xi[0]) * std::cos(2.0 * xi[1]);
    }
  }
  SolveResult r = solve_dirichlet(g, exact, quiescent_gas(), {},
                                  ScalarField(g, std::move(guess), Variable::Chi));
  return {"quiescent uniform, half-width " + std::to_string(half_width), quiescent_gas(),
          std::move(exact), std::move(r)};
}

/// Non-solution with an interior pseudo-Mach ring: isothermal, c = 1,
/// chi = s (-r^2/2 + r^4/8), |grad chi| = s r |1 - r^2/2| peaking at
/// r^2 = 2/3 where L^2 = 0.995.
inline constexpr double kControlScale = 1.8326;

inline ScalarField negative_control(int n) {
  const GridSpec g = GridSpec::from_extent({n, n}, {-1.0, -1.0}, {1.0, 1.0});
  return ScalarField::from_function(g, Variable::Chi, [](const Point& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return kControlScale * (-0.5 * r2 + 0.125 * r2 * r2);
  });
}

/// Square just inside the sonic circle of the gamma = 1.4 radial case; the
/// solved field reaches max L ~ 0.97.
inline GridSpec near_parabolic_grid(int n) {
  return GridSpec::from_extent({n, n}, {1.324, -0.1}, {1.524, 0.1});
}

inline RadialCase near_parabolic_case() { return radial_cases(false)[2]; }

/// Active node of largest L at least two nodes from every edge.
inline NodeIndex peak_L_node(const ScalarField& f, const GasModel& gas) {
  const GridSpec& g = f.grid();
  const std::vector<PointState> s = point_states(f, gas);
  NodeIndex best{2, 2};
  double best_L = -1.0;
  for (int i = 2; i < g.dims[0] - 2; ++i) {
    for (int j = 2; j < g.dims[1] - 2; ++j) {
      const double L = s[g.index(i, j)].L;
      if (L > best_L) {
        best_L = L;
        best = {i, j};
      }
    }
  }
  return best;
}

inline double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace sspf::testing

#endif  // SSPF_TESTS_CASES_HPP_
