#include "sspf/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ode.hpp"
#include "sspf/error.hpp"

namespace sspf {

double uniform_flow_c2(const GasModel& gas, std::span<const double> v, double a_prime) {
  if (gas.isothermal()) return gas.c0 * gas.c0;
  double v2 = 0.0;
  for (double x : v) v2 += x * x;
  return (gas.gamma - 1.0) * (gas.bernoulli_A - a_prime - 0.5 * v2);
}

ScalarField uniform_flow(std::span<const double> v, double a_prime, const GasModel& gas,
                         const GridSpec& grid) {
  gas.validate();
  if (static_cast<int>(v.size()) != grid.dim) {
    throw PreconditionError("uniform_flow: velocity has " + std::to_string(v.size()) +
                            " components for a " + std::to_string(grid.dim) + "D grid");
  }
  const double c2 = uniform_flow_c2(gas, v, a_prime);
  if (!(c2 > 0.0)) {
    throw InvalidStateError("uniform flow state has c^2 = " + std::to_string(c2) + " <= 0");
  }
  const std::array<double, 2> vel{v[0], grid.dim == 2 ? v[1] : 0.0};
  return ScalarField::from_function(grid, Variable::Chi, [&](const Point& xi) {
    return vel[0] * xi[0] + vel[1] * xi[1] - 0.5 * (xi[0] * xi[0] + xi[1] * xi[1]) + a_prime;
  });
}

namespace {

std::vector<double> mesh(double lo, double hi, int n) {
  if (n < 3) throw PreconditionError("profile needs at least 3 samples");
  if (!(hi > lo)) throw PreconditionError("empty sampling interval");
  std::vector<double> x(static_cast<std::size_t>(n));
  const double h = (hi - lo) / (n - 1);
  for (int k = 0; k < n; ++k) x[k] = lo + k * h;
  x.back() = hi;
  return x;
}

Profile1D affine_branch(const GasModel& gas, const InitialCondition& ic, double lo, double hi,
                        int n) {
  const double c2 = gas.isothermal()
                        ? gas.c0 * gas.c0
                        : (gas.gamma - 1.0) * (gas.bernoulli_A - ic.chi0 - 0.5 * ic.dchi0 * ic.dchi0);
  if (!(c2 > 0.0)) {
    throw InvalidStateError("affine branch initial state has c^2 = " + std::to_string(c2));
  }
  const double c = std::sqrt(c2);
  const double L0 = std::abs(ic.dchi0) / c;
  if (std::abs(L0 - 1.0) <= 1e-12) {
    throw PreconditionError("affine branch needs a non-sonic initial condition");
  }
  // chi' = dchi0 - (xi - xi0); c^2 is constant along the branch.
  const double sonic_a = ic.xi0 + ic.dchi0 - c;
  const double sonic_b = ic.xi0 + ic.dchi0 + c;
  double keep_lo = -INFINITY;
  double keep_hi = INFINITY;
  if (L0 < 1.0) {
    keep_lo = sonic_a;
    keep_hi = sonic_b;
  } else if (ic.xi0 < sonic_a) {
    keep_hi = sonic_a;
  } else {
    keep_lo = sonic_b;
  }
  Profile1D p;
  const double slack = 1e-12 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
  for (double xi : mesh(lo, hi, n)) {
    if (xi < keep_lo - slack || xi > keep_hi + slack) {
      p.truncated = true;
      continue;
    }
    const double s = xi - ic.xi0;
    p.xi.push_back(xi);
    p.chi.push_back(ic.chi0 + ic.dchi0 * s - 0.5 * s * s);
    p.dchi.push_back(ic.dchi0 - s);
  }
  if (std::isfinite(keep_lo) && keep_lo >= lo - slack && keep_lo <= hi + slack) p.sonic_low = keep_lo;
  if (std::isfinite(keep_hi) && keep_hi >= lo - slack && keep_hi <= hi + slack) p.sonic_high = keep_hi;
  return p;
}

Profile1D rarefaction_branch(const GasModel& gas, double sign, const InitialCondition& ic,
                             double lo, double hi, int n) {
  Profile1D p;
  const std::vector<double> x = mesh(lo, hi, n);
  if (gas.isothermal()) {
    const double slope = sign * gas.c0;
    if (std::abs(ic.dchi0 - slope) > 1e-12 * (1.0 + gas.c0)) {
      throw PreconditionError("rarefaction initial slope must equal " + std::to_string(slope));
    }
    for (double xi : x) {
      p.xi.push_back(xi);
      p.chi.push_back(ic.chi0 + slope * (xi - ic.xi0));
      p.dchi.push_back(slope);
    }
    return p;
  }
  if (gas.gamma == -1.0) throw PreconditionError("rarefaction branch undefined for gamma == -1");
  if (ic.dchi0 == 0.0 || (ic.dchi0 > 0.0) != (sign > 0.0)) {
    throw PreconditionError("rarefaction initial slope must be nonzero with the branch sign");
  }
  const double k = (1.0 - gas.gamma) / (1.0 + gas.gamma);
  const double s0 = ic.dchi0 / k;
  const double vertex = ic.xi0 - s0;
  const double predicted = gas.bernoulli_A + 0.5 * k * s0 * s0;
  if (std::abs(ic.chi0 - predicted) > 1e-12 * (1.0 + std::abs(ic.chi0))) {
    throw PreconditionError("inconsistent rarefaction initial condition: chi0 = " +
                            std::to_string(ic.chi0) + ", c^2 = chi'^2 requires " +
                            std::to_string(predicted));
  }
  if (vertex >= lo && vertex <= hi) {
    throw PreconditionError("rarefaction vertex " + std::to_string(vertex) +
                            " lies inside the sampling interval (c = 0 there)");
  }
  p.vertex = vertex;
  for (double xi : x) {
    const double s = xi - vertex;
    p.xi.push_back(xi);
    p.chi.push_back(gas.bernoulli_A + 0.5 * k * s * s);
    p.dchi.push_back(k * s);
  }
  return p;
}

}  // namespace

Profile1D solve_1d(const GasModel& gas, OneDBranch branch, const InitialCondition& ic, double lo,
                   double hi, int n) {
  gas.validate();
  if (ic.xi0 < lo || ic.xi0 > hi) {
    throw PreconditionError("initial point must lie inside the sampling interval");
  }
  switch (branch) {
    case OneDBranch::Affine:
      return affine_branch(gas, ic, lo, hi, n);
    case OneDBranch::RarefactionPlus:
      return rarefaction_branch(gas, 1.0, ic, lo, hi, n);
    case OneDBranch::RarefactionMinus:
      return rarefaction_branch(gas, -1.0, ic, lo, hi, n);
  }
  throw PreconditionError("unknown 1D branch");
}

ScalarField to_field(const Profile1D& profile) {
  if (profile.xi.size() < 3) throw PreconditionError("profile has fewer than 3 samples");
  const int n = static_cast<int>(profile.xi.size());
  GridSpec g = GridSpec::line(n, profile.xi.front(), profile.xi.back());
  return ScalarField(g, profile.chi, Variable::Chi);
}

RadialProfile solve_radial(const GasModel& gas, int d, const InitialCondition& ic,
                           std::span<const double> radii, const RadialOptions& options) {
  gas.validate();
  if (d < 1) throw PreconditionError("radial reduction needs d >= 1");
  const double r0 = ic.xi0;
  if (r0 < 0.0 || (r0 == 0.0 && ic.dchi0 != 0.0)) {
    throw PreconditionError("radial start needs r0 > 0, or r0 == 0 with chi'(0) == 0");
  }
  if (!std::is_sorted(radii.begin(), radii.end()) || (!radii.empty() && radii.front() < r0)) {
    throw PreconditionError("sample radii must be ascending and >= r0");
  }
  auto c2_of = [&](const detail::State2& y) {
    return sound_speed_sq_raw(gas, y[0], std::span<const double>(&y[1], 1));
  };
  const detail::State2 y0{ic.chi0, ic.dchi0};
  const double c2_0 = c2_of(y0);
  if (!(c2_0 > 0.0)) {
    throw InvalidStateError("radial initial state has c^2 = " + std::to_string(c2_0));
  }
  const double g0 = c2_0 - ic.dchi0 * ic.dchi0;
  if (std::abs(g0) < options.sonic_threshold * c2_0) {
    throw PreconditionError("radial initial state is sonic");
  }
  const double gsign = g0 > 0.0 ? 1.0 : -1.0;
  const double dm1 = d - 1.0;

  const detail::Rhs rhs = [&](double r, const detail::State2& y, detail::State2& dy) {
    const double c2 = c2_of(y);
    if (!(c2 > 0.0)) return false;
    const double g = c2 - y[1] * y[1];
    if (!(g * gsign > 0.0)) return false;
    dy[0] = y[1];
    if (r == 0.0) {
      dy[1] = -1.0;
    } else {
      dy[1] = (y[1] * y[1] - d * c2 - c2 * dm1 * y[1] / r) / g;
    }
    return true;
  };

  RadialProfile out;
  std::size_t next = 0;
  while (next < radii.size() && radii[next] == r0) {
    out.r.push_back(r0);
    out.chi.push_back(ic.chi0);
    out.dchi.push_back(ic.dchi0);
    ++next;
  }
  if (next == radii.size()) return out;

  const auto on_step = [&](const detail::DenseSegment& seg) {
    const double t_end = seg.t0 + seg.h;
    while (next < radii.size() && radii[next] <= t_end) {
      const detail::State2 y = seg.eval(radii[next]);
      out.r.push_back(radii[next]);
      out.chi.push_back(y[0]);
      out.dchi.push_back(y[1]);
      ++next;
    }
  };
  const auto monitor = [&](double, const detail::State2& y) {
    const double c2 = c2_of(y);
    return std::abs(c2 - y[1] * y[1]) >= options.sonic_threshold * c2;
  };

  detail::Dopri5Options opt;
  opt.rtol = options.tolerance;
  opt.atol = options.tolerance;
  opt.max_steps = options.max_steps;
  const detail::Dopri5Result res =
      detail::integrate_dopri5(rhs, r0, y0, radii.back(), opt, on_step, monitor);
  out.accepted_steps = res.accepted;
  out.rejected_steps = res.rejected;
  if (!res.reached_end) {
    const double c2 = c2_of(res.y);
    const double g = c2 - res.y[1] * res.y[1];
    if (res.stopped || (c2 > 0.0 && std::abs(g) < 1e-3 * c2)) {
      out.sonic_stop = true;
      out.sonic_radius = res.t;
    } else if (!(c2 > 0.0) || res.underflow) {
      throw InvalidStateError("radial integration reached an invalid state near r = " +
                              std::to_string(res.t));
    } else {
      throw PreconditionError("radial integration exceeded the step budget at r = " +
                              std::to_string(res.t));
    }
  }
  return out;
}

RadialProfile solve_radial(const GasModel& gas, int d, const InitialCondition& ic, double r1,
                           int n, const RadialOptions& options) {
  const std::vector<double> r = mesh(ic.xi0, r1, n);
  return solve_radial(gas, d, ic, r, options);
}

ScalarField sample_radial(const GasModel& gas, const InitialCondition& ic, const GridSpec& grid,
                          Point center, const RadialOptions& options) {
  if (grid.dim != 2) throw PreconditionError("sample_radial needs a 2D grid");
  const std::size_t n = grid.size();
  std::vector<double> radius(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Point xi = grid.xi(grid.node(k));
    radius[k] = std::hypot(xi[0] - center[0], xi[1] - center[1]);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return radius[a] < radius[b]; });
  std::vector<double> sorted(n);
  for (std::size_t k = 0; k < n; ++k) sorted[k] = radius[order[k]];
  if (sorted.front() < ic.xi0) {
    throw PreconditionError("grid reaches radius " + std::to_string(sorted.front()) +
                            " below the profile start " + std::to_string(ic.xi0));
  }
  const RadialProfile p = solve_radial(gas, 2, ic, sorted, options);
  if (p.r.size() != n) {
    throw PreconditionError("radial profile stops (sonic) at r = " +
                            std::to_string(p.sonic_radius.value_or(0.0)) +
                            " before covering the grid");
  }
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[order[k]] = p.chi[k];
  return ScalarField(grid, std::move(v), Variable::Chi);
}

}  // namespace sspf
