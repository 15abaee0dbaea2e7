#include "sspf/ellipticity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sspf/error.hpp"
#include "stencil.hpp"

namespace sspf {

double BarrierSpec::value(const Point& xi) const noexcept {
  const double dx = xi[0] - center[0];
  const double dy = xi[1] - center[1];
  return 0.5 * coefficient() * (dx * dx + dy * dy);
}

std::array<double, 2> BarrierSpec::gradient(const Point& xi) const noexcept {
  const double k = coefficient();
  return {k * (xi[0] - center[0]), k * (xi[1] - center[1])};
}

double BarrierSpec::sup_gradient(double R) const noexcept { return std::abs(coefficient()) * R; }

double BarrierSpec::sup_hessian() const noexcept { return std::abs(coefficient()); }

double domain_radius(const GridSpec& grid, const Point& center) noexcept {
  const Point lo = grid.xi(0, 0);
  const Point hi = grid.upper();
  double r2 = 0.0;
  for (double x : {lo[0], hi[0]}) {
    for (double y : {lo[1], hi[1]}) {
      const double dx = x - center[0];
      const double dy = y - center[1];
      r2 = std::max(r2, dx * dx + dy * dy);
    }
  }
  return std::sqrt(r2);
}

BarrierSpec make_barrier(const GridSpec& grid, double c_hat, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw PreconditionError("delta must lie in [0, 1]");
  if (!(c_hat > 0.0) || !std::isfinite(c_hat)) throw PreconditionError("c_hat must be > 0");
  BarrierSpec b;
  b.center = grid.centroid();
  for (int a = 0; a < grid.dim; ++a) {
    const Edge low = a == 0 ? Edge::Left : Edge::Bottom;
    const Edge high = a == 0 ? Edge::Right : Edge::Top;
    if (grid.has_wall(low) && grid.has_wall(high)) {
      throw PreconditionError("barrier cannot satisfy db/dn = 0 on opposite walls");
    }
    if (grid.has_wall(low)) b.center[a] = grid.coord(a, 0);
    if (grid.has_wall(high)) b.center[a] = grid.coord(a, grid.dims[a] - 1);
  }
  b.delta = delta;
  b.c_hat = c_hat;
  const double R = domain_radius(grid, b.center);
  b.beta = R > 0.0 ? std::min(1.0, c_hat / R) : 1.0;
  return b;
}

double auto_c_hat(const ScalarField& field, const GasModel& gas) {
  double m = 0.0;
  for (const PointState& s : point_states(field, gas)) m = std::max(m, s.c2);
  return std::sqrt(m) * (1.0 + 1e-12);
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::MaxOnBoundary:
      return "MaxOnBoundary";
    case Verdict::UniformlySubElliptic:
      return "UniformlySubElliptic";
    case Verdict::ViolationCandidate:
      return "ViolationCandidate";
  }
  return "?";
}

namespace {

std::string node_text(const GridSpec& g, std::size_t k) {
  const NodeIndex n = g.node(k);
  return "(" + std::to_string(n.i) + "," + std::to_string(n.j) + ")";
}

double max_abs_hessian(const ScalarField& f) {
  const DerivativeField d = derivatives(f, StencilPolicy::Closure);
  double m = 0.0;
  for (const NodeDerivatives& n : d.nodes) {
    for (const auto& row : n.hess) {
      for (double v : row) m = std::max(m, std::abs(v));
    }
  }
  return m;
}

// d(L^2)/dxi_k from FD derivatives of chi by the chain rule.
std::array<double, 2> grad_L2(const PointState& s, const GasModel& gas) {
  const auto& g = s.derivs.grad;
  const auto& H = s.derivs.hess;
  const double q = g[0] * g[0] + g[1] * g[1];
  const double dc = dc2_dchi(gas);
  std::array<double, 2> out{};
  for (int k = 0; k < 2; ++k) {
    const double hg = H[k][0] * g[0] + H[k][1] * g[1];
    const double dc2 = dc * (g[k] + hg);
    out[k] = 2.0 * hg / s.c2 - q * dc2 / (s.c2 * s.c2);
  }
  return out;
}

void check_barrier_on_walls(const GridSpec& g, const BarrierSpec& b) {
  if (b.coefficient() == 0.0) return;
  for (Edge e : kAllEdges) {
    if (!g.has_wall(e)) continue;
    const int a = edge_axis(e);
    const double line = g.coord(a, edge_is_low(e) ? 0 : g.dims[a] - 1);
    const double scale = std::max(1.0, std::abs(line)) * 1e-12 + 1e-12 * g.spacing[a];
    if (std::abs(b.center[a] - line) > scale) {
      throw PreconditionError("barrier has db/dn != 0 on the " + std::string(to_string(e)) +
                              " wall");
    }
  }
}

}  // namespace

EllipticityReport verify_max_principle(const ScalarField& field, const GasModel& gas,
                                       const BarrierSpec& barrier, double delta, double k_ver) {
  gas.validate();
  gas.require_ellipticity_range();
  if (!(k_ver >= 0.0)) throw PreconditionError("k_ver must be >= 0");
  const ScalarField chi = to_chi(field);
  const GridSpec& g = chi.grid();
  check_barrier_on_walls(g, barrier);

  EllipticityReport rep;
  rep.delta = delta;
  rep.k_ver = k_ver;
  rep.barrier = barrier;

  for (Edge e : kAllEdges) {
    if (!g.has_wall(e)) continue;
    const int a = edge_axis(e);
    const double tol = default_slip_tolerance(chi);
    double slip = 0.0;
    for (double v : edge_normal_derivative(chi, e)) slip = std::max(slip, std::abs(v));
    if (slip > tol) {
      throw PreconditionError("slip condition fails on the " + std::string(to_string(e)) +
                              " wall: max |chi_n| = " + std::to_string(slip));
    }
    if (g.dims[a] >= 5) rep.walls.push_back(check_wall_conditions(chi, gas, e, tol));
  }

  const std::vector<PointState> states = point_states(chi, gas);
  std::vector<double> F(g.size());
  std::vector<double> L2(g.size());
  double max_c2 = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    L2[k] = states[k].L * states[k].L;
    F[k] = L2[k] + barrier.value(states[k].xi);
    max_c2 = std::max(max_c2, states[k].c2);
    rep.max_L = std::max(rep.max_L, states[k].L);
  }
  rep.hess_F_scale = max_abs_hessian(ScalarField(g, F, Variable::Chi));
  const double h = g.max_spacing();
  rep.tolerance = k_ver * h * h * rep.hess_F_scale;

  const double c_limit = barrier.c_hat * (1.0 + 1e-12);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (L2[k] > 1.0 + rep.tolerance) {
      throw PreconditionError("L^2 = " + std::to_string(L2[k]) + " exceeds 1 at node " +
                                  node_text(g, k),
                              k);
    }
    if (std::sqrt(states[k].c2) > c_limit) {
      throw PreconditionError("c exceeds c_hat at node " + node_text(g, k), k);
    }
  }

  bool have_interior = false;
  bool have_boundary = false;
  std::size_t arg_i = 0;
  std::size_t arg_b = 0;
  for (int i = 0; i < g.dims[0]; ++i) {
    for (int j = 0; j < g.dims[1]; ++j) {
      const std::size_t k = g.index(i, j);
      if (g.active(i, j)) {
        if (!have_interior || F[k] > F[arg_i]) arg_i = k;
        have_interior = true;
        rep.max_interior_L2 = std::max(rep.max_interior_L2, L2[k]);
      } else {
        if (!have_boundary || F[k] > F[arg_b]) arg_b = k;
        have_boundary = true;
      }
    }
  }
  if (!have_interior || !have_boundary) {
    throw PreconditionError("field needs both interior and Dirichlet boundary nodes");
  }
  rep.argmax_interior = {g.node(arg_i), states[arg_i].xi};
  rep.max_interior_F = F[arg_i];
  rep.argmax_boundary = {g.node(arg_b), states[arg_b].xi};
  rep.max_boundary_F = F[arg_b];

  if (rep.max_interior_L2 <= 1.0 - delta + rep.tolerance) {
    rep.verdict = Verdict::UniformlySubElliptic;
  } else if (rep.max_interior_F <= rep.max_boundary_F + rep.tolerance) {
    rep.verdict = Verdict::MaxOnBoundary;
  } else {
    rep.verdict = Verdict::ViolationCandidate;
  }
  rep.residual = residual_norms(residual_chi(chi, gas));
  rep.solution_residual_tol = 1e-10 * (1.0 + max_c2);
  return rep;
}

DeltaSweep sweep_delta(const ScalarField& field, const GasModel& gas, double c_hat,
                       std::span<const double> deltas, double k_ver) {
  DeltaSweep out;
  for (double d : deltas) {
    const BarrierSpec b = make_barrier(field.grid(), c_hat, d);
    DeltaSweepEntry e{d, verify_max_principle(field, gas, b, d, k_ver)};
    if (e.report.verdict != Verdict::ViolationCandidate &&
        (!out.empirical_delta_margin || d > *out.empirical_delta_margin)) {
      out.empirical_delta_margin = d;
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

double parabolic_measure(const ScalarField& field, const GasModel& gas, double band) {
  const ScalarField chi = to_chi(field);
  const GridSpec& g = chi.grid();
  const DerivativeField d = derivatives(chi, StencilPolicy::Interior);
  std::size_t total = 0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!d.evaluated[k]) continue;
    const double c2 = sound_speed_sq(gas, chi.at(k), d.nodes[k].grad);
    const Classification c = pseudo_mach_classify(d.nodes[k].grad, c2);
    ++total;
    if (std::abs(c.L - 1.0) <= band) ++hits;
  }
  return total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
}

std::vector<double> parabolic_measure(std::span<const ScalarField> family, const GasModel& gas,
                                      double band) {
  std::vector<double> out;
  out.reserve(family.size());
  for (const ScalarField& f : family) out.push_back(parabolic_measure(f, gas, band));
  return out;
}

MaxPointDiagnostics maxpoint_diagnostics(const ScalarField& field, const GasModel& gas,
                                         const BarrierSpec& barrier, NodeIndex node) {
  const ScalarField chi = to_chi(field);
  const GridSpec& g = chi.grid();
  if (g.dim != 2) throw PreconditionError("maxpoint diagnostics need a 2D field");
  if (node.i < 0 || node.j < 0 || node.i >= g.dims[0] || node.j >= g.dims[1]) {
    throw PreconditionError("node outside the grid");
  }
  if (!g.active(node.i, node.j)) {
    throw PreconditionError("node " + node_text(g, g.index(node)) +
                                " lies on a Dirichlet edge, not in the interior",
                            g.index(node));
  }
  const PointState s = point_state(chi, gas, node);
  const double F0 = s.L * s.L + barrier.value(s.xi);
  const double slack = 1e-13 * (1.0 + std::abs(F0));
  for (int di = -1; di <= 1; ++di) {
    for (int dj = -1; dj <= 1; ++dj) {
      if (di == 0 && dj == 0) continue;
      const int ni = node.i + di;
      const int nj = node.j + dj;
      if (ni < 0 || nj < 0 || ni >= g.dims[0] || nj >= g.dims[1]) continue;
      const PointState t = point_state(chi, gas, {ni, nj});
      if (t.L * t.L + barrier.value(t.xi) > F0 + slack) {
        throw PreconditionError("node " + node_text(g, g.index(node)) +
                                    " is not a local maximum of L^2 + b",
                                g.index(node));
      }
    }
  }
  if (!(s.L > 0.0)) throw PreconditionError("L = 0 at the node; no rotation defined");

  MaxPointDiagnostics m;
  m.location = {node, s.xi};
  m.L = s.L;
  m.c = std::sqrt(s.c2);
  const auto& gr = s.derivs.grad;
  const auto& H = s.derivs.hess;
  const double norm = std::hypot(gr[0], gr[1]);
  const std::array<double, 2> e1{gr[0] / norm, gr[1] / norm};
  const std::array<double, 2> e2{-e1[1], e1[0]};
  m.axis = e1;
  auto quad = [&](const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return a[0] * (H[0][0] * b[0] + H[0][1] * b[1]) + a[1] * (H[1][0] * b[0] + H[1][1] * b[1]);
  };
  auto dot = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return a[0] * b[0] + a[1] * b[1];
  };
  m.chi_11 = quad(e1, e1);
  m.chi_12 = quad(e1, e2);
  m.chi_22 = quad(e2, e2);
  const std::array<double, 2> bg = barrier.gradient(s.xi);
  m.barrier_gradient = {dot(bg, e1), dot(bg, e2)};
  const std::array<double, 2> gl = grad_L2(s, gas);
  const std::array<double, 2> gF{gl[0] + bg[0], gl[1] + bg[1]};
  m.stationarity = {dot(gF, e1), dot(gF, e2)};

  const double gm1 = gas.gamma - 1.0;
  const double L = m.L;
  const double denom = L * (2.0 + gm1 * L * L);
  m.chi_11_predicted = (-m.c * m.barrier_gradient[0] - gm1 * L * L * L) / denom;
  m.gap_a = std::abs(m.chi_11 - m.chi_11_predicted);
  m.chi_12_predicted = -m.c * m.barrier_gradient[1] / denom;
  m.gap_b = std::abs(m.chi_12 - m.chi_12_predicted);
  const double d = 2.0;
  m.tangential_sum = m.chi_22;
  m.tangential_sum_predicted = (L * L - 1.0) * m.chi_11 + L * L - d;
  m.gap_c = std::abs(m.tangential_sum - m.tangential_sum_predicted);
  m.tangential_sum_near_sonic = (L * L - 1.0) * (m.chi_11 + 1.0) + L * L - d;

  double t3 = 0.0;
  for (int di = -1; di <= 1; ++di) {
    for (int dj = -1; dj <= 1; ++dj) {
      const int ni = node.i + di;
      const int nj = node.j + dj;
      if (ni < 0 || nj < 0 || ni >= g.dims[0] || nj >= g.dims[1]) continue;
      try {
        const auto T = node_third_derivatives(chi, {ni, nj});
        for (const auto& a : T) {
          for (const auto& b : a) {
            for (double v : b) t3 = std::max(t3, std::abs(v));
          }
        }
      } catch (const PreconditionError&) {
        // stencil does not fit at this neighbour; the others still bound it
      }
    }
  }
  const double h = g.max_spacing();
  m.fd_error_scale = h * h * t3;
  m.bound = 5.0 * m.fd_error_scale;
  m.residual = chi_residual(s.derivs, s.c2, 2);
  return m;
}

BarrierSpec stationary_barrier(const ScalarField& field, const GasModel& gas, NodeIndex node,
                               double curvature) {
  if (!(curvature > 0.0)) throw PreconditionError("curvature must be > 0");
  const ScalarField chi = to_chi(field);
  const PointState s = point_state(chi, gas, node);
  const std::array<double, 2> gl = grad_L2(s, gas);
  // b = -(curvature/2)|xi - center|^2, grad b(p) = curvature (center - p) = -grad L^2.
  BarrierSpec b;
  b.c_hat = 1.0;
  b.delta = curvature;
  b.beta = -1.0;
  b.center = {s.xi[0] - gl[0] / curvature, s.xi[1] - gl[1] / curvature};
  return b;
}

WallNorms check_wall_conditions(const ScalarField& field, const GasModel& gas, Edge edge,
                                std::optional<double> slip_tol) {
  const ScalarField chi = to_chi(field);
  const GridSpec& g = chi.grid();
  if (g.dim != 2) throw PreconditionError("wall checks need a 2D field");
  if (!g.has_wall(edge)) {
    throw PreconditionError("the " + std::string(to_string(edge)) + " edge is not a wall");
  }
  const int a = edge_axis(edge);
  const int n = g.dims[a];
  if (n < 5) throw PreconditionError("wall checks need at least 5 nodes normal to the wall");
  const int k = edge_is_low(edge) ? 0 : n - 1;
  const bool fwd = edge_is_low(edge);
  std::array<detail::AxisTaps, 4> normal{};
  for (int o = 0; o < 4; ++o) normal[o] = detail::one_sided_taps(o, k, n, g.spacing[a], fwd);
  const detail::AxisBoundary tb = detail::axis_boundary(g, 1 - a);
  const double dc = dc2_dchi(gas);

  WallNorms w;
  w.edge = edge;
  for (int t = 0; t < g.dims[1 - a]; ++t) {
    std::array<detail::AxisTaps, 3> tang{};
    bool ok = true;
    for (int o = 0; o < 3; ++o) ok = ok && detail::axis_taps(o, t, tb, true, tang[o]);
    if (!ok) throw PreconditionError("tangential stencil does not fit along the wall");
    auto D = [&](int on, int ot) {
      return a == 0 ? detail::apply(chi.values(), g, normal[on], tang[ot])
                    : detail::apply(chi.values(), g, tang[ot], normal[on]);
    };
    const double cn = D(1, 0);
    const double cnt = D(1, 1);
    const double cntt = D(1, 2);
    const double cnn = D(2, 0);
    const double cnnn = D(3, 0);
    const double ct = D(0, 1);
    const double c2n = dc * (cn + cn * cnn + ct * cnt);
    w.chi_n = std::max(w.chi_n, std::abs(cn));
    w.chi_nt = std::max(w.chi_nt, std::abs(cnt));
    w.chi_ntt = std::max(w.chi_ntt, std::abs(cntt));
    w.c2_n = std::max(w.c2_n, std::abs(c2n));
    w.chi_nnn = std::max(w.chi_nnn, std::abs(cnnn));
  }
  w.slip_tol = slip_tol.value_or(default_slip_tolerance(chi));
  w.slip_violated = w.chi_n > w.slip_tol;
  return w;
}

}  // namespace sspf
