#include "sspf/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <string>

#include "sspf/error.hpp"
#include "stencil.hpp"

namespace sspf {

void SolverConfig::validate() const {
  if (max_newton_iters < 1) throw PreconditionError("max_newton_iters must be >= 1");
  if (picard_warmup_iters < 0) throw PreconditionError("picard_warmup_iters must be >= 0");
  if (residual_tol && !(*residual_tol > 0.0)) throw PreconditionError("residual_tol must be > 0");
  if (c2_floor && !(*c2_floor > 0.0)) throw PreconditionError("c2_floor must be > 0");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw PreconditionError("backtrack must be in (0,1)");
  if (!(min_step > 0.0 && min_step <= 1.0)) throw PreconditionError("min_step must be in (0,1]");
  if (!(L_guard > 0.0 && L_guard < 1.0)) throw PreconditionError("L_guard must be in (0,1)");
}

ScalarField default_initial_guess(const GridSpec& grid, const ScalarField& boundary) {
  if (!same_geometry(grid, boundary.grid())) {
    throw PreconditionError("boundary data grid does not match the solve grid");
  }
  const ScalarField bchi = to_chi(boundary);
  const int n1 = grid.dims[0];
  const int n2 = grid.dims[1];
  std::vector<double> psi(grid.size());
  std::vector<bool> known(grid.size(), false);
  double sum = 0.0;
  std::size_t count = 0;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      if (!grid.on_dirichlet_edge(i, j)) continue;
      const Point xi = grid.xi(i, j);
      const std::size_t k = grid.index(i, j);
      psi[k] = bchi(i, j) + 0.5 * (xi[0] * xi[0] + xi[1] * xi[1]);
      known[k] = true;
      sum += psi[k];
      ++count;
    }
  }
  const double mean = count ? sum / static_cast<double>(count) : 0.0;
  for (auto [i, j] : {std::pair{0, 0}, {n1 - 1, 0}, {0, n2 - 1}, {n1 - 1, n2 - 1}}) {
    const std::size_t k = grid.index(i, j);
    if (!known[k]) {
      psi[k] = mean;
      known[k] = true;
    }
  }
  auto fill_edge = [&](Edge e) {
    if (!grid.has_wall(e)) return;
    const int a = edge_axis(e);
    const int fixed = edge_is_low(e) ? 0 : grid.dims[a] - 1;
    const int n = grid.dims[1 - a];
    auto idx = [&](int t) { return a == 0 ? grid.index(fixed, t) : grid.index(t, fixed); };
    const double p0 = psi[idx(0)];
    const double p1 = psi[idx(n - 1)];
    for (int t = 1; t < n - 1; ++t) {
      if (known[idx(t)]) continue;
      const double u = static_cast<double>(t) / (n - 1);
      psi[idx(t)] = (1.0 - u) * p0 + u * p1;
    }
  };
  for (Edge e : kAllEdges) fill_edge(e);
  const double p00 = psi[grid.index(0, 0)];
  const double p10 = psi[grid.index(n1 - 1, 0)];
  const double p01 = psi[grid.index(0, n2 - 1)];
  const double p11 = psi[grid.index(n1 - 1, n2 - 1)];
  std::vector<double> chi(grid.size());
  for (int i = 0; i < n1; ++i) {
    const double u = static_cast<double>(i) / (n1 - 1);
    for (int j = 0; j < n2; ++j) {
      const std::size_t k = grid.index(i, j);
      if (grid.on_dirichlet_edge(i, j)) {
        chi[k] = bchi(i, j);
        continue;
      }
      const double v = static_cast<double>(j) / (n2 - 1);
      double p = psi[k];
      if (!grid.on_edge(i, j)) {
        p = (1 - u) * psi[grid.index(0, j)] + u * psi[grid.index(n1 - 1, j)] +
            (1 - v) * psi[grid.index(i, 0)] + v * psi[grid.index(i, n2 - 1)] -
            ((1 - u) * (1 - v) * p00 + u * (1 - v) * p10 + (1 - u) * v * p01 + u * v * p11);
      }
      const Point xi = grid.xi(i, j);
      chi[k] = p - 0.5 * (xi[0] * xi[0] + xi[1] * xi[1]);
    }
  }
  return ScalarField(grid, std::move(chi), Variable::Chi);
}

namespace {

struct UnknownStencil {
  std::size_t node = 0;
  std::array<detail::AxisTaps, 3> x{};
  std::array<detail::AxisTaps, 3> y{};
};

struct Evaluation {
  Eigen::VectorXd residual;
  double norm = 0.0;
  double max_L = 0.0;
  std::size_t clamped = 0;
  std::size_t guard = 0;
};

class NewtonProblem {
 public:
  NewtonProblem(const GridSpec& grid, const GasModel& gas, double c2_floor, double L_guard)
      : grid_(grid), gas_(gas), c2_floor_(c2_floor), L_guard_(L_guard),
        unknown_of_(grid.size(), -1) {
    const detail::AxisBoundary b0 = detail::axis_boundary(grid, 0);
    const detail::AxisBoundary b1 = detail::axis_boundary(grid, 1);
    for (int i = 0; i < grid.dims[0]; ++i) {
      for (int j = 0; j < grid.dims[1]; ++j) {
        if (!grid.active(i, j)) continue;
        UnknownStencil s;
        s.node = grid.index(i, j);
        for (int o = 0; o < 3; ++o) {
          if (!detail::axis_taps(o, i, b0, false, s.x[o]) ||
              !detail::axis_taps(o, j, b1, false, s.y[o])) {
            throw PreconditionError("solver stencil does not fit at an unknown node");
          }
        }
        unknown_of_[s.node] = static_cast<int>(stencils_.size());
        stencils_.push_back(s);
      }
    }
  }

  std::size_t unknowns() const noexcept { return stencils_.size(); }
  std::size_t node_of(std::size_t u) const noexcept { return stencils_[u].node; }

  struct Local {
    double chi, c2, dc2;
    NodeDerivatives d;
    bool clamped;
  };

  Local local(const std::vector<double>& values, const UnknownStencil& s) const {
    Local l{};
    l.chi = values[s.node];
    l.d.grad[0] = detail::apply(values, grid_, s.x[1], s.y[0]);
    l.d.grad[1] = detail::apply(values, grid_, s.x[0], s.y[1]);
    l.d.hess[0][0] = detail::apply(values, grid_, s.x[2], s.y[0]);
    l.d.hess[1][1] = detail::apply(values, grid_, s.x[0], s.y[2]);
    l.d.hess[0][1] = l.d.hess[1][0] = detail::apply(values, grid_, s.x[1], s.y[1]);
    const double c2 = sound_speed_sq_raw(gas_, l.chi, l.d.grad);
    l.clamped = !(c2 >= c2_floor_);
    l.c2 = l.clamped ? c2_floor_ : c2;
    l.dc2 = l.clamped ? 0.0 : dc2_dchi(gas_);
    return l;
  }

  Evaluation evaluate(const std::vector<double>& values) const {
    Evaluation ev;
    ev.residual.resize(static_cast<Eigen::Index>(unknowns()));
    for (std::size_t u = 0; u < unknowns(); ++u) {
      const Local l = local(values, stencils_[u]);
      const double r = chi_residual(l.d, l.c2, 2);
      ev.residual[static_cast<Eigen::Index>(u)] = r;
      ev.norm = std::max(ev.norm, std::abs(r));
      if (!std::isfinite(r)) ev.norm = INFINITY;
      if (l.clamped) ++ev.clamped;
      const double L = std::sqrt((l.d.grad[0] * l.d.grad[0] + l.d.grad[1] * l.d.grad[1]) / l.c2);
      ev.max_L = std::max(ev.max_L, L);
      if (L >= L_guard_) ++ev.guard;
    }
    return ev;
  }

  /// Newton (full) or Picard (second-order coefficients only) Jacobian.
  Eigen::SparseMatrix<double> jacobian(const std::vector<double>& values, bool newton) const {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(unknowns() * 12);
    for (std::size_t u = 0; u < unknowns(); ++u) {
      const UnknownStencil& s = stencils_[u];
      const Local l = local(values, s);
      const double g1 = l.d.grad[0];
      const double g2 = l.d.grad[1];
      const double lap = l.d.hess[0][0] + l.d.hess[1][1];
      std::array<double, 6> a{};  // chi, chi_1, chi_2, chi_11, chi_22, chi_12
      a[3] = l.c2 - g1 * g1;
      a[4] = l.c2 - g2 * g2;
      a[5] = -2.0 * g1 * g2;
      if (newton) {
        a[0] = l.dc2 * (lap + 2.0);
        a[1] = l.dc2 * g1 * (lap + 2.0) - 2.0 * g1 * l.d.hess[0][0] - 2.0 * g2 * l.d.hess[0][1] -
               2.0 * g1;
        a[2] = l.dc2 * g2 * (lap + 2.0) - 2.0 * g2 * l.d.hess[1][1] - 2.0 * g1 * l.d.hess[0][1] -
               2.0 * g2;
      }
      const std::array<std::pair<int, int>, 6> orders{
          {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}}};
      for (int q = 0; q < 6; ++q) {
        for (const detail::Tap& tx : s.x[orders[q].first].view()) {
          for (const detail::Tap& ty : s.y[orders[q].second].view()) {
            const int col = unknown_of_[grid_.index(tx.index, ty.index)];
            if (col < 0) continue;
            trip.emplace_back(static_cast<int>(u), col, a[q] * tx.weight * ty.weight);
          }
        }
      }
    }
    Eigen::SparseMatrix<double> J(static_cast<Eigen::Index>(unknowns()),
                                  static_cast<Eigen::Index>(unknowns()));
    J.setFromTriplets(trip.begin(), trip.end());
    J.makeCompressed();
    return J;
  }

 private:
  const GridSpec& grid_;
  const GasModel& gas_;
  double c2_floor_;
  double L_guard_;
  std::vector<int> unknown_of_;
  std::vector<UnknownStencil> stencils_;
};

double max_c2_estimate(const ScalarField& f, const GasModel& gas) {
  const DerivativeField d = derivatives(f, StencilPolicy::Closure);
  double m = 0.0;
  for (std::size_t k = 0; k < d.nodes.size(); ++k) {
    const double c2 = sound_speed_sq_raw(gas, f.at(k), d.nodes[k].grad);
    if (std::isfinite(c2)) m = std::max(m, c2);
  }
  return m;
}

}  // namespace

SolveResult solve_dirichlet(const GridSpec& grid, const ScalarField& boundary, const GasModel& gas,
                            const SolverConfig& config,
                            const std::optional<ScalarField>& initial_guess) {
  grid.validate();
  gas.validate();
  config.validate();
  if (grid.dim != 2) throw PreconditionError("solve_dirichlet supports 2D grids only");
  if (!same_geometry(grid, boundary.grid())) {
    throw PreconditionError("boundary data grid does not match the solve grid");
  }
  for (Edge e : kAllEdges) {
    const Edge opposite = static_cast<Edge>(static_cast<int>(e) ^ 1);
    if (grid.has_wall(e) && grid.has_wall(opposite)) {
      throw PreconditionError("walls on opposite edges leave the Dirichlet problem without data");
    }
  }
  const ScalarField bchi = to_chi(boundary);

  std::vector<double> values;
  if (initial_guess) {
    if (!same_geometry(grid, initial_guess->grid())) {
      throw PreconditionError("initial guess grid does not match the solve grid");
    }
    const ScalarField g = to_chi(*initial_guess);
    values.assign(g.values().begin(), g.values().end());
  } else {
    const ScalarField g = default_initial_guess(grid, bchi);
    values.assign(g.values().begin(), g.values().end());
  }
  for (int i = 0; i < grid.dims[0]; ++i) {
    for (int j = 0; j < grid.dims[1]; ++j) {
      if (grid.on_dirichlet_edge(i, j)) values[grid.index(i, j)] = bchi(i, j);
    }
  }

  const double c2_est = max_c2_estimate(ScalarField(grid, values, Variable::Chi), gas);
  SolveReport report;
  report.residual_tol = config.residual_tol.value_or(1e-10 * (1.0 + c2_est));
  report.c2_floor = config.c2_floor.value_or(1e-8 * std::max(c2_est, 1e-300));

  NewtonProblem problem(grid, gas, report.c2_floor, config.L_guard);
  const std::size_t nu = problem.unknowns();
  Evaluation current = problem.evaluate(values);
  report.residual_history.push_back(current.norm);

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool pattern_ready = false;
  int clamped_streak = 0;
  int picard_left = config.picard_warmup_iters;

  while (current.norm > report.residual_tol && report.iterations < config.max_newton_iters) {
    const bool newton = picard_left <= 0;
    const Eigen::SparseMatrix<double> J = problem.jacobian(values, newton);
    if (!pattern_ready) {
      lu.analyzePattern(J);
      pattern_ready = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) {
      report.message = "linear factorization failed";
      break;
    }
    const Eigen::VectorXd delta = lu.solve(-current.residual);
    if (lu.info() != Eigen::Success || !delta.allFinite()) {
      report.message = "linear solve failed";
      break;
    }

    double alpha = 1.0;
    bool accepted = false;
    std::vector<double> trial = values;
    Evaluation next;
    while (alpha >= config.min_step) {
      for (std::size_t u = 0; u < nu; ++u) {
        trial[problem.node_of(u)] = values[problem.node_of(u)] +
                                    alpha * delta[static_cast<Eigen::Index>(u)];
      }
      next = problem.evaluate(trial);
      const bool guard_ok = next.guard == 0 || next.guard <= current.guard;
      if (!guard_ok) ++report.guard_activations;
      if (next.norm < current.norm && guard_ok) {
        accepted = true;
        break;
      }
      alpha *= config.backtrack;
    }
    if (!accepted) {
      if (!newton) {
        picard_left = 0;
        continue;
      }
      report.message = "line search stalled";
      break;
    }
    values.swap(trial);
    current = std::move(next);
    ++report.iterations;
    if (!newton) --picard_left;
    report.residual_history.push_back(current.norm);
    report.steps.push_back({newton ? StepKind::Newton : StepKind::Picard, alpha, current.norm});

    if (current.clamped * 100 > nu) {
      if (++clamped_streak >= 3) {
        throw DegenerateStateError("c^2 at the floor on " + std::to_string(current.clamped) +
                                   " of " + std::to_string(nu) + " unknowns");
      }
    } else {
      clamped_streak = 0;
    }
  }

  report.converged = current.norm <= report.residual_tol;
  if (report.converged) {
    report.message = "converged";
  } else if (report.message.empty()) {
    report.message = "iteration limit reached";
  }
  report.max_interior_L = current.max_L;
  report.clamped_nodes = current.clamped;
  report.guard_nodes = current.guard;
  report.uniformly_elliptic = current.guard == 0 && current.clamped == 0;

  ScalarField solution(grid, std::move(values), Variable::Chi);
  if (grid.any_wall()) {
    double slip = 0.0;
    for (Edge e : kAllEdges) {
      if (!grid.has_wall(e)) continue;
      for (double v : edge_normal_derivative(solution, e)) slip = std::max(slip, std::abs(v));
    }
    report.wall_slip_norm = slip;
  }
  return {std::move(solution), std::move(report)};
}

}  // namespace sspf
