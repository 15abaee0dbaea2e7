#include "sspf/field.hpp"

#include <cmath>
#include <string>

#include "sspf/error.hpp"
#include "stencil.hpp"

namespace sspf {

std::string_view to_string(Variable v) noexcept { return v == Variable::Chi ? "chi" : "psi"; }

ScalarField::ScalarField(GridSpec grid, std::vector<double> values, Variable variable)
    : grid_(std::move(grid)), values_(std::move(values)), variable_(variable) {
  grid_.validate();
  if (values_.size() != grid_.size()) {
    throw PreconditionError("field has " + std::to_string(values_.size()) + " values for " +
                            std::to_string(grid_.size()) + " nodes");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) throw PreconditionError("non-finite field value", k);
  }
}

ScalarField ScalarField::from_function(const GridSpec& grid, Variable variable,
                                       const std::function<double(const Point&)>& f) {
  std::vector<double> v(grid.size());
  for (int i = 0; i < grid.dims[0]; ++i) {
    for (int j = 0; j < grid.dims[1]; ++j) v[grid.index(i, j)] = f(grid.xi(i, j));
  }
  return ScalarField(grid, std::move(v), variable);
}

ScalarField ScalarField::with_walls(std::array<bool, 4> walls) const {
  GridSpec g = grid_;
  g.walls = walls;
  return ScalarField(g, values_, variable_);
}

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

DerivativeField derivatives(const ScalarField& field, StencilPolicy policy) {
  const GridSpec& g = field.grid();
  DerivativeField out{g, std::vector<NodeDerivatives>(g.size()), std::vector<bool>(g.size(), false)};
  const bool closure = policy == StencilPolicy::Closure;
  for (int i = 0; i < g.dims[0]; ++i) {
    for (int j = 0; j < g.dims[1]; ++j) {
      if (!closure && g.on_dirichlet_edge(i, j)) continue;
      const std::size_t k = g.index(i, j);
      out.nodes[k] = detail::node_derivs(field.values(), g, {i, j}, closure);
      out.evaluated[k] = true;
    }
  }
  return out;
}

NodeDerivatives node_derivatives(const ScalarField& field, NodeIndex node, StencilPolicy policy) {
  return detail::node_derivs(field.values(), field.grid(), node,
                             policy == StencilPolicy::Closure);
}

std::array<std::array<std::array<double, 2>, 2>, 2> node_third_derivatives(
    const ScalarField& field, NodeIndex node) {
  const GridSpec& g = field.grid();
  std::array<std::array<std::array<double, 2>, 2>, 2> t{};
  const int axes = g.dim;
  for (int a = 0; a < axes; ++a) {
    for (int b = 0; b < axes; ++b) {
      for (int c = 0; c < axes; ++c) {
        std::array<int, 2> orders{0, 0};
        ++orders[a];
        ++orders[b];
        ++orders[c];
        t[a][b][c] = detail::derivative(field.values(), g, node, orders, true);
      }
    }
  }
  return t;
}

PointState point_state(const ScalarField& field, const GasModel& gas, NodeIndex node,
                       StencilPolicy policy, double tol_L) {
  std::optional<ScalarField> converted;
  if (field.variable() != Variable::Chi) converted = convert(field);
  const ScalarField& chi = converted ? *converted : field;
  const GridSpec& g = chi.grid();
  PointState s;
  s.xi = g.xi(node);
  s.chi = chi(node.i, node.j);
  s.derivs = node_derivatives(chi, node, policy);
  const std::span<const double> grad(s.derivs.grad.data(), static_cast<std::size_t>(g.dim));
  try {
    s.c2 = sound_speed_sq(gas, s.chi, grad);
    s.rho = density(gas, s.chi, grad);
  } catch (const InvalidStateError& e) {
    throw InvalidStateError(std::string(e.what()) + " at node (" + std::to_string(node.i) + "," +
                                std::to_string(node.j) + ")",
                            g.index(node));
  }
  const Classification cl = pseudo_mach_classify(grad, s.c2, tol_L);
  s.L = cl.L;
  s.type = cl.type;
  for (int a = 0; a < g.dim; ++a) s.velocity[a] = s.derivs.grad[a] + s.xi[a];
  return s;
}

std::vector<PointState> point_states(const ScalarField& field, const GasModel& gas, double tol_L) {
  const ScalarField chi = to_chi(field);
  std::vector<PointState> out;
  out.reserve(chi.grid().size());
  for (std::size_t k = 0; k < chi.grid().size(); ++k) {
    out.push_back(point_state(chi, gas, chi.grid().node(k), StencilPolicy::Closure, tol_L));
  }
  return out;
}

double chi_residual(const NodeDerivatives& d, double c2, int dim) noexcept {
  double lap = 0.0;
  double quad = 0.0;
  double q2 = 0.0;
  for (int a = 0; a < dim; ++a) {
    lap += d.hess[a][a];
    q2 += d.grad[a] * d.grad[a];
    for (int b = 0; b < dim; ++b) quad += d.grad[a] * d.grad[b] * d.hess[a][b];
  }
  return c2 * lap - quad - q2 + dim * c2;
}

namespace {

double checked_c2(const GasModel& gas, double chi, const NodeDerivatives& d, const GridSpec& g,
                  int i, int j) {
  const double c2 = sound_speed_sq_raw(
      gas, chi, std::span<const double>(d.grad.data(), static_cast<std::size_t>(g.dim)));
  if (!(c2 > 0.0) || !std::isfinite(c2)) {
    throw InvalidStateError("nonpositive c^2 = " + std::to_string(c2) + " at node (" +
                                std::to_string(i) + "," + std::to_string(j) + ")",
                            g.index(i, j));
  }
  return c2;
}

}  // namespace

ScalarField residual_chi(const ScalarField& field, const GasModel& gas) {
  if (field.variable() != Variable::Chi) {
    throw PreconditionError("residual_chi expects a chi field; convert first");
  }
  const GridSpec& g = field.grid();
  std::vector<double> r(g.size(), 0.0);
  for (int i = 0; i < g.dims[0]; ++i) {
    for (int j = 0; j < g.dims[1]; ++j) {
      if (g.on_dirichlet_edge(i, j)) continue;
      const NodeDerivatives d = detail::node_derivs(field.values(), g, {i, j}, false);
      const double c2 = checked_c2(gas, field(i, j), d, g, i, j);
      r[g.index(i, j)] = chi_residual(d, c2, g.dim);
    }
  }
  return ScalarField(g, std::move(r), Variable::Chi);
}

ScalarField residual_psi(const ScalarField& field, const GasModel& gas) {
  if (field.variable() != Variable::Psi) {
    throw PreconditionError("residual_psi expects a psi field; convert first");
  }
  const GridSpec& g = field.grid();
  std::vector<double> r(g.size(), 0.0);
  for (int i = 0; i < g.dims[0]; ++i) {
    for (int j = 0; j < g.dims[1]; ++j) {
      if (g.on_dirichlet_edge(i, j)) continue;
      const NodeDerivatives dpsi = detail::node_derivs(field.values(), g, {i, j}, false);
      const Point xi = g.xi(i, j);
      NodeDerivatives dchi = dpsi;
      double xi2 = 0.0;
      for (int a = 0; a < g.dim; ++a) {
        dchi.grad[a] -= xi[a];
        xi2 += xi[a] * xi[a];
      }
      const double c2 = checked_c2(gas, field(i, j) - 0.5 * xi2, dchi, g, i, j);
      double lap = 0.0;
      double quad = 0.0;
      for (int a = 0; a < g.dim; ++a) {
        lap += dpsi.hess[a][a];
        for (int b = 0; b < g.dim; ++b) quad += dchi.grad[a] * dchi.grad[b] * dpsi.hess[a][b];
      }
      r[g.index(i, j)] = c2 * lap - quad;
    }
  }
  return ScalarField(g, std::move(r), Variable::Psi);
}

ResidualNorms residual_norms(const ScalarField& residual) {
  const GridSpec& g = residual.grid();
  ResidualNorms n;
  double sum = 0.0;
  for (int i = 0; i < g.dims[0]; ++i) {
    for (int j = 0; j < g.dims[1]; ++j) {
      if (g.on_dirichlet_edge(i, j)) continue;
      const double v = residual(i, j);
      n.max_abs = std::max(n.max_abs, std::abs(v));
      sum += v * v;
    }
  }
  const double cell = g.dim == 2 ? g.spacing[0] * g.spacing[1] : g.spacing[0];
  n.l2 = std::sqrt(cell * sum);
  return n;
}

ScalarField convert(const ScalarField& field) {
  const GridSpec& g = field.grid();
  const double sign = field.variable() == Variable::Chi ? 1.0 : -1.0;
  std::vector<double> v(g.size());
  for (int i = 0; i < g.dims[0]; ++i) {
    for (int j = 0; j < g.dims[1]; ++j) {
      const Point xi = g.xi(i, j);
      const double half = 0.5 * (xi[0] * xi[0] + xi[1] * xi[1]);
      v[g.index(i, j)] = field(i, j) + sign * half;
    }
  }
  return ScalarField(g, std::move(v),
                     field.variable() == Variable::Chi ? Variable::Psi : Variable::Chi);
}

ScalarField to_chi(const ScalarField& field) {
  return field.variable() == Variable::Chi ? field : convert(field);
}

ScalarField to_psi(const ScalarField& field) {
  return field.variable() == Variable::Psi ? field : convert(field);
}

std::vector<std::array<double, 2>> velocity_field(const ScalarField& field) {
  const ScalarField psi = to_psi(field);
  const DerivativeField d = derivatives(psi, StencilPolicy::Closure);
  std::vector<std::array<double, 2>> v(psi.grid().size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = d.nodes[k].grad;
  return v;
}

namespace {

ScalarField rotate_quarter(const ScalarField& f) {
  const GridSpec& g = f.grid();
  if (g.dim != 2) throw PreconditionError("rotation needs a 2D field");
  const int n1 = g.dims[0];
  const int n2 = g.dims[1];
  GridSpec r = g;
  r.dims = {n2, n1};
  r.spacing = {g.spacing[1], g.spacing[0]};
  r.origin = {-(g.origin[1] + (n2 - 1) * g.spacing[1]), g.origin[0]};
  r.walls[static_cast<int>(Edge::Bottom)] = g.has_wall(Edge::Left);
  r.walls[static_cast<int>(Edge::Top)] = g.has_wall(Edge::Right);
  r.walls[static_cast<int>(Edge::Right)] = g.has_wall(Edge::Bottom);
  r.walls[static_cast<int>(Edge::Left)] = g.has_wall(Edge::Top);
  std::vector<double> v(r.size());
  for (int ip = 0; ip < n2; ++ip) {
    for (int jp = 0; jp < n1; ++jp) v[r.index(ip, jp)] = f(jp, n2 - 1 - ip);
  }
  return ScalarField(r, std::move(v), f.variable());
}

ScalarField remap(const ScalarField& f, const Symmetry& op, double factor) {
  GridSpec g = f.grid();
  std::vector<double> v(f.values().begin(), f.values().end());
  if (const auto* t = std::get_if<Translate>(&op)) {
    for (int a = 0; a < g.dim; ++a) g.origin[a] += t->v0[a];
  } else if (const auto* s = std::get_if<Scale>(&op)) {
    if (!(s->s > 0.0)) throw PreconditionError("scale factor must be positive");
    for (int a = 0; a < g.dim; ++a) {
      g.origin[a] *= s->s;
      g.spacing[a] *= s->s;
    }
  } else {
    const int turns = ((std::get<Rotate>(op).quarter_turns % 4) + 4) % 4;
    ScalarField r = f;
    for (int k = 0; k < turns; ++k) r = rotate_quarter(r);
    g = r.grid();
    v.assign(r.values().begin(), r.values().end());
  }
  if (factor != 1.0) {
    for (double& x : v) x *= factor;
  }
  return ScalarField(g, std::move(v), f.variable());
}

}  // namespace

TransformResult transform(const ScalarField& field, const GasModel& gas, const Symmetry& op) {
  const ScalarField chi = to_chi(field);
  GasModel out_gas = gas;
  double factor = 1.0;
  if (const auto* s = std::get_if<Scale>(&op)) {
    factor = s->s * s->s;
    out_gas.c0 *= s->s;
    out_gas.bernoulli_A *= factor;
  }
  ScalarField t = remap(chi, op, factor);
  if (field.variable() == Variable::Psi) t = convert(t);
  return {std::move(t), out_gas};
}

ScalarField transform_values(const ScalarField& values, const Symmetry& op, double scale_factor) {
  return remap(values, op, scale_factor);
}

namespace {

struct EdgeWalk {
  int axis;        // normal axis
  int k;           // normal index of the edge
  bool forward;    // into the domain
  int tangential;  // number of nodes along the edge
};

EdgeWalk edge_walk(const GridSpec& g, Edge e) {
  const int a = edge_axis(e);
  if (a >= g.dim) throw PreconditionError("edge does not exist on a 1D grid");
  EdgeWalk w;
  w.axis = a;
  w.k = edge_is_low(e) ? 0 : g.dims[a] - 1;
  w.forward = edge_is_low(e);
  w.tangential = g.dim == 2 ? g.dims[1 - a] : 1;
  return w;
}

}  // namespace

std::vector<double> edge_normal_derivative(const ScalarField& field, Edge edge) {
  const ScalarField chi = to_chi(field);
  const GridSpec& g = chi.grid();
  const EdgeWalk w = edge_walk(g, edge);
  const detail::AxisTaps normal = detail::one_sided_taps(1, w.k, g.dims[w.axis],
                                                         g.spacing[w.axis], w.forward);
  std::vector<double> out(static_cast<std::size_t>(w.tangential));
  for (int t = 0; t < w.tangential; ++t) {
    detail::AxisTaps along;
    along.add(t, 1.0);
    out[t] = w.axis == 0 ? detail::apply(chi.values(), g, normal, along)
                         : detail::apply(chi.values(), g, along, normal);
  }
  return out;
}

double default_slip_tolerance(const ScalarField& field) {
  // One-sided stencils on every edge: mirror ghosts would turn a slip
  // violation into a spurious O(chi_n / h) curvature.
  const ScalarField chi = to_chi(field).with_walls({false, false, false, false});
  const DerivativeField d = derivatives(chi, StencilPolicy::Closure);
  double m = 0.0;
  for (const NodeDerivatives& n : d.nodes) {
    for (const auto& row : n.hess) {
      for (double v : row) m = std::max(m, std::abs(v));
    }
  }
  const double h = chi.grid().max_spacing();
  return 10.0 * h * h * (1.0 + m);
}

ScalarField reflect_even(const ScalarField& field, Edge edge, std::optional<double> slip_tol) {
  const ScalarField chi = to_chi(field);
  const GridSpec& g = chi.grid();
  const EdgeWalk w = edge_walk(g, edge);
  const double tol = slip_tol.value_or(default_slip_tolerance(chi));
  double slip = 0.0;
  for (double v : edge_normal_derivative(chi, edge)) slip = std::max(slip, std::abs(v));
  if (slip > tol) {
    throw ReflectionError("slip condition violated on " + std::string(to_string(edge)) +
                          " edge: max |chi_n| = " + std::to_string(slip) +
                          " > tolerance " + std::to_string(tol));
  }
  const int a = w.axis;
  const int n = g.dims[a];
  GridSpec r = g;
  r.dims[a] = 2 * n - 1;
  const Edge low = a == 0 ? Edge::Left : Edge::Bottom;
  const Edge high = a == 0 ? Edge::Right : Edge::Top;
  const bool low_edge = edge_is_low(edge);
  if (low_edge) r.origin[a] = g.origin[a] - (n - 1) * g.spacing[a];
  const bool far_wall = g.has_wall(low_edge ? high : low);
  r.walls[static_cast<int>(low)] = far_wall;
  r.walls[static_cast<int>(high)] = far_wall;
  std::vector<double> v(r.size());
  for (int i = 0; i < r.dims[0]; ++i) {
    for (int j = 0; j < r.dims[1]; ++j) {
      std::array<int, 2> src{i, j};
      const int kp = src[a];
      src[a] = low_edge ? std::abs(kp - (n - 1)) : (n - 1) - std::abs(kp - (n - 1));
      v[r.index(i, j)] = chi(src[0], src[1]);
    }
  }
  ScalarField out(r, std::move(v), Variable::Chi);
  return field.variable() == Variable::Psi ? convert(out) : out;
}

ScalarField restrict_half(const ScalarField& field, Edge keep_wall_at) {
  const ScalarField chi = to_chi(field);
  const GridSpec& g = chi.grid();
  const int a = edge_axis(keep_wall_at);
  if (a >= g.dim) throw PreconditionError("edge does not exist on a 1D grid");
  const int n = g.dims[a];
  if (n % 2 == 0) throw PreconditionError("restrict_half needs an odd node count");
  const int mid = (n - 1) / 2;
  const bool low = edge_is_low(keep_wall_at);
  GridSpec r = g;
  r.dims[a] = mid + 1;
  const int offset = low ? mid : 0;
  r.origin[a] = g.origin[a] + offset * g.spacing[a];
  r.walls[static_cast<int>(keep_wall_at)] = true;
  std::vector<double> v(r.size());
  for (int i = 0; i < r.dims[0]; ++i) {
    for (int j = 0; j < r.dims[1]; ++j) {
      std::array<int, 2> src{i, j};
      src[a] += offset;
      v[r.index(i, j)] = chi(src[0], src[1]);
    }
  }
  ScalarField out(r, std::move(v), Variable::Chi);
  return field.variable() == Variable::Psi ? convert(out) : out;
}

}  // namespace sspf
