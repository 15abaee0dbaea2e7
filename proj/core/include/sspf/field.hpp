#ifndef SSPF_FIELD_HPP_
#define SSPF_FIELD_HPP_

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "sspf/gas.hpp"
#include "sspf/grid.hpp"

namespace sspf {

/// Which potential a field holds. chi = psi - |xi|^2/2.
enum class Variable { Chi, Psi };

std::string_view to_string(Variable v) noexcept;

/// Nodal values of chi or psi on a GridSpec. Immutable after construction.
class ScalarField {
 public:
  ScalarField(GridSpec grid, std::vector<double> values, Variable variable = Variable::Chi);

  static ScalarField from_function(const GridSpec& grid, Variable variable,
                                   const std::function<double(const Point&)>& f);

  const GridSpec& grid() const noexcept { return grid_; }
  Variable variable() const noexcept { return variable_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator()(int i, int j = 0) const noexcept { return values_[grid_.index(i, j)]; }
  double at(std::size_t flat) const noexcept { return values_[flat]; }

  /// Copy with different wall flags; values untouched.
  ScalarField with_walls(std::array<bool, 4> walls) const;

  double max_abs() const noexcept;

 private:
  GridSpec grid_;
  std::vector<double> values_;
  Variable variable_;
};

/// Finite-difference derivatives at a node. hess is symmetric; for 1D grids
/// only grad[0] and hess[0][0] are meaningful.
struct NodeDerivatives {
  std::array<double, 2> grad{0.0, 0.0};
  std::array<std::array<double, 2>, 2> hess{{{0.0, 0.0}, {0.0, 0.0}}};
};

/// How derivative stencils treat nodes on the grid edges.
enum class StencilPolicy {
  /// Central stencils; wall edges use mirror ghosts. Dirichlet edge nodes are
  /// not evaluated.
  Interior,
  /// As Interior, plus second-order one-sided stencils on Dirichlet edges.
  Closure,
};

struct DerivativeField {
  GridSpec grid;
  std::vector<NodeDerivatives> nodes;
  /// False where the policy did not evaluate the node.
  std::vector<bool> evaluated;
};

/// Second-order central differences: d_i via (f+ - f-)/2h, d_ii via
/// (f+ - 2f + f-)/h^2, d_ij via the four-point cross stencil. Exact on
/// quadratic polynomials.
DerivativeField derivatives(const ScalarField& field,
                            StencilPolicy policy = StencilPolicy::Interior);

NodeDerivatives node_derivatives(const ScalarField& field, NodeIndex node,
                                 StencilPolicy policy = StencilPolicy::Closure);

/// Third derivatives d_abc at a node, second-order accurate; one-sided five
/// point stencils near Dirichlet edges, mirror ghosts at walls.
std::array<std::array<std::array<double, 2>, 2>, 2> node_third_derivatives(
    const ScalarField& field, NodeIndex node);

/// Everything known about the flow at one node.
struct PointState {
  Point xi{0.0, 0.0};
  double chi = 0.0;
  NodeDerivatives derivs;  // of chi
  double c2 = 0.0;
  double rho = 0.0;
  double L = 0.0;
  FlowType type = FlowType::Elliptic;
  /// Flow velocity v = grad psi = grad chi + xi.
  std::array<double, 2> velocity{0.0, 0.0};
};

PointState point_state(const ScalarField& field, const GasModel& gas, NodeIndex node,
                       StencilPolicy policy = StencilPolicy::Closure,
                       double tol_L = kDefaultTolL);

/// Point states at every node (Closure policy). Throws InvalidStateError with
/// the node index if c^2 <= 0 anywhere.
std::vector<PointState> point_states(const ScalarField& field, const GasModel& gas,
                                     double tol_L = kDefaultTolL);

/// Pointwise residual of the chi equation,
///   R = c^2 lap chi - sum_ij chi_i chi_j chi_ij - |grad chi|^2 + d c^2,
/// with c^2 supplied by the caller.
double chi_residual(const NodeDerivatives& d, double c2, int dim) noexcept;

/// Residual of the chi equation at every active node (interior and wall
/// nodes); zero on Dirichlet edge nodes. Throws InvalidStateError naming the
/// node where c^2 <= 0.
ScalarField residual_chi(const ScalarField& field, const GasModel& gas);

/// Residual of the psi form c^2 lap psi - sum_ij (psi_i - xi^i)(psi_j - xi^j) psi_ij
/// with c^2 evaluated through the chi variables.
ScalarField residual_psi(const ScalarField& field, const GasModel& gas);

struct ResidualNorms {
  double max_abs = 0.0;
  /// sqrt(h1 h2 sum R^2) over active nodes, summed in node order.
  double l2 = 0.0;
};

ResidualNorms residual_norms(const ScalarField& residual);

/// chi <-> psi, nodewise exact.
ScalarField convert(const ScalarField& field);
ScalarField to_chi(const ScalarField& field);
ScalarField to_psi(const ScalarField& field);

/// Velocity field v = grad chi + xi at every node (Closure policy).
std::vector<std::array<double, 2>> velocity_field(const ScalarField& field);

struct Translate {
  Point v0{0.0, 0.0};
};
/// Counter-clockwise rotation by quarter_turns * 90 degrees.
struct Rotate {
  int quarter_turns = 1;
};
struct Scale {
  double s = 1.0;
};
using Symmetry = std::variant<Translate, Rotate, Scale>;

struct TransformResult {
  ScalarField field;
  GasModel gas;
};

/// Symmetries of the chi equation realized on the grid metadata (no
/// interpolation): translate chi~(xi) = chi(xi - v0); rotate chi~(xi) =
/// chi(Q^T xi); scale chi~(xi) = s^2 chi(xi/s), with c0 -> s c0 and A -> s^2 A.
TransformResult transform(const ScalarField& field, const GasModel& gas, const Symmetry& op);

/// Remaps a nodal residual (or any nodal quantity that transforms like chi
/// without the additive s^2 factor, mult = s^2 for residuals under Scale).
ScalarField transform_values(const ScalarField& values, const Symmetry& op, double scale_factor);

/// One-sided second-order normal derivative at every node of the edge.
std::vector<double> edge_normal_derivative(const ScalarField& field, Edge edge);

/// Default slip tolerance used by reflect_even: 10 h^2 (1 + max |hess chi|).
double default_slip_tolerance(const ScalarField& field);

/// Even extension across a wall edge onto the doubled domain. The reflected
/// edge becomes an interior line; a wall on the opposite edge is mirrored.
/// Throws ReflectionError when |chi_n| exceeds the slip tolerance on the edge.
ScalarField reflect_even(const ScalarField& field, Edge edge,
                         std::optional<double> slip_tol = std::nullopt);

/// Half of a field on the given side of the line through its centre normal to
/// edge_axis(edge); the cut line becomes a wall. Inverse of reflect_even.
ScalarField restrict_half(const ScalarField& field, Edge keep_wall_at);

}  // namespace sspf

#endif  // SSPF_FIELD_HPP_
