#ifndef SSPF_ELLIPTICITY_HPP_
#define SSPF_ELLIPTICITY_HPP_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sspf/field.hpp"
#include "sspf/gas.hpp"
#include "sspf/grid.hpp"

namespace sspf {

/// Quadratic barrier b(xi) = (delta / c_hat^2) * beta * |xi - center|^2 / 2.
struct BarrierSpec {
  Point center{0.0, 0.0};
  double delta = 0.0;
  double c_hat = 1.0;
  double beta = 1.0;

  double coefficient() const noexcept { return delta * beta / (c_hat * c_hat); }
  double value(const Point& xi) const noexcept;
  std::array<double, 2> gradient(const Point& xi) const noexcept;
  /// Hessian is coefficient() * I.
  double hessian_diagonal() const noexcept { return coefficient(); }

  /// Closed-form sup |grad b| over the ball of radius R about the centre.
  double sup_gradient(double R) const noexcept;
  /// Closed-form sup |hess b| (spectral norm).
  double sup_hessian() const noexcept;
};

/// Largest distance from `center` to a corner of the grid.
double domain_radius(const GridSpec& grid, const Point& center) noexcept;

/// Barrier centred on the grid centroid, projected onto any wall line so that
/// db/dn = 0 on walls; beta = min(1, c_hat/R). Throws PreconditionError for
/// delta outside [0, 1], c_hat <= 0, or walls on opposite edges.
BarrierSpec make_barrier(const GridSpec& grid, double c_hat, double delta);

/// max c over the closure of the field times (1 + 1e-12).
double auto_c_hat(const ScalarField& field, const GasModel& gas);

enum class Verdict { MaxOnBoundary, UniformlySubElliptic, ViolationCandidate };

std::string_view to_string(Verdict v) noexcept;

struct NodeLocation {
  NodeIndex node;
  Point xi{0.0, 0.0};
};

/// Norms of the wall identities chi_n = chi_nt = chi_ntt = (c^2)_n = chi_nnn = 0.
struct WallNorms {
  Edge edge = Edge::Left;
  double chi_n = 0.0;
  double chi_nt = 0.0;
  double chi_ntt = 0.0;
  double c2_n = 0.0;
  double chi_nnn = 0.0;
  double slip_tol = 0.0;
  bool slip_violated = false;
};

struct EllipticityReport {
  Verdict verdict = Verdict::MaxOnBoundary;
  NodeLocation argmax_interior;
  double max_interior_F = 0.0;
  NodeLocation argmax_boundary;
  double max_boundary_F = 0.0;
  double max_interior_L2 = 0.0;
  double max_L = 0.0;
  double delta = 0.0;
  double k_ver = 10.0;
  /// Comparison tolerance k_ver h^2 max|hess F|.
  double tolerance = 0.0;
  double hess_F_scale = 0.0;
  BarrierSpec barrier;
  ResidualNorms residual;
  /// Residual level the solver accepts for this field, 1e-10 (1 + max c^2).
  double solution_residual_tol = 0.0;
  std::vector<WallNorms> walls;
};

/// Discrete ellipticity principle. F = L^2 + b on the closure; wall nodes
/// count as interior. UniformlySubElliptic if max interior L^2 <= 1 - delta +
/// tol, else MaxOnBoundary if max interior F <= max boundary F + tol, else
/// ViolationCandidate.
///
/// Throws PreconditionError if L^2 > 1 + tol or c > c_hat (1 + 1e-12) at any
/// node, if the barrier has db/dn != 0 on a wall, or if slip fails on a wall.
EllipticityReport verify_max_principle(const ScalarField& field, const GasModel& gas,
                                       const BarrierSpec& barrier, double delta,
                                       double k_ver = 10.0);

struct DeltaSweepEntry {
  double delta = 0.0;
  EllipticityReport report;
};

struct DeltaSweep {
  std::vector<DeltaSweepEntry> entries;
  /// Largest tested delta whose verdict is not ViolationCandidate. This is an
  /// empirical margin on the sampled data, not a certified constant.
  std::optional<double> empirical_delta_margin;
};

DeltaSweep sweep_delta(const ScalarField& field, const GasModel& gas, double c_hat,
                       std::span<const double> deltas, double k_ver = 10.0);

/// Fraction of active nodes with |L - 1| <= band.
double parabolic_measure(const ScalarField& field, const GasModel& gas, double band);

std::vector<double> parabolic_measure(std::span<const ScalarField> family, const GasModel& gas,
                                      double band);

/// First-order stationarity diagnostics at a local maximum of L^2 + b, in the
/// frame rotated so that grad chi points along axis 1.
struct MaxPointDiagnostics {
  NodeLocation location;
  double L = 0.0;
  double c = 0.0;
  /// Unit vector along grad chi (rotated axis 1).
  std::array<double, 2> axis{1.0, 0.0};
  /// Rotated Hessian entries.
  double chi_11 = 0.0;
  double chi_12 = 0.0;
  double chi_22 = 0.0;
  /// Rotated barrier gradient.
  std::array<double, 2> barrier_gradient{0.0, 0.0};
  /// Rotated gradient of L^2 + b from the chain rule on the FD derivatives.
  std::array<double, 2> stationarity{0.0, 0.0};
  /// (a) chi_11 predicted by (L^2+b)_1 = 0: (-c b_1 - (gamma-1) L^3) / (L (2 + (gamma-1) L^2)).
  double chi_11_predicted = 0.0;
  double gap_a = 0.0;
  /// (b) chi_12 predicted by (L^2+b)_2 = 0: -c b_2 / (L (2 + (gamma-1) L^2)).
  double chi_12_predicted = 0.0;
  double gap_b = 0.0;
  /// (c) sum_{j>1} chi_jj predicted by the chi equation in the rotated frame:
  /// (L^2 - 1) chi_11 + L^2 - d.
  double tangential_sum = 0.0;
  double tangential_sum_predicted = 0.0;
  double gap_c = 0.0;
  /// Near-sonic form (L^2 - 1)(chi_11 + 1) + L^2 - d; differs from the exact
  /// rotated identity by L^2 - 1.
  double tangential_sum_near_sonic = 0.0;
  /// h^2 * max |third derivatives of chi| around the node.
  double fd_error_scale = 0.0;
  /// Bound 5 * fd_error_scale used for (a)-(c).
  double bound = 0.0;
  double residual = 0.0;
};

/// Throws PreconditionError when the node is on a Dirichlet edge, is not a
/// local maximum of L^2 + b against its 8 neighbours, or has L == 0.
MaxPointDiagnostics maxpoint_diagnostics(const ScalarField& field, const GasModel& gas,
                                         const BarrierSpec& barrier, NodeIndex node);

/// Concave barrier (negative beta) that makes `node` a stationary point of
/// L^2 + b with Hessian shifted by -curvature. Used to place diagnostic
/// maxima on solved fields; it does not satisfy the ellipticity-principle
/// bounds.
BarrierSpec stationary_barrier(const ScalarField& field, const GasModel& gas, NodeIndex node,
                               double curvature);

/// Wall identities on a declared wall edge, using one-sided normal stencils
/// (>= 5 nodes normal to the wall). Throws PreconditionError otherwise.
WallNorms check_wall_conditions(const ScalarField& field, const GasModel& gas, Edge edge,
                                std::optional<double> slip_tol = std::nullopt);

}  // namespace sspf

#endif  // SSPF_ELLIPTICITY_HPP_
