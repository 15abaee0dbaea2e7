#ifndef SSPF_EXACT_HPP_
#define SSPF_EXACT_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sspf/field.hpp"
#include "sspf/gas.hpp"
#include "sspf/grid.hpp"

namespace sspf {

/// Sound speed squared of the constant-velocity state chi = v.xi - |xi|^2/2 + A'.
double uniform_flow_c2(const GasModel& gas, std::span<const double> v, double a_prime);

/// chi = v.xi - |xi|^2/2 + a_prime sampled on the grid. grad chi = v - xi,
/// hess chi = -I, c^2 constant. Throws InvalidStateError when c^2 <= 0.
ScalarField uniform_flow(std::span<const double> v, double a_prime, const GasModel& gas,
                         const GridSpec& grid);

enum class OneDBranch { Affine, RarefactionPlus, RarefactionMinus };

struct InitialCondition {
  double xi0 = 0.0;
  double chi0 = 0.0;
  double dchi0 = 0.0;
};

/// Sampled 1D solution (xi, chi, chi').
struct Profile1D {
  std::vector<double> xi;
  std::vector<double> chi;
  std::vector<double> dchi;
  /// Affine branch: the requested interval was cut at a sonic point.
  bool truncated = false;
  std::optional<double> sonic_low;
  std::optional<double> sonic_high;
  /// Rarefaction branch, gamma != 1: location where chi' = 0.
  std::optional<double> vertex;
};

/// Solutions of (c^2 - chi'^2) chi'' = chi'^2 - c^2.
///
/// Affine: chi'' = -1 through the initial condition, sampled on n uniform
/// nodes of [lo, hi] and truncated to the closed non-parabolic interval around
/// xi0 (sonic points where |chi'| = c are reported). Rarefaction: the
/// parabolic family c^2 = chi'^2, chi' = +c or -c; for gamma != 1 the closed
/// form chi = A + (1-gamma)(xi - vertex)^2 / (2(1+gamma)).
///
/// Throws PreconditionError for an inconsistent rarefaction initial condition,
/// a sonic affine initial condition, or a rarefaction vertex inside [lo, hi].
Profile1D solve_1d(const GasModel& gas, OneDBranch branch, const InitialCondition& ic,
                   double lo, double hi, int n);

/// Profile as a 1D chi field (dims {n, 1}).
ScalarField to_field(const Profile1D& profile);

struct RadialProfile {
  std::vector<double> r;
  std::vector<double> chi;
  std::vector<double> dchi;
  /// Integration stopped early at a sonic degeneracy.
  bool sonic_stop = false;
  std::optional<double> sonic_radius;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

struct RadialOptions {
  double tolerance = 1e-10;
  /// Stop when |c^2 - chi'^2| < sonic_threshold * c^2.
  double sonic_threshold = 1e-8;
  std::size_t max_steps = 2'000'000;
};

/// Radial reduction of the chi equation in d dimensions,
///   c^2 (chi'' + (d-1) chi'/r) - chi'^2 chi'' = chi'^2 - d c^2,
/// integrated with an adaptive Dormand-Prince 5(4) pair and sampled through
/// its continuous extension at the given radii (ascending, >= r0). A regular
/// centre (r0 == 0, chi'(0) == 0) uses the limit chi''(0) = -1. Samples past
/// a sonic stop are omitted.
RadialProfile solve_radial(const GasModel& gas, int d, const InitialCondition& ic,
                           std::span<const double> radii, const RadialOptions& options = {});

/// Uniform r-mesh of n samples on [r0, r1].
RadialProfile solve_radial(const GasModel& gas, int d, const InitialCondition& ic, double r1,
                           int n, const RadialOptions& options = {});

/// chi(|xi - center|) from the radial profile at every grid node (d = 2).
/// Throws PreconditionError if the profile stops before the largest radius.
ScalarField sample_radial(const GasModel& gas, const InitialCondition& ic, const GridSpec& grid,
                          Point center = {0.0, 0.0}, const RadialOptions& options = {});

}  // namespace sspf

#endif  // SSPF_EXACT_HPP_
