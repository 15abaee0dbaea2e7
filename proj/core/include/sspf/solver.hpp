#ifndef SSPF_SOLVER_HPP_
#define SSPF_SOLVER_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sspf/field.hpp"
#include "sspf/gas.hpp"
#include "sspf/grid.hpp"

namespace sspf {

struct SolverConfig {
  int max_newton_iters = 50;
  /// Absolute max-norm target; default 1e-10 (1 + max c^2 estimate).
  std::optional<double> residual_tol;
  double backtrack = 0.5;
  double min_step = 0x1p-20;
  int picard_warmup_iters = 5;
  /// Lower clamp for c^2 during iteration; default 1e-8 * (max c^2 estimate).
  std::optional<double> c2_floor;
  double L_guard = 0.999999;

  void validate() const;
};

enum class StepKind { Picard, Newton };

struct IterationRecord {
  StepKind kind = StepKind::Newton;
  double step_length = 0.0;
  double residual = 0.0;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  /// residual_history[0] is the initial residual; one entry per iteration after.
  std::vector<double> residual_history;
  std::vector<IterationRecord> steps;
  double residual_tol = 0.0;
  double c2_floor = 0.0;
  double max_interior_L = 0.0;
  /// Nodes clamped at the c^2 floor in the final iterate.
  std::size_t clamped_nodes = 0;
  /// Nodes with L >= L_guard in the final iterate.
  std::size_t guard_nodes = 0;
  /// Number of line searches shortened by the ellipticity guard.
  std::size_t guard_activations = 0;
  bool uniformly_elliptic = true;
  /// max |one-sided chi_n| on wall edges, when walls are present.
  std::optional<double> wall_slip_norm;
  std::string message;
};

struct SolveResult {
  ScalarField solution;
  SolveReport report;
};

/// Coons blend of the boundary data in psi (psi is affine for uniform flows)
/// converted back to chi. Wall edges, which carry no data, are filled by
/// linear interpolation between their end corners.
ScalarField default_initial_guess(const GridSpec& grid, const ScalarField& boundary);

/// Newton solve of the chi equation on a rectangle, Dirichlet data on
/// non-wall edges and mirror ghosts on wall edges. `boundary` must live on a
/// grid with the same geometry; only its Dirichlet edge values are read.
///
/// Throws DegenerateStateError if more than 1% of the unknowns sit at the c^2
/// floor for three consecutive iterations. Non-convergence is reported, not
/// thrown; the best iterate is returned.
SolveResult solve_dirichlet(const GridSpec& grid, const ScalarField& boundary,
                            const GasModel& gas, const SolverConfig& config = {},
                            const std::optional<ScalarField>& initial_guess = std::nullopt);

}  // namespace sspf

#endif  // SSPF_SOLVER_HPP_
