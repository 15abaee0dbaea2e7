#ifndef SSPF_SRC_STENCIL_HPP_
#define SSPF_SRC_STENCIL_HPP_

#include <array>
#include <span>

#include "sspf/field.hpp"
#include "sspf/grid.hpp"

namespace sspf::detail {

struct Tap {
  int index = 0;
  double weight = 0.0;
};

/// Up to five taps along one axis.
struct AxisTaps {
  std::array<Tap, 5> taps{};
  int count = 0;

  void add(int index, double weight) noexcept;
  std::span<const Tap> view() const noexcept { return {taps.data(), static_cast<std::size_t>(count)}; }
};

struct AxisBoundary {
  int n = 0;
  double h = 1.0;
  bool mirror_low = false;
  bool mirror_high = false;
};

/// Taps of a derivative of order 0..3 at position k. Central stencils
/// (ghosts mirrored at walls) when they fit; otherwise second-order one-sided
/// stencils if allowed. Returns false if nothing fits.
bool axis_taps(int order, int k, const AxisBoundary& axis, bool allow_one_sided, AxisTaps& out);

/// One-sided taps pointing into the grid from an edge node, ignoring mirror
/// flags. `forward` selects increasing indices.
AxisTaps one_sided_taps(int order, int k, int n, double h, bool forward);

AxisBoundary axis_boundary(const GridSpec& grid, int axis) noexcept;

/// sum_a sum_b w_a w_b f(i_a, j_b).
double apply(std::span<const double> values, const GridSpec& grid, const AxisTaps& t0,
             const AxisTaps& t1) noexcept;

/// Derivative of the given multi-order at a node. Throws PreconditionError if
/// the stencil does not fit under the policy.
double derivative(std::span<const double> values, const GridSpec& grid, NodeIndex node,
                  std::array<int, 2> orders, bool allow_one_sided);

/// Gradient and Hessian in one call.
NodeDerivatives node_derivs(std::span<const double> values, const GridSpec& grid, NodeIndex node,
                            bool allow_one_sided);

}  // namespace sspf::detail

#endif  // SSPF_SRC_STENCIL_HPP_
