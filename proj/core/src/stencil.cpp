#include "stencil.hpp"

#include <string>

#include "sspf/error.hpp"

namespace sspf::detail {

void AxisTaps::add(int index, double weight) noexcept {
  for (int k = 0; k < count; ++k) {
    if (taps[k].index == index) {
      taps[k].weight += weight;
      return;
    }
  }
  taps[count++] = {index, weight};
}

namespace {

struct RelTap {
  int offset;
  double weight;
};

constexpr std::array<RelTap, 1> kCentral0{{{0, 1.0}}};
constexpr std::array<RelTap, 2> kCentral1{{{-1, -0.5}, {1, 0.5}}};
constexpr std::array<RelTap, 3> kCentral2{{{-1, 1.0}, {0, -2.0}, {1, 1.0}}};
constexpr std::array<RelTap, 4> kCentral3{{{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}}};

constexpr std::array<RelTap, 3> kForward1{{{0, -1.5}, {1, 2.0}, {2, -0.5}}};
constexpr std::array<RelTap, 4> kForward2{{{0, 2.0}, {1, -5.0}, {2, 4.0}, {3, -1.0}}};
constexpr std::array<RelTap, 5> kForward3{{{0, -2.5}, {1, 9.0}, {2, -12.0}, {3, 7.0}, {4, -1.5}}};

std::span<const RelTap> central(int order) {
  switch (order) {
    case 0:
      return kCentral0;
    case 1:
      return kCentral1;
    case 2:
      return kCentral2;
    default:
      return kCentral3;
  }
}

std::span<const RelTap> forward(int order) {
  switch (order) {
    case 0:
      return kCentral0;
    case 1:
      return kForward1;
    case 2:
      return kForward2;
    default:
      return kForward3;
  }
}

double inv_pow(double h, int order) {
  double r = 1.0;
  for (int k = 0; k < order; ++k) r /= h;
  return r;
}

}  // namespace

bool axis_taps(int order, int k, const AxisBoundary& axis, bool allow_one_sided, AxisTaps& out) {
  out = AxisTaps{};
  const double scale = inv_pow(axis.h, order);
  bool fits = true;
  for (const RelTap& t : central(order)) {
    int idx = k + t.offset;
    if (idx < 0) {
      if (!axis.mirror_low) {
        fits = false;
        break;
      }
      idx = -idx;
    } else if (idx > axis.n - 1) {
      if (!axis.mirror_high) {
        fits = false;
        break;
      }
      idx = 2 * (axis.n - 1) - idx;
    }
    if (idx < 0 || idx > axis.n - 1) {
      fits = false;
      break;
    }
    out.add(idx, t.weight * scale);
  }
  if (fits) return true;
  if (!allow_one_sided) return false;
  const bool fwd = k < axis.n - 1 - k;
  const int width = order + 2;
  if (fwd ? k + width - 1 > axis.n - 1 : k - (width - 1) < 0) return false;
  out = one_sided_taps(order, k, axis.n, axis.h, fwd);
  return true;
}

AxisTaps one_sided_taps(int order, int k, int n, double h, bool fwd) {
  AxisTaps out;
  const double scale = inv_pow(h, order);
  const double sign = (!fwd && (order % 2 == 1)) ? -1.0 : 1.0;
  for (const RelTap& t : forward(order)) {
    const int idx = fwd ? k + t.offset : k - t.offset;
    if (idx < 0 || idx > n - 1) {
      throw PreconditionError("one-sided stencil of order " + std::to_string(order) +
                              " needs more nodes along the axis");
    }
    out.add(idx, sign * t.weight * scale);
  }
  return out;
}

AxisBoundary axis_boundary(const GridSpec& grid, int axis) noexcept {
  AxisBoundary b;
  b.n = grid.dims[axis];
  b.h = grid.spacing[axis];
  b.mirror_low = grid.has_wall(axis == 0 ? Edge::Left : Edge::Bottom);
  b.mirror_high = grid.has_wall(axis == 0 ? Edge::Right : Edge::Top);
  return b;
}

double apply(std::span<const double> values, const GridSpec& grid, const AxisTaps& t0,
             const AxisTaps& t1) noexcept {
  double sum = 0.0;
  for (const Tap& a : t0.view()) {
    for (const Tap& b : t1.view()) {
      sum += a.weight * b.weight * values[grid.index(a.index, b.index)];
    }
  }
  return sum;
}

namespace {

AxisTaps taps_or_throw(int order, int k, const AxisBoundary& axis, bool allow_one_sided,
                       const GridSpec& grid, NodeIndex node) {
  AxisTaps t;
  if (!axis_taps(order, k, axis, allow_one_sided, t)) {
    throw PreconditionError("derivative stencil does not fit at node (" + std::to_string(node.i) +
                                "," + std::to_string(node.j) + ")",
                            grid.index(node));
  }
  return t;
}

}  // namespace

double derivative(std::span<const double> values, const GridSpec& grid, NodeIndex node,
                  std::array<int, 2> orders, bool allow_one_sided) {
  const AxisTaps t0 = taps_or_throw(orders[0], node.i, axis_boundary(grid, 0), allow_one_sided,
                                    grid, node);
  AxisTaps t1;
  if (grid.dim == 2) {
    t1 = taps_or_throw(orders[1], node.j, axis_boundary(grid, 1), allow_one_sided, grid, node);
  } else {
    t1.add(0, orders[1] == 0 ? 1.0 : 0.0);
  }
  return apply(values, grid, t0, t1);
}

NodeDerivatives node_derivs(std::span<const double> values, const GridSpec& grid, NodeIndex node,
                            bool allow_one_sided) {
  NodeDerivatives d;
  const AxisBoundary b0 = axis_boundary(grid, 0);
  std::array<AxisTaps, 3> x{};
  for (int o = 0; o < 3; ++o) x[o] = taps_or_throw(o, node.i, b0, allow_one_sided, grid, node);
  if (grid.dim == 1) {
    AxisTaps unit;
    unit.add(0, 1.0);
    d.grad[0] = apply(values, grid, x[1], unit);
    d.hess[0][0] = apply(values, grid, x[2], unit);
    return d;
  }
  const AxisBoundary b1 = axis_boundary(grid, 1);
  std::array<AxisTaps, 3> y{};
  for (int o = 0; o < 3; ++o) y[o] = taps_or_throw(o, node.j, b1, allow_one_sided, grid, node);
  d.grad[0] = apply(values, grid, x[1], y[0]);
  d.grad[1] = apply(values, grid, x[0], y[1]);
  d.hess[0][0] = apply(values, grid, x[2], y[0]);
  d.hess[1][1] = apply(values, grid, x[0], y[2]);
  d.hess[0][1] = d.hess[1][0] = apply(values, grid, x[1], y[1]);
  return d;
}

}  // namespace sspf::detail
