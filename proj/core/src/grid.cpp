#include "sspf/grid.hpp"

#include <cmath>
#include <string>

#include "sspf/error.hpp"

namespace sspf {

std::string_view to_string(Edge e) noexcept {
  switch (e) {
    case Edge::Left:
      return "left";
    case Edge::Right:
      return "right";
    case Edge::Bottom:
      return "bottom";
    case Edge::Top:
      return "top";
  }
  return "unknown";
}

std::optional<Edge> parse_edge(std::string_view name) noexcept {
  for (Edge e : kAllEdges) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

GridSpec GridSpec::from_extent(std::array<int, 2> dims, std::array<double, 2> lo,
                               std::array<double, 2> hi) {
  GridSpec g;
  g.dim = 2;
  g.dims = dims;
  g.origin = lo;
  for (int a = 0; a < 2; ++a) {
    if (dims[a] < 2) throw PreconditionError("grid needs at least 2 nodes per axis");
    g.spacing[a] = (hi[a] - lo[a]) / (dims[a] - 1);
  }
  g.validate();
  return g;
}

GridSpec GridSpec::line(int n, double lo, double hi) {
  GridSpec g;
  g.dim = 1;
  g.dims = {n, 1};
  g.origin = {lo, 0.0};
  if (n < 2) throw PreconditionError("grid needs at least 2 nodes");
  g.spacing = {(hi - lo) / (n - 1), 1.0};
  g.validate();
  return g;
}

void GridSpec::validate() const {
  if (dim != 1 && dim != 2) throw PreconditionError("grid dimension must be 1 or 2");
  for (int a = 0; a < dim; ++a) {
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]) || !std::isfinite(origin[a])) {
      throw PreconditionError("grid spacing must be positive and finite on every axis");
    }
    if (dims[a] < 3) {
      throw PreconditionError("grid needs at least 3 nodes on every axis, axis " +
                              std::to_string(a) + " has " + std::to_string(dims[a]));
    }
  }
  if (dim == 1) {
    if (dims[1] != 1) throw PreconditionError("1D grid must have dims[1] == 1");
    if (has_wall(Edge::Bottom) || has_wall(Edge::Top)) {
      throw PreconditionError("1D grid has no bottom/top edges");
    }
  }
}

Point GridSpec::centroid() const noexcept {
  const Point hi = upper();
  return {0.5 * (origin[0] + hi[0]), dim == 2 ? 0.5 * (origin[1] + hi[1]) : 0.0};
}

bool GridSpec::on_edge(Edge e, int i, int j) const noexcept {
  if (dim == 1 && edge_axis(e) == 1) return false;
  const int k = edge_axis(e) == 0 ? i : j;
  const int n = dims[edge_axis(e)];
  return edge_is_low(e) ? k == 0 : k == n - 1;
}

bool GridSpec::on_edge(int i, int j) const noexcept {
  for (Edge e : kAllEdges) {
    if (on_edge(e, i, j)) return true;
  }
  return false;
}

bool GridSpec::on_dirichlet_edge(int i, int j) const noexcept {
  for (Edge e : kAllEdges) {
    if (on_edge(e, i, j) && !has_wall(e)) return true;
  }
  return false;
}

bool same_geometry(const GridSpec& a, const GridSpec& b, double rel_tol) noexcept {
  if (a.dim != b.dim || a.dims != b.dims) return false;
  for (int k = 0; k < a.dim; ++k) {
    const double h = a.spacing[k];
    if (std::abs(a.spacing[k] - b.spacing[k]) > rel_tol * h) return false;
    if (std::abs(a.origin[k] - b.origin[k]) > rel_tol * (h + std::abs(a.origin[k]))) return false;
  }
  return true;
}

}  // namespace sspf
