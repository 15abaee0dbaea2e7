#ifndef SSPF_GRID_HPP_
#define SSPF_GRID_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace sspf {

/// Axis-aligned grid edges. Left/Right bound axis 0, Bottom/Top bound axis 1.
enum class Edge { Left = 0, Right = 1, Bottom = 2, Top = 3 };

inline constexpr std::array<Edge, 4> kAllEdges{Edge::Left, Edge::Right, Edge::Bottom, Edge::Top};

constexpr int edge_axis(Edge e) noexcept { return e == Edge::Left || e == Edge::Right ? 0 : 1; }
constexpr bool edge_is_low(Edge e) noexcept { return e == Edge::Left || e == Edge::Bottom; }

std::string_view to_string(Edge e) noexcept;
std::optional<Edge> parse_edge(std::string_view name) noexcept;

using Point = std::array<double, 2>;

struct NodeIndex {
  int i = 0;
  int j = 0;
  friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

/// Uniform Cartesian node grid in similarity coordinates. For dim == 1 only
/// axis 0 is used and dims[1] == 1. Edges flagged in `walls` carry the slip
/// condition; every other edge is a Dirichlet edge.
struct GridSpec {
  int dim = 2;
  Point origin{0.0, 0.0};
  Point spacing{1.0, 1.0};
  std::array<int, 2> dims{3, 3};
  std::array<bool, 4> walls{false, false, false, false};

  static GridSpec from_extent(std::array<int, 2> dims, std::array<double, 2> lo,
                              std::array<double, 2> hi);
  static GridSpec line(int n, double lo, double hi);

  /// Throws PreconditionError on h <= 0, fewer than 3 nodes on an axis, or a
  /// wall on a Bottom/Top edge of a 1D grid.
  void validate() const;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]);
  }
  std::size_t index(int i, int j = 0) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(dims[1]) +
           static_cast<std::size_t>(j);
  }
  std::size_t index(NodeIndex n) const noexcept { return index(n.i, n.j); }
  NodeIndex node(std::size_t flat) const noexcept {
    return {static_cast<int>(flat / static_cast<std::size_t>(dims[1])),
            static_cast<int>(flat % static_cast<std::size_t>(dims[1]))};
  }

  double coord(int axis, int k) const noexcept { return origin[axis] + k * spacing[axis]; }
  Point xi(int i, int j = 0) const noexcept {
    return {coord(0, i), dim == 2 ? coord(1, j) : 0.0};
  }
  Point xi(NodeIndex n) const noexcept { return xi(n.i, n.j); }
  Point upper() const noexcept {
    return {coord(0, dims[0] - 1), dim == 2 ? coord(1, dims[1] - 1) : 0.0};
  }
  Point centroid() const noexcept;

  bool has_wall(Edge e) const noexcept { return walls[static_cast<int>(e)]; }
  bool any_wall() const noexcept { return walls[0] || walls[1] || walls[2] || walls[3]; }

  /// True when the node lies on an edge of the grid (wall or not).
  bool on_edge(int i, int j = 0) const noexcept;
  /// True when the node lies on the given edge.
  bool on_edge(Edge e, int i, int j = 0) const noexcept;
  /// True when the node lies on at least one non-wall edge. Such nodes carry
  /// Dirichlet data; every other node is an unknown of the discrete problem.
  bool on_dirichlet_edge(int i, int j = 0) const noexcept;
  bool active(int i, int j = 0) const noexcept { return !on_dirichlet_edge(i, j); }

  double max_spacing() const noexcept {
    return dim == 2 ? std::max(spacing[0], spacing[1]) : spacing[0];
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Same geometry (dim, origin, spacing, dims) ignoring wall flags.
bool same_geometry(const GridSpec& a, const GridSpec& b, double rel_tol = 1e-12) noexcept;

}  // namespace sspf

#endif  // SSPF_GRID_HPP_
