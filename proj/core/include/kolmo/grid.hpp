#pragma once

#include <array>
#include <functional>
#include <vector>

#include "kolmo/types.hpp"

namespace kolmo {

enum class BoundaryKind { kDirichlet, kNeumann };

/// Tensor-product grid on the box [-L, L]^d, d in {1, 2}, with an odd
/// number of nodes per axis so that the origin is a node. Nodes are
/// numbered lexicographically with x1 varying slowest.
///
/// Dirichlet grids carry unknowns on interior nodes only (zero boundary
/// values); Neumann grids carry unknowns on every node.
class Grid {
 public:
  Grid(int dim, double half_width, int n_per_axis, BoundaryKind boundary);

  int dim() const { return dim_; }
  double half_width() const { return half_width_; }
  int n_per_axis() const { return n_; }
  double spacing() const { return h_; }
  BoundaryKind boundary() const { return boundary_; }

  int node_count() const { return dim_ == 1 ? n_ : n_ * n_; }
  double axis_coord(int i) const { return -half_width_ + h_ * i; }
  Point node(int idx) const;

  std::array<int, 2> multi_index(int idx) const;
  int flat_index(int i, int j = 0) const { return dim_ == 1 ? i : i * n_ + j; }
  bool is_boundary(int idx) const;

  /// Number of unknowns per component.
  int unknown_count() const;
  /// Node of unknown k.
  int unknown_node(int k) const;
  /// Unknown index of a node, or -1 for an eliminated boundary node.
  int node_unknown(int idx) const;

  /// Trapezoid weights over all nodes (tensor product in d = 2).
  Vec quadrature_weights() const;

  /// Nodes with every coordinate in [-r, r].
  std::vector<int> window_nodes(double r) const;

  /// Same node set with another boundary kind.
  Grid with_boundary(BoundaryKind kind) const { return Grid(dim_, half_width_, n_, kind); }

  bool same_nodes(const Grid& other) const;

 private:
  int dim_;
  double half_width_;
  int n_;
  double h_;
  BoundaryKind boundary_;
};

/// Throws InvalidArgument for even or too small n, d outside {1, 2}, or
/// non-positive L.
Grid build_grid(int dim, double half_width, int n_per_axis, BoundaryKind boundary);

/// Values of an m-component function on every node of a grid.
class GridFunction {
 public:
  GridFunction(Grid grid, Mat values);

  static GridFunction zeros(const Grid& grid, int components);
  static GridFunction constant(const Grid& grid, const Vec& value);
  static GridFunction sample(const Grid& grid, int components,
                             const std::function<Vec(const Point&)>& fn);

  const Grid& grid() const { return grid_; }
  int components() const { return static_cast<int>(values_.rows()); }
  const Mat& values() const { return values_; }
  Mat& values() { return values_; }
  /// Component i as a row over nodes.
  auto component(int i) const { return values_.row(i); }

  /// Unknown vector in component-major order (component i occupies the
  /// block [i * N, (i + 1) * N)).
  Vec to_state() const;
  /// Inverse of to_state; eliminated boundary nodes are set to zero.
  static GridFunction from_state(const Grid& grid, int components, const Vec& state);

 private:
  Grid grid_;
  Mat values_;
};

}  // namespace kolmo
