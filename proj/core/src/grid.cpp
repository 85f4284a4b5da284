#include "kolmo/grid.hpp"

#include <cmath>
#include <utility>

#include "kolmo/error.hpp"

namespace kolmo {

Grid::Grid(int dim, double half_width, int n_per_axis, BoundaryKind boundary)
    : dim_(dim), half_width_(half_width), n_(n_per_axis), boundary_(boundary) {
  if (dim != 1 && dim != 2) throw InvalidArgument("Grid: only d = 1 or d = 2 is supported");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw InvalidArgument("Grid: half-width L must be positive");
  if (n_per_axis < 3) throw InvalidArgument("Grid: need at least 3 nodes per axis");
  if (n_per_axis % 2 == 0) throw InvalidArgument("Grid: n_per_axis must be odd");
  h_ = 2.0 * half_width / (n_per_axis - 1);
}

Grid build_grid(int dim, double half_width, int n_per_axis, BoundaryKind boundary) {
  return Grid(dim, half_width, n_per_axis, boundary);
}

Point Grid::node(int idx) const {
  const auto mi = multi_index(idx);
  Point x(dim_);
  x(0) = axis_coord(mi[0]);
  if (dim_ == 2) x(1) = axis_coord(mi[1]);
  return x;
}

std::array<int, 2> Grid::multi_index(int idx) const {
  if (dim_ == 1) return {idx, 0};
  return {idx / n_, idx % n_};
}

bool Grid::is_boundary(int idx) const {
  const auto mi = multi_index(idx);
  auto edge = [this](int i) { return i == 0 || i == n_ - 1; };
  return dim_ == 1 ? edge(mi[0]) : (edge(mi[0]) || edge(mi[1]));
}

int Grid::unknown_count() const {
  if (boundary_ == BoundaryKind::kNeumann) return node_count();
  const int ni = n_ - 2;
  return dim_ == 1 ? ni : ni * ni;
}

int Grid::unknown_node(int k) const {
  if (boundary_ == BoundaryKind::kNeumann) return k;
  const int ni = n_ - 2;
  if (dim_ == 1) return k + 1;
  return flat_index(k / ni + 1, k % ni + 1);
}

int Grid::node_unknown(int idx) const {
  if (boundary_ == BoundaryKind::kNeumann) return idx;
  if (is_boundary(idx)) return -1;
  const auto mi = multi_index(idx);
  const int ni = n_ - 2;
  return dim_ == 1 ? mi[0] - 1 : (mi[0] - 1) * ni + (mi[1] - 1);
}

Vec Grid::quadrature_weights() const {
  Vec axis = Vec::Constant(n_, h_);
  axis(0) = axis(n_ - 1) = 0.5 * h_;
  if (dim_ == 1) return axis;
  Vec w(node_count());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) w(flat_index(i, j)) = axis(i) * axis(j);
  return w;
}

std::vector<int> Grid::window_nodes(double r) const {
  std::vector<int> out;
  const double eps = 1e-12 * half_width_;
  for (int idx = 0; idx < node_count(); ++idx) {
    const Point x = node(idx);
    if (x.cwiseAbs().maxCoeff() <= r + eps) out.push_back(idx);
  }
  return out;
}

bool Grid::same_nodes(const Grid& other) const {
  return dim_ == other.dim_ && n_ == other.n_ && half_width_ == other.half_width_;
}

// ---------------------------------------------------------------------------

GridFunction::GridFunction(Grid grid, Mat values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.cols() != grid_.node_count())
    throw InvalidArgument("GridFunction: value columns must equal node count");
  if (values_.rows() < 1) throw InvalidArgument("GridFunction: need >= 1 component");
  if (!values_.allFinite()) throw InvalidArgument("GridFunction: non-finite values");
}

GridFunction GridFunction::zeros(const Grid& grid, int components) {
  return GridFunction(grid, Mat::Zero(components, grid.node_count()));
}

GridFunction GridFunction::constant(const Grid& grid, const Vec& value) {
  Mat v(value.size(), grid.node_count());
  v.colwise() = value;
  return GridFunction(grid, std::move(v));
}

GridFunction GridFunction::sample(const Grid& grid, int components,
                                  const std::function<Vec(const Point&)>& fn) {
  Mat v(components, grid.node_count());
  for (int idx = 0; idx < grid.node_count(); ++idx) {
    const Vec y = fn(grid.node(idx));
    if (y.size() != components)
      throw InvalidArgument("GridFunction::sample: function returned wrong size");
    v.col(idx) = y;
  }
  return GridFunction(grid, std::move(v));
}

Vec GridFunction::to_state() const {
  const int nu = grid_.unknown_count();
  Vec s(components() * nu);
  for (int c = 0; c < components(); ++c)
    for (int k = 0; k < nu; ++k) s(c * nu + k) = values_(c, grid_.unknown_node(k));
  return s;
}

GridFunction GridFunction::from_state(const Grid& grid, int components, const Vec& state) {
  const int nu = grid.unknown_count();
  if (state.size() != components * nu)
    throw InvalidArgument("GridFunction::from_state: state has wrong size");
  Mat v = Mat::Zero(components, grid.node_count());
  for (int c = 0; c < components; ++c)
    for (int k = 0; k < nu; ++k) v(c, grid.unknown_node(k)) = state(c * nu + k);
  return GridFunction(grid, std::move(v));
}

}  // namespace kolmo
