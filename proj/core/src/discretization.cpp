#include "kolmo/discretization.hpp"

#include <vector>

#include "kolmo/error.hpp"

namespace kolmo {

namespace {

struct StencilEntry {
  int di;
  int dj;
  double w;
};

// Central-difference stencil of Tr(Q D^2) + <b, grad> at one node.
std::vector<StencilEntry> generator_stencil(const Mat& Q, const Vec& b, int d, double h) {
  const double h2 = h * h;
  std::vector<StencilEntry> s;
  if (d == 1) {
    s.push_back({-1, 0, Q(0, 0) / h2 - b(0) / (2.0 * h)});
    s.push_back({0, 0, -2.0 * Q(0, 0) / h2});
    s.push_back({1, 0, Q(0, 0) / h2 + b(0) / (2.0 * h)});
    return s;
  }
  s.push_back({-1, 0, Q(0, 0) / h2 - b(0) / (2.0 * h)});
  s.push_back({1, 0, Q(0, 0) / h2 + b(0) / (2.0 * h)});
  s.push_back({0, -1, Q(1, 1) / h2 - b(1) / (2.0 * h)});
  s.push_back({0, 1, Q(1, 1) / h2 + b(1) / (2.0 * h)});
  s.push_back({0, 0, -2.0 * (Q(0, 0) + Q(1, 1)) / h2});
  const double cross = 2.0 * Q(0, 1) / (4.0 * h2);
  if (cross != 0.0) {
    s.push_back({1, 1, cross});
    s.push_back({1, -1, -cross});
    s.push_back({-1, 1, -cross});
    s.push_back({-1, -1, cross});
  }
  return s;
}

int reflect(int i, int n) {
  if (i < 0) return -i;
  if (i > n - 1) return 2 * (n - 1) - i;
  return i;
}

CoefficientValues values_at(const CoefficientField& field, const Point& x) {
  try {
    return field.evaluate(x);
  } catch (const Error& e) {
    throw NumericalError(std::string("coefficient evaluation failed at node (") +
                         std::to_string(x(0)) + (x.size() > 1 ? ", " + std::to_string(x(1)) : "") +
                         "): " + e.what());
  }
}

// Neighbor of node (i, j) at offset (di, dj) in unknown numbering, or -1 if
// it is an eliminated Dirichlet boundary node.
int neighbor_unknown(const Grid& g, int i, int j, int di, int dj) {
  const int n = g.n_per_axis();
  int ii = i + di;
  int jj = g.dim() == 2 ? j + dj : 0;
  if (g.boundary() == BoundaryKind::kNeumann) {
    ii = reflect(ii, n);
    if (g.dim() == 2) jj = reflect(jj, n);
  } else if (ii < 0 || ii > n - 1 || jj < 0 || jj > n - 1) {
    return -1;  // never happens for interior rows with a 3x3 stencil
  }
  return g.node_unknown(g.flat_index(ii, jj));
}

using Triplets = std::vector<Eigen::Triplet<double>>;

// Scalar generator rows for every unknown; `offset` shifts both row and
// column (component block placement).
void add_generator(const CoefficientField& field, const Grid& g, int row_offset, int col_offset,
                   Triplets& out, std::vector<CoefficientValues>* cache) {
  const int nu = g.unknown_count();
  for (int k = 0; k < nu; ++k) {
    const int node = g.unknown_node(k);
    const auto mi = g.multi_index(node);
    CoefficientValues v;
    if (cache && static_cast<int>(cache->size()) > k) {
      v = (*cache)[k];
    } else {
      v = values_at(field, g.node(node));
      if (cache) cache->push_back(v);
    }
    for (const auto& e : generator_stencil(v.Q, v.b, g.dim(), g.spacing())) {
      const int col = neighbor_unknown(g, mi[0], mi[1], e.di, e.dj);
      if (col < 0) continue;
      out.emplace_back(row_offset + k, col_offset + col, e.w);
    }
  }
}

}  // namespace

GridFunction DiscreteOperator::apply(const GridFunction& u) const {
  if (u.components() != components || !u.grid().same_nodes(grid))
    throw InvalidArgument("DiscreteOperator::apply: grid or component mismatch");
  const Vec out = matrix * u.to_state();
  return GridFunction::from_state(grid, components, out);
}

DiscreteOperator assemble_system_operator(const CoefficientField& field, const Grid& grid) {
  if (field.dim_d() != grid.dim())
    throw InvalidArgument("assemble_system_operator: field and grid dimensions differ");
  const int m = field.dim_m();
  const int nu = grid.unknown_count();
  Triplets trip;
  std::vector<CoefficientValues> cache;
  cache.reserve(nu);
  for (int c = 0; c < m; ++c) add_generator(field, grid, c * nu, c * nu, trip, &cache);
  for (int k = 0; k < nu; ++k) {
    const Mat& C = cache[k].C;
    for (int a = 0; a < m; ++a)
      for (int bb = 0; bb < m; ++bb)
        if (C(a, bb) != 0.0) trip.emplace_back(a * nu + k, bb * nu + k, C(a, bb));
  }
  DiscreteOperator op{SparseMat(m * nu, m * nu), m, grid};
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  op.matrix.makeCompressed();
  return op;
}

DiscreteOperator assemble_scalar_operator(const CoefficientField& field, const Grid& grid) {
  if (field.dim_d() != grid.dim())
    throw InvalidArgument("assemble_scalar_operator: field and grid dimensions differ");
  const int nu = grid.unknown_count();
  Triplets trip;
  add_generator(field, grid, 0, 0, trip, nullptr);
  DiscreteOperator op{SparseMat(nu, nu), 1, grid};
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  op.matrix.makeCompressed();
  return op;
}

DiscreteOperator assemble_adjoint_operator(const CoefficientField& field, const Grid& grid) {
  if (field.dim_d() != grid.dim())
    throw InvalidArgument("assemble_adjoint_operator: field and grid dimensions differ");
  const int nu = grid.unknown_count();
  DiscreteOperator op{SparseMat(nu, nu), 1, grid};
  if (grid.boundary() == BoundaryKind::kNeumann) {
    const DiscreteOperator gen = assemble_scalar_operator(field, grid);
    op.matrix = gen.matrix.transpose();
    op.matrix.makeCompressed();
    return op;
  }
  // Flux form: the row of node k collects, from each neighbor j = k + delta,
  // the generator weight that node j assigns to offset -delta with the
  // coefficients frozen at node j.
  Triplets trip;
  for (int k = 0; k < nu; ++k) {
    const int node = grid.unknown_node(k);
    const auto mi = grid.multi_index(node);
    const int span = grid.dim() == 2 ? 1 : 0;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -span; dj <= span; ++dj) {
        const int col = neighbor_unknown(grid, mi[0], mi[1], di, dj);
        if (col < 0) continue;
        const int nb_node = grid.unknown_node(col);
        const CoefficientValues v = values_at(field, grid.node(nb_node));
        for (const auto& e : generator_stencil(v.Q, v.b, grid.dim(), grid.spacing()))
          if (e.di == -di && e.dj == -dj) trip.emplace_back(k, col, e.w);
      }
  }
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  op.matrix.makeCompressed();
  return op;
}

}  // namespace kolmo
