#pragma once

#include <Eigen/SparseCore>

#include "kolmo/coefficients.hpp"
#include "kolmo/grid.hpp"

namespace kolmo {

using SparseMat = Eigen::SparseMatrix<double>;

/// Assembled finite-difference operator acting on component-major unknown
/// vectors of a grid (see GridFunction::to_state).
struct DiscreteOperator {
  SparseMat matrix;
  int components = 1;
  Grid grid;

  int unknowns() const { return static_cast<int>(matrix.rows()); }
  /// Applies the operator to a grid function, returning a grid function on
  /// the same grid (eliminated boundary nodes get zero).
  GridFunction apply(const GridFunction& u) const;
};

/// Second-order central differences for Tr(Q D^2) + <b, grad> on every
/// component, plus the node-local coupling C(x). Dirichlet grids eliminate
/// boundary nodes (zero extension); Neumann grids reflect the stencil
/// across the boundary (ghost node u_{-1} = u_{1}), which enforces a zero
/// normal derivative at second order.
DiscreteOperator assemble_system_operator(const CoefficientField& field, const Grid& grid);

/// Same stencil with m = 1 and no coupling.
DiscreteOperator assemble_scalar_operator(const CoefficientField& field, const Grid& grid);

/// Stationary Fokker-Planck operator
///   rho -> sum_ij D_ij(q_ij rho) - sum_i D_i(b_i rho)
/// in flux form. On Dirichlet grids rho vanishes on the boundary; on
/// Neumann grids the zero-flux form is used, which is the transpose of the
/// Neumann generator, so constants in the generator's kernel pair with a
/// discrete stationary mass vector.
DiscreteOperator assemble_adjoint_operator(const CoefficientField& field, const Grid& grid);

}  // namespace kolmo
