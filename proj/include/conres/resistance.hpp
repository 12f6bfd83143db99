#pragma once

#include "conres/conductance.hpp"
#include "conres/graph.hpp"

namespace conres {

/// Classical effective resistance r_ij = (e_i - e_j)^T L^+ (e_i - e_j).
double classical_effective_resistance(const WeightedGraph& g, int i, int j);

/// Edge-based connection resistance ||M^T L^+ M||_2 with M carrying I at i
/// and -sigma_ij at j. Defined for edges; for non-edges only when the
/// signature is consistent (sigma_ij is then the path product).
double chung_connection_resistance(const ConnectionGraph& cg, int i, int j);

/// Minimum-norm solution of the Poisson-type problem with source I at i and
/// -(Omega0_ij)^T at j.
struct PoissonSolution {
    BlockVector w;
    int i;
    int j;
    Matrix source;  // (n*d) x d right-hand side
};

PoissonSolution poisson_solve(const ConnectionGraph& cg, int i, int j);

/// Resistance matrix: C(i,j)^+ [[I, -(Omega0_ji)^T], [-(Omega0_ij)^T, I]].
/// When the conductance matrix is invertible this equals the boundary blocks
/// of the minimum-norm Poisson solutions.
PairMatrix resistance_matrix(const ConnectionGraph& cg, int i, int j);

/// Boundary blocks of the two minimum-norm Poisson solutions, assembled
/// directly. Coincides with resistance_matrix whenever C(i,j) is invertible;
/// in general the two differ by a C-kernel offset per column while
/// C * R reproduces the normalized sources either way.
PairMatrix resistance_matrix_via_poisson(const ConnectionGraph& cg, int i, int j);

/// Scalar connection effective resistance
/// (1/2d) (Tr(C_ii^{-1}) + Tr(C_jj^{-1})).
double scalar_connection_resistance(const ConnectionGraph& cg, int i, int j);

/// The same quantity evaluated as the Dirichlet energy of the Poisson
/// solutions: (1/2d) Tr(W_ij^T L W_ij + W_ji^T L W_ji).
double scalar_connection_resistance_energy(const ConnectionGraph& cg, int i,
                                           int j);

struct DecompositionFormulaReport {
    int rho;
    double r_scalar;    // trace-formula value
    double r_formula;   // (rho/d) r + tau-block traces
    double residual;
    bool pass(double tol = 1e-8) const { return residual <= tol; }
};

/// Check the decomposition formula for the scalar resistance:
/// r^sigma = (rho/d) r + (1/2d) Tr((C^tau_ii)^{-1} + (C^tau_jj)^{-1}).
DecompositionFormulaReport resistance_decomposition_check(
    const ConnectionGraph& cg, int i, int j);

/// Diagnostic: min over intermediate vertices k of
/// r^sigma_ik + r^sigma_kj - r^sigma_ij. Negative values witness a triangle
/// inequality violation; no sign is asserted.
double triangle_inequality_gap(const ConnectionGraph& cg, int i, int j);

} // namespace conres
