#pragma once

#include "conres/graph.hpp"

namespace conres {

/// 2d x 2d matrix attached to an ordered vertex pair, with named d x d
/// blocks. Block order is (i first, j second) regardless of numeric order.
struct PairMatrix {
    int d;
    int i;
    int j;
    Matrix full;  // 2d x 2d

    Matrix ii() const { return full.topLeftCorner(d, d); }
    Matrix ij() const { return full.topRightCorner(d, d); }
    Matrix ji() const { return full.bottomLeftCorner(d, d); }
    Matrix jj() const { return full.bottomRightCorner(d, d); }
};

/// Connection conductance matrix: the Schur complement of the connection
/// Laplacian onto the blocks of i and j.
PairMatrix conductance_matrix(const ConnectionGraph& cg, int i, int j);

/// Assemble the conductance matrix from the classical effective conductance,
/// the degrees, and conditioned mean path signatures (the escape-probability
/// block formulas). Agrees with conductance_matrix; the two routes share no
/// linear solve.
PairMatrix conductance_via_escape(const ConnectionGraph& cg, int i, int j);

/// Conductance of a parallel combination: the sum of the branch conductance
/// matrices. Each input must be a path graph whose endpoints are its first
/// and last vertices; the result equals the conductance matrix of the graph
/// obtained by gluing the branches at their endpoints.
PairMatrix parallel_sum(const std::vector<ConnectionGraph>& lines);

struct SchurIdentityReport {
    double residual_i;  // C/C_jj vs deg(i)(I - Omega1_i)
    double residual_j;  // C/C_ii vs deg(j)(I - Omega1_j)
    bool pass(double tol = 1e-9) const {
        return residual_i <= tol && residual_j <= tol;
    }
};

/// Check both Schur-complement block identities of the conductance matrix
/// against independently computed mean loop signatures.
SchurIdentityReport schur_block_identities(const ConnectionGraph& cg, int i,
                                           int j);

/// Classical effective conductance c_ij = deg(i) * P^i[T_j^1 < T_i^1].
double classical_effective_conductance(const WeightedGraph& g, int i, int j);

} // namespace conres
