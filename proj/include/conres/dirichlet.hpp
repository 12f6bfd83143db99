#pragma once

#include <map>

#include "conres/graph.hpp"

namespace conres {

/// Boundary set with prescribed d x d values.
struct BoundaryData {
    IndexSet boundary;
    std::map<int, Matrix> values;

    /// Throws unless the boundary is nonempty, in range, and every boundary
    /// vertex carries a d x d value.
    void validate(int n, int d) const;
};

/// Solve the matrix-valued Dirichlet problem: u equals the boundary values on
/// the boundary set and (L u)(i) = 0 on the interior. The interior system is
/// positive definite; an empty interior returns the boundary data unchanged.
BlockVector solve_dirichlet(const ConnectionGraph& cg, const BoundaryData& bd);

/// Dirichlet energy E(f) = (1/2) Tr(f^T L f), evaluated as the edge sum.
double dirichlet_energy(const ConnectionGraph& cg, const BlockVector& f);

/// Voltage function between i and j: harmonic off {i,j} with value I at i and
/// 0 at j.
BlockVector voltage_function(const ConnectionGraph& cg, int i, int j);

struct MaxNormReport {
    double max_closure;   // max spectral norm over H and its boundary
    double max_boundary;  // max spectral norm over the boundary of H
    double harmonic_residual;
    bool equal(double tol = 1e-9) const {
        return std::abs(max_closure - max_boundary) <= tol;
    }
};

/// Verify that a function harmonic on H attains its maximal spectral norm on
/// the vertex boundary of H. Throws NotHarmonic if (L f) does not vanish on H
/// within tol, EmptyInterior/EmptyBoundary for degenerate H.
MaxNormReport check_max_norm_principle(const ConnectionGraph& cg,
                                       const BlockVector& f, const IndexSet& h,
                                       double tol = 1e-9);

/// Vertex boundary of H: vertices outside H adjacent to H.
IndexSet vertex_boundary(const WeightedGraph& g, const IndexSet& h);

} // namespace conres
