#pragma once

#include <optional>

#include "conres/graph.hpp"

namespace conres {

/// Result of splitting a signature into trivial and absolutely inconsistent
/// components. The switching matrices f(i) have the kernel-transport basis in
/// their first rho columns; conjugating edgewise by them,
/// f(i)^T sigma_ij f(j) = I_rho (+) tau_ij. tau is absent when rho = d.
struct DecompositionResult {
    int rho = 0;
    std::vector<Matrix> switching;
    std::optional<Signature> tau;

    /// The block-diagonal signature I_rho (+) tau over the same edges.
    Signature reconstructed(const WeightedGraph& g) const;

    /// The switching map realizing sigma -> reconstructed (vertexwise
    /// transposes of the stored basis matrices).
    std::vector<Matrix> switching_to_reconstructed() const;
};

/// Dimension of the kernel of the connection Laplacian (0 <= rho <= d for a
/// connected graph).
int nullity(const ConnectionGraph& cg);

/// True iff every cycle's signature product is the identity. Decided on a
/// fundamental cycle basis via spanning-tree simplification.
bool is_consistent(const ConnectionGraph& cg);

/// True iff the connection Laplacian is invertible. Cross-checks the kernel
/// criterion against positive definiteness of I - Omega1_i at every vertex;
/// disagreement throws CriterionMismatch with both margins.
bool is_absolutely_inconsistent(const ConnectionGraph& cg);

/// Constructive decomposition: rho kernel directions become trivial
/// one-dimensional components, the rest an absolutely inconsistent tau.
DecompositionResult decompose_signature(const ConnectionGraph& cg);

/// Switch the signature so every edge of a BFS spanning tree (rooted at
/// vertex 0) carries the identity. Returns the simplified graph and the
/// switching map that realizes the equivalence.
std::pair<ConnectionGraph, std::vector<Matrix>> spanning_tree_simplify(
    const ConnectionGraph& cg);

/// Canonical form of a signature on a cycle graph: counts of +1 and -1
/// one-dimensional components and the rotation angles (each normalized to
/// (0, pi)), recovered from the holonomy around the cycle.
struct CycleClassification {
    int d1 = 0;
    int dminus1 = 0;
    std::vector<double> angles;
    std::vector<Matrix> switching;  // map onto the canonical signature
    Matrix canonical_block;         // block-diagonal holonomy form
    IndexSet closing_edge;          // edge carrying canonical_block
};

CycleClassification classify_cycle_signature(const ConnectionGraph& cg);

/// Orthogonal P with P^T h P block diagonal: +1 entries, -1 entries, then
/// 2x2 rotations with angles in (0, pi). h must be orthogonal.
std::tuple<int, int, std::vector<double>, Matrix> block_diagonalize_orthogonal(
    const Matrix& h);

} // namespace conres
