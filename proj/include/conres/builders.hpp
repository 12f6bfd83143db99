#pragma once

#include "conres/graph.hpp"

namespace conres {
namespace builders {

/// 2x2 rotation by theta (radians).
Matrix rotation2d(double theta);

/// 3x3 block rotation: identity on the first axis, rotation2d(theta) in the
/// lower-right 2x2 block.
Matrix rotation3d(double theta);

/// n-cycle with unit weights and the elementary 2-dimensional cycle
/// signature: rotation2d(theta) on edge (1,2), identity elsewhere. n >= 3.
ConnectionGraph cycle(int n, double theta);

/// Path graph 1-2-...-(k+1) with the given edge weights and signatures.
/// All signatures must share one dimension.
ConnectionGraph line(const std::vector<double>& weights,
                     const std::vector<Matrix>& signatures);

/// One branch of a parallel combination: edge weights and signatures along
/// an internally disjoint path between the two shared endpoints.
struct LineSpec {
    std::vector<double> weights;
    std::vector<Matrix> signatures;
};

/// Glue the given paths at their endpoints: vertex 1 and vertex 2 are the
/// shared endpoints, internal vertices are numbered consecutively per line.
/// At most one branch may be a single edge (multi-edges are rejected).
ConnectionGraph parallel_lines(const std::vector<LineSpec>& lines);

/// Two K_m cliques bridged by the path 1-2-3: vertex 1 sits in the first
/// clique, vertex 3 in the second, vertex 2 between them. Edges (1,2) and
/// (2,3) carry rotation3d(theta12) and rotation3d(theta23); every other edge
/// has unit weight and the 3x3 identity. m >= 1, default 4.
ConnectionGraph dumbbell(int m, double theta12, double theta23);

/// 4 vertices, unit-weight edges (1,2),(1,3),(2,3),(2,4),(3,4), with
/// rotation3d(theta) on the bridge edge (2,4) and identity elsewhere.
ConnectionGraph wheatstone(double theta);

/// Same Wheatstone topology with the rotation placed on an arbitrary edge.
ConnectionGraph wheatstone_on_edge(double theta, int u, int v);

} // namespace builders
} // namespace conres
