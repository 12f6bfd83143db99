#include "conres/conductance.hpp"

#include <Eigen/Cholesky>

#include "conres/linalg.hpp"
#include "conres/meanpath.hpp"

namespace conres {

PairMatrix conductance_matrix(const ConnectionGraph& cg, int i, int j) {
    if (i == j) throw SamePair("conductance_matrix needs distinct vertices");
    const int n = cg.num_vertices();
    const int d = cg.dim();
    const Matrix L = cg.laplacian();

    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
        if (v != i && v != j) rest.push_back(v);

    auto expand = [d](const std::vector<int>& verts) {
        Eigen::VectorXi idx(verts.size() * d);
        int p = 0;
        for (int v : verts)
            for (int k = 0; k < d; ++k) idx(p++) = v * d + k;
        return idx;
    };
    const Eigen::VectorXi pi = expand({i, j});
    Matrix full = L(pi, pi);
    if (!rest.empty()) {
        const Eigen::VectorXi ri = expand(rest);
        const Matrix B = L(pi, ri);
        Eigen::LLT<Matrix> llt(L(ri, ri));
        if (llt.info() != Eigen::Success)
            throw ComputationError("eliminated block is not positive definite");
        full -= B * llt.solve(B.transpose());
    }
    full = 0.5 * (full + full.transpose().eval());
    return {d, i, j, std::move(full)};
}

double classical_effective_conductance(const WeightedGraph& g, int i, int j) {
    return g.degree(i) * escape_probability(g, i, j);
}

PairMatrix conductance_via_escape(const ConnectionGraph& cg, int i, int j) {
    if (i == j) throw SamePair("conductance_via_escape needs distinct vertices");
    const int d = cg.dim();
    const Matrix I = Matrix::Identity(d, d);
    const double c = classical_effective_conductance(cg.graph(), i, j);
    const double deg_i = cg.degree(i);
    const double deg_j = cg.degree(j);

    // Loop terms carry coefficient deg - c; skip them when that vanishes
    // (every excursion escapes, the conditioned loop is empty).
    Matrix loop_i = Matrix::Zero(d, d);
    if (deg_i - c > kProbFloor * deg_i)
        loop_i = (deg_i - c) * (I - omega1_conditioned_loop(cg, i, j).value);
    Matrix loop_j = Matrix::Zero(d, d);
    if (deg_j - c > kProbFloor * deg_j)
        loop_j = (deg_j - c) * (I - omega1_conditioned_loop(cg, j, i).value);

    const Matrix esc_ij = omega1_conditioned_escape(cg, i, j).value;
    const Matrix esc_ji = omega1_conditioned_escape(cg, j, i).value;

    Matrix full(2 * d, 2 * d);
    full.topLeftCorner(d, d) = c * I + loop_i;
    full.bottomRightCorner(d, d) = c * I + loop_j;
    full.topRightCorner(d, d) = -c * I + c * (I - esc_ij);
    full.bottomLeftCorner(d, d) = -c * I + c * (I - esc_ji);
    return {d, i, j, std::move(full)};
}

PairMatrix parallel_sum(const std::vector<ConnectionGraph>& lines) {
    if (lines.empty()) throw InvalidParameter("parallel_sum needs at least one line");
    const int d = lines.front().dim();
    Matrix sum = Matrix::Zero(2 * d, 2 * d);
    for (const ConnectionGraph& line : lines) {
        if (line.dim() != d)
            throw DimensionMismatch("parallel branches must share a dimension");
        const int n = line.num_vertices();
        // must be the path 0-1-...-(n-1): n-1 edges, consecutive
        if (static_cast<int>(line.graph().edges().size()) != n - 1)
            throw NotInternallyDisjoint("branch is not a simple path");
        for (int v = 0; v + 1 < n; ++v)
            if (!line.graph().has_edge(v, v + 1))
                throw NotInternallyDisjoint("branch is not a consecutive path");
        sum += conductance_matrix(line, 0, n - 1).full;
    }
    return {d, 0, 1, std::move(sum)};
}

SchurIdentityReport schur_block_identities(const ConnectionGraph& cg, int i,
                                           int j) {
    const int d = cg.dim();
    const PairMatrix c = conductance_matrix(cg, i, j);
    const Matrix I = Matrix::Identity(d, d);

    const Matrix schur_i = c.ii() - c.ij() * c.jj().llt().solve(c.ji());
    const Matrix schur_j = c.jj() - c.ji() * c.ii().llt().solve(c.ij());
    const Matrix rhs_i = cg.degree(i) * (I - omega1_loop(cg, i).value);
    const Matrix rhs_j = cg.degree(j) * (I - omega1_loop(cg, j).value);

    return {(schur_i - rhs_i).cwiseAbs().maxCoeff(),
            (schur_j - rhs_j).cwiseAbs().maxCoeff()};
}

} // namespace conres
