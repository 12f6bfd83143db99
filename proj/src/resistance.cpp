#include "conres/resistance.hpp"

#include <limits>

#include "conres/decompose.hpp"
#include "conres/dirichlet.hpp"
#include "conres/linalg.hpp"
#include "conres/meanpath.hpp"

namespace conres {

double classical_effective_resistance(const WeightedGraph& g, int i, int j) {
    if (i == j) throw SamePair("effective resistance needs distinct vertices");
    const Matrix ldag = linalg::pseudoinverse(g.laplacian());
    Vector e = Vector::Zero(g.num_vertices());
    e(i) = 1.0;
    e(j) = -1.0;
    return e.dot(ldag * e);
}

double chung_connection_resistance(const ConnectionGraph& cg, int i, int j) {
    if (i == j) throw SamePair("connection resistance needs distinct vertices");
    const int n = cg.num_vertices();
    const int d = cg.dim();
    Matrix sig_ij;
    if (cg.graph().has_edge(i, j)) {
        sig_ij = cg.sigma(i, j);
    } else if (is_consistent(cg)) {
        sig_ij = path_signature(cg, i, j);
    } else {
        throw NotAnEdge("pair is not an edge and the signature is inconsistent");
    }
    Matrix m = Matrix::Zero(n * d, d);
    m.block(i * d, 0, d, d) = Matrix::Identity(d, d);
    m.block(j * d, 0, d, d) = -sig_ij;
    const Matrix ldag = linalg::pseudoinverse(cg.laplacian());
    return linalg::spectral_norm(m.transpose() * ldag * m);
}

PoissonSolution poisson_solve(const ConnectionGraph& cg, int i, int j) {
    if (i == j) throw SamePair("poisson_solve needs distinct vertices");
    const int n = cg.num_vertices();
    const int d = cg.dim();
    Matrix source = Matrix::Zero(n * d, d);
    source.block(i * d, 0, d, d) = Matrix::Identity(d, d);
    source.block(j * d, 0, d, d) = -omega0(cg, i, j).value.transpose();
    const Matrix ldag = linalg::pseudoinverse(cg.laplacian());
    return {BlockVector(n, d, ldag * source), i, j, std::move(source)};
}

PairMatrix resistance_matrix(const ConnectionGraph& cg, int i, int j) {
    if (i == j) throw SamePair("resistance_matrix needs distinct vertices");
    const int d = cg.dim();
    const PairMatrix c = conductance_matrix(cg, i, j);
    const Matrix om_ij = omega0(cg, i, j).value;
    const Matrix om_ji = omega0(cg, j, i).value;
    Matrix sources(2 * d, 2 * d);
    sources.topLeftCorner(d, d) = Matrix::Identity(d, d);
    sources.topRightCorner(d, d) = -om_ji.transpose();
    sources.bottomLeftCorner(d, d) = -om_ij.transpose();
    sources.bottomRightCorner(d, d) = Matrix::Identity(d, d);
    return {d, i, j, linalg::pseudoinverse(c.full) * sources};
}

PairMatrix resistance_matrix_via_poisson(const ConnectionGraph& cg, int i,
                                         int j) {
    if (i == j) throw SamePair("resistance_matrix needs distinct vertices");
    const int d = cg.dim();
    const PoissonSolution wij = poisson_solve(cg, i, j);
    const PoissonSolution wji = poisson_solve(cg, j, i);
    Matrix full(2 * d, 2 * d);
    full.topLeftCorner(d, d) = wij.w.block(i);
    full.topRightCorner(d, d) = wji.w.block(i);
    full.bottomLeftCorner(d, d) = wij.w.block(j);
    full.bottomRightCorner(d, d) = wji.w.block(j);
    return {d, i, j, std::move(full)};
}

double scalar_connection_resistance(const ConnectionGraph& cg, int i, int j) {
    if (i == j) throw SamePair("scalar resistance needs distinct vertices");
    const int d = cg.dim();
    const PairMatrix c = conductance_matrix(cg, i, j);
    const Matrix inv_ii = c.ii().inverse();
    const Matrix inv_jj = c.jj().inverse();
    return (inv_ii.trace() + inv_jj.trace()) / (2.0 * d);
}

double scalar_connection_resistance_energy(const ConnectionGraph& cg, int i,
                                           int j) {
    const int d = cg.dim();
    const PoissonSolution wij = poisson_solve(cg, i, j);
    const PoissonSolution wji = poisson_solve(cg, j, i);
    return (dirichlet_energy(cg, wij.w) + dirichlet_energy(cg, wji.w)) / d;
}

DecompositionFormulaReport resistance_decomposition_check(
    const ConnectionGraph& cg, int i, int j) {
    const int d = cg.dim();
    const double r_scalar = scalar_connection_resistance(cg, i, j);
    const DecompositionResult dec = decompose_signature(cg);

    double r_formula = 0.0;
    if (dec.rho > 0)
        r_formula += (static_cast<double>(dec.rho) / d) *
                     classical_effective_resistance(cg.graph(), i, j);
    if (dec.tau) {
        const ConnectionGraph tau_graph(cg.graph(), *dec.tau);
        const PairMatrix ct = conductance_matrix(tau_graph, i, j);
        r_formula += (ct.ii().inverse().trace() + ct.jj().inverse().trace()) /
                     (2.0 * d);
    }
    return {dec.rho, r_scalar, r_formula, std::abs(r_scalar - r_formula)};
}

double triangle_inequality_gap(const ConnectionGraph& cg, int i, int j) {
    const double rij = scalar_connection_resistance(cg, i, j);
    double min_gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k < cg.num_vertices(); ++k) {
        if (k == i || k == j) continue;
        const double gap = scalar_connection_resistance(cg, i, k) +
                           scalar_connection_resistance(cg, k, j) - rij;
        min_gap = std::min(min_gap, gap);
    }
    return min_gap;
}

} // namespace conres
