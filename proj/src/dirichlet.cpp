#include "conres/dirichlet.hpp"

#include <algorithm>
#include <set>

#include <Eigen/Cholesky>

#include "conres/linalg.hpp"

namespace conres {

void BoundaryData::validate(int n, int d) const {
    if (boundary.empty()) throw EmptyBoundary("boundary set is empty");
    std::set<int> seen;
    for (int b : boundary) {
        if (b < 0 || b >= n) throw InvalidParameter("boundary vertex out of range");
        if (!seen.insert(b).second) throw InvalidParameter("duplicate boundary vertex");
        auto it = values.find(b);
        if (it == values.end())
            throw InvalidParameter("boundary vertex " + std::to_string(b + 1) +
                                   " has no value");
        if (it->second.rows() != d || it->second.cols() != d)
            throw DimensionMismatch("boundary value must be d x d");
    }
}

BlockVector solve_dirichlet(const ConnectionGraph& cg, const BoundaryData& bd) {
    const int n = cg.num_vertices();
    const int d = cg.dim();
    bd.validate(n, d);

    std::vector<char> is_boundary(n, 0);
    for (int b : bd.boundary) is_boundary[b] = 1;
    std::vector<int> interior;
    for (int v = 0; v < n; ++v)
        if (!is_boundary[v]) interior.push_back(v);

    BlockVector u(n, d);
    for (int b : bd.boundary) u.block(b) = bd.values.at(b);
    if (interior.empty()) return u;

    const Matrix L = cg.laplacian();
    auto expand = [d](const std::vector<int>& verts) {
        Eigen::VectorXi idx(verts.size() * d);
        int p = 0;
        for (int v : verts)
            for (int k = 0; k < d; ++k) idx(p++) = v * d + k;
        return idx;
    };
    const Eigen::VectorXi ii = expand(interior);
    std::vector<int> bverts(bd.boundary.begin(), bd.boundary.end());
    std::sort(bverts.begin(), bverts.end());
    const Eigen::VectorXi bi = expand(bverts);

    Matrix phi(bverts.size() * d, d);
    for (std::size_t k = 0; k < bverts.size(); ++k)
        phi.block(k * d, 0, d, d) = bd.values.at(bverts[k]);

    const Matrix rhs = -L(ii, bi) * phi;
    Eigen::LLT<Matrix> llt(L(ii, ii));
    if (llt.info() != Eigen::Success)
        throw ComputationError("interior system is not positive definite");
    const Matrix sol = llt.solve(rhs);
    for (std::size_t k = 0; k < interior.size(); ++k)
        u.block(interior[k]) = sol.block(k * d, 0, d, d);
    return u;
}

double dirichlet_energy(const ConnectionGraph& cg, const BlockVector& f) {
    if (f.num_vertices() != cg.num_vertices() || f.dim() != cg.dim())
        throw DimensionMismatch("dirichlet_energy: BlockVector shape mismatch");
    double e = 0.0;
    for (const Edge& edge : cg.graph().edges()) {
        const Matrix diff = f.block(edge.u) - cg.sigma(edge.u, edge.v) * f.block(edge.v);
        e += edge.w * diff.squaredNorm();
    }
    return 0.5 * e;
}

BlockVector voltage_function(const ConnectionGraph& cg, int i, int j) {
    if (i == j) throw SamePair("voltage_function needs distinct vertices");
    const int d = cg.dim();
    BoundaryData bd;
    bd.boundary = {i, j};
    bd.values[i] = Matrix::Identity(d, d);
    bd.values[j] = Matrix::Zero(d, d);
    return solve_dirichlet(cg, bd);
}

IndexSet vertex_boundary(const WeightedGraph& g, const IndexSet& h) {
    std::vector<char> in_h(g.num_vertices(), 0);
    for (int v : h) in_h[v] = 1;
    std::set<int> out;
    for (int v : h)
        for (const auto& nb : g.neighbors(v))
            if (!in_h[nb.vertex]) out.insert(nb.vertex);
    return IndexSet(out.begin(), out.end());
}

MaxNormReport check_max_norm_principle(const ConnectionGraph& cg,
                                       const BlockVector& f, const IndexSet& h,
                                       double tol) {
    if (h.empty()) throw EmptyInterior("H is empty");
    if (static_cast<int>(h.size()) >= cg.num_vertices())
        throw EmptyBoundary("H must be a proper subset of V");
    const BlockVector lf = apply_laplacian(cg, f);
    double resid = 0.0;
    for (int v : h) resid = std::max(resid, lf.block(v).cwiseAbs().maxCoeff());
    if (resid > tol)
        throw NotHarmonic("function is not harmonic on H (residual " +
                          std::to_string(resid) + ")");

    const IndexSet bnd = vertex_boundary(cg.graph(), h);
    double max_boundary = 0.0;
    for (int v : bnd)
        max_boundary = std::max(max_boundary, linalg::spectral_norm(f.block(v)));
    double max_closure = max_boundary;
    for (int v : h)
        max_closure = std::max(max_closure, linalg::spectral_norm(f.block(v)));
    return {max_closure, max_boundary, resid};
}

} // namespace conres
