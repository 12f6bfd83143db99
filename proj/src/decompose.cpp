#include "conres/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "conres/linalg.hpp"
#include "conres/meanpath.hpp"

namespace conres {

Signature DecompositionResult::reconstructed(const WeightedGraph& g) const {
    const int dtau = tau ? tau->dim() : 0;
    Signature out(rho + dtau);
    for (const Edge& e : g.edges()) {
        Matrix m = Matrix::Identity(rho + dtau, rho + dtau);
        if (tau) m.bottomRightCorner(dtau, dtau) = tau->get(e.u, e.v);
        out.set(e.u, e.v, m);
    }
    return out;
}

std::vector<Matrix> DecompositionResult::switching_to_reconstructed() const {
    std::vector<Matrix> out;
    out.reserve(switching.size());
    for (const Matrix& f : switching) out.push_back(f.transpose());
    return out;
}

int nullity(const ConnectionGraph& cg) {
    return linalg::kernel_dimension(cg.laplacian());
}

// ============================================================================
// Spanning tree simplification and consistency
// ============================================================================

std::pair<ConnectionGraph, std::vector<Matrix>> spanning_tree_simplify(
    const ConnectionGraph& cg) {
    const int n = cg.num_vertices();
    const int d = cg.dim();
    // BFS from vertex 0; f(child) = f(parent) * sigma_{parent,child}.
    std::vector<Matrix> f(n);
    std::vector<char> visited(n, 0);
    f[0] = Matrix::Identity(d, d);
    visited[0] = 1;
    std::queue<int> q;
    q.push(0);
    while (!q.empty()) {
        const int x = q.front();
        q.pop();
        for (const auto& nb : cg.graph().neighbors(x)) {
            if (visited[nb.vertex]) continue;
            visited[nb.vertex] = 1;
            f[nb.vertex] = f[x] * cg.sigma(x, nb.vertex);
            q.push(nb.vertex);
        }
    }
    return {apply_switching(cg, f), std::move(f)};
}

bool is_consistent(const ConnectionGraph& cg) {
    const auto [simplified, f] = spanning_tree_simplify(cg);
    const int d = cg.dim();
    const Matrix eye = Matrix::Identity(d, d);
    for (const Edge& e : simplified.graph().edges()) {
        const double dev =
            (simplified.sigma(e.u, e.v) - eye).cwiseAbs().maxCoeff();
        if (dev > kOrthTol) return false;
    }
    return true;
}

bool is_absolutely_inconsistent(const ConnectionGraph& cg) {
    const Matrix L = cg.laplacian();
    Eigen::SelfAdjointEigenSolver<Matrix> es(L, Eigen::EigenvaluesOnly);
    const Vector& ev = es.eigenvalues();
    const double thr = linalg::rank_threshold(ev.cwiseAbs().maxCoeff(), L.rows());
    const bool invertible = ev.minCoeff() > thr;

    double min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cg.num_vertices(); ++i) {
        const Matrix gap =
            Matrix::Identity(cg.dim(), cg.dim()) - omega1_loop(cg, i).value;
        Eigen::SelfAdjointEigenSolver<Matrix> ges(gap, Eigen::EigenvaluesOnly);
        min_margin = std::min(min_margin, ges.eigenvalues().minCoeff());
    }
    const bool loops_positive = min_margin > 1e-10;

    if (invertible != loops_positive) {
        std::ostringstream os;
        os << "kernel criterion and loop criterion disagree: min Laplacian "
           << "eigenvalue " << ev.minCoeff() << " (threshold " << thr
           << "), min loop-gap eigenvalue " << min_margin;
        throw CriterionMismatch(os.str());
    }
    return invertible;
}

// ============================================================================
// Decomposition
// ============================================================================

DecompositionResult decompose_signature(const ConnectionGraph& cg) {
    const int n = cg.num_vertices();
    const int d = cg.dim();
    const Matrix kernel = linalg::kernel_basis(cg.laplacian());
    const int rho = static_cast<int>(kernel.cols());

    DecompositionResult out;
    out.rho = rho;
    if (rho == 0) {
        out.switching.assign(n, Matrix::Identity(d, d));
        out.tau = cg.signature();
        return out;
    }

    // Kernel vectors scaled so each vertex block has orthonormal columns.
    const Matrix scaled = kernel * std::sqrt(static_cast<double>(n));
    out.switching.reserve(n);
    for (int v = 0; v < n; ++v) {
        const Matrix block = scaled.block(v * d, 0, d, rho);
        const double dev =
            (block.transpose() * block - Matrix::Identity(rho, rho))
                .cwiseAbs()
                .maxCoeff();
        if (dev > 1e-8) {
            std::ostringstream os;
            os << "kernel blocks at vertex " << v + 1
               << " are not orthonormal (deviation " << dev
               << "); eigenvector mixing across eigenvalues";
            throw KernelDegeneracy(os.str());
        }
        out.switching.push_back(linalg::complete_orthonormal(block));
    }

    if (rho < d) {
        Signature tau(d - rho);
        for (const Edge& e : cg.graph().edges()) {
            const Matrix gu = out.switching[e.u].rightCols(d - rho);
            const Matrix gv = out.switching[e.v].rightCols(d - rho);
            tau.set(e.u, e.v, gu.transpose() * cg.sigma(e.u, e.v) * gv);
        }
        out.tau = std::move(tau);
    }
    return out;
}

// ============================================================================
// Cycle classification
// ============================================================================

std::tuple<int, int, std::vector<double>, Matrix> block_diagonalize_orthogonal(
    const Matrix& h) {
    const int d = static_cast<int>(h.rows());
    const double orth_dev =
        (h.transpose() * h - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (orth_dev > 1e-8)
        throw NotOrthonormalInput("holonomy is not orthogonal");

    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.transpose()));
    const Vector& ev = es.eigenvalues();
    const Matrix& U = es.eigenvectors();

    std::vector<Vector> plus_cols, minus_cols, rot_cols;
    std::vector<double> angles;
    const double cluster_tol = 1e-7;

    int k = 0;
    while (k < d) {
        const double lam = ev(k);
        int kk = k;
        while (kk < d && std::abs(ev(kk) - lam) < cluster_tol) ++kk;
        Matrix basis = U.middleCols(k, kk - k);
        if (std::abs(lam - 1.0) < 1e-8) {
            for (int c = 0; c < basis.cols(); ++c) plus_cols.push_back(basis.col(c));
        } else if (std::abs(lam + 1.0) < 1e-8) {
            for (int c = 0; c < basis.cols(); ++c) minus_cols.push_back(basis.col(c));
        } else {
            // On this eigenspace h satisfies h^2 - 2 lam h + I = 0, so each
            // vector spans an invariant rotation plane with its image.
            const double theta = std::acos(std::clamp(lam, -1.0, 1.0));
            int planes = static_cast<int>(basis.cols()) / 2;
            for (int p = 0; p < planes; ++p) {
                const Vector u1 = basis.col(0).normalized();
                Vector v1 = h * u1 - lam * u1;
                v1.normalize();
                angles.push_back(theta);
                rot_cols.push_back(u1);
                rot_cols.push_back(v1);
                // deflate the plane out of the remaining basis, pivoted MGS
                Matrix rem = basis - u1 * (u1.transpose() * basis) -
                             v1 * (v1.transpose() * basis);
                const int want = static_cast<int>(basis.cols()) - 2;
                Matrix next(d, want);
                std::vector<Vector> work;
                for (int c = 0; c < rem.cols(); ++c) work.push_back(rem.col(c));
                for (int t = 0; t < want; ++t) {
                    std::size_t best = 0;
                    for (std::size_t c = 1; c < work.size(); ++c)
                        if (work[c].norm() > work[best].norm()) best = c;
                    const Vector qv = work[best].normalized();
                    next.col(t) = qv;
                    for (auto& wv : work) wv -= qv * qv.dot(wv);
                }
                basis = next;
            }
        }
        k = kk;
    }

    Matrix P(d, d);
    int col = 0;
    for (const Vector& c : plus_cols) P.col(col++) = c;
    for (const Vector& c : minus_cols) P.col(col++) = c;
    for (const Vector& c : rot_cols) P.col(col++) = c;
    return {static_cast<int>(plus_cols.size()),
            static_cast<int>(minus_cols.size()), std::move(angles), std::move(P)};
}

CycleClassification classify_cycle_signature(const ConnectionGraph& cg) {
    const int n = cg.num_vertices();
    const int d = cg.dim();
    if (static_cast<int>(cg.graph().edges().size()) != n)
        throw NotACycle("a cycle has exactly n edges");
    for (int v = 0; v < n; ++v)
        if (cg.graph().neighbors(v).size() != 2)
            throw NotACycle("every vertex of a cycle has degree 2");

    // Walk around the cycle from vertex 0 (toward its smaller neighbor).
    std::vector<int> order{0};
    int prev = -1, cur = 0;
    for (int step = 0; step < n - 1; ++step) {
        const auto& nbs = cg.graph().neighbors(cur);
        int nxt = (nbs[0].vertex != prev) ? nbs[0].vertex : nbs[1].vertex;
        if (step == 0) nxt = std::min(nbs[0].vertex, nbs[1].vertex);
        order.push_back(nxt);
        prev = cur;
        cur = nxt;
    }

    // Transport along the path part of the cycle; the closing edge then
    // carries the holonomy.
    std::vector<Matrix> f(n);
    f[order[0]] = Matrix::Identity(d, d);
    for (int k = 1; k < n; ++k)
        f[order[k]] = f[order[k - 1]] * cg.sigma(order[k - 1], order[k]);
    const int last = order.back();
    const Matrix holonomy =
        f[last] * cg.sigma(last, order[0]) * f[order[0]].transpose();

    auto [d1, dminus1, angles, P] = block_diagonalize_orthogonal(holonomy);
    CycleClassification out;
    out.d1 = d1;
    out.dminus1 = dminus1;
    out.angles = std::move(angles);
    out.canonical_block = P.transpose() * holonomy * P;
    out.closing_edge = {last, order[0]};
    out.switching.reserve(n);
    for (int v = 0; v < n; ++v) out.switching.push_back(P.transpose() * f[v]);
    return out;
}

} // namespace conres
