#include "conres/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace conres {
namespace linalg {

double rank_threshold(double max_abs_eig, Eigen::Index dim, double rank_tol) {
    const double per_dim = rank_tol < 0.0 ? kRankTolPerDim : rank_tol;
    return per_dim * static_cast<double>(dim) * max_abs_eig;
}

Matrix pseudoinverse(const Matrix& m, double rank_tol) {
    const Matrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    const Vector& ev = es.eigenvalues();
    const double thr = rank_threshold(ev.cwiseAbs().maxCoeff(), m.rows(), rank_tol);
    Vector inv = Vector::Zero(ev.size());
    for (Eigen::Index k = 0; k < ev.size(); ++k)
        if (std::abs(ev(k)) > thr) inv(k) = 1.0 / ev(k);
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Matrix schur_complement(const Matrix& m, const IndexSet& elim, int d,
                        bool use_pseudo) {
    const Eigen::Index nblocks = m.rows() / d;
    std::vector<char> is_elim(nblocks, 0);
    for (int b : elim) {
        if (b < 0 || b >= nblocks) throw InvalidParameter("block index out of range");
        is_elim[b] = 1;
    }
    std::vector<int> keep;
    for (Eigen::Index b = 0; b < nblocks; ++b)
        if (!is_elim[b]) keep.push_back(static_cast<int>(b));

    auto expand = [d](const std::vector<int>& blocks) {
        Eigen::VectorXi idx(blocks.size() * d);
        int p = 0;
        for (int b : blocks)
            for (int k = 0; k < d; ++k) idx(p++) = b * d + k;
        return idx;
    };
    const Eigen::VectorXi ki = expand(keep);
    const Matrix A = m(ki, ki);
    if (elim.empty()) return A;

    std::vector<int> es(elim.begin(), elim.end());
    const Eigen::VectorXi ei = expand(es);
    const Matrix B = m(ki, ei);
    const Matrix D = 0.5 * (m(ei, ei) + m(ei, ei).transpose().eval());

    Eigen::SelfAdjointEigenSolver<Matrix> dec(D);
    const Vector& ev = dec.eigenvalues();
    const double thr = rank_threshold(ev.cwiseAbs().maxCoeff(), D.rows(), -1.0);
    if (!use_pseudo && ev.cwiseAbs().minCoeff() <= thr)
        throw SingularBlock("eliminated block is numerically singular");
    Vector inv = Vector::Zero(ev.size());
    for (Eigen::Index k = 0; k < ev.size(); ++k)
        if (std::abs(ev(k)) > thr) inv(k) = 1.0 / ev(k);
    const Matrix Dsolve =
        dec.eigenvectors() * inv.asDiagonal() * (dec.eigenvectors().transpose() * B.transpose());
    return A - B * Dsolve;
}

Matrix kernel_basis(const Matrix& m, double tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
    const Vector& ev = es.eigenvalues();
    const double maxabs = ev.cwiseAbs().maxCoeff();
    if (maxabs == 0.0) return Matrix::Identity(m.rows(), m.cols());
    const double thr = rank_threshold(maxabs, m.rows(), tol);
    int rho = 0;
    while (rho < ev.size() && std::abs(ev(rho)) <= thr) ++rho;
    return es.eigenvectors().leftCols(rho);
}

int kernel_dimension(const Matrix& m, double tol) {
    return static_cast<int>(kernel_basis(m, tol).cols());
}

Matrix complete_orthonormal(const Matrix& partial) {
    const Eigen::Index d = partial.rows();
    const Eigen::Index rho = partial.cols();
    if (rho > d) throw NotOrthonormalInput("more columns than rows");
    if (rho == 0) return Matrix::Identity(d, d);
    const double dev =
        (partial.transpose() * partial - Matrix::Identity(rho, rho)).cwiseAbs().maxCoeff();
    if (dev > 1e-8)
        throw NotOrthonormalInput("input columns are not orthonormal");
    if (rho == d) return partial;
    Eigen::HouseholderQR<Matrix> qr(partial);
    Matrix q = qr.householderQ();
    Matrix out(d, d);
    out.leftCols(rho) = partial;
    out.rightCols(d - rho) = q.rightCols(d - rho);
    return out;
}

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

} // namespace linalg
} // namespace conres
