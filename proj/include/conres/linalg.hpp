#pragma once

#include "conres/graph.hpp"

namespace conres {
namespace linalg {

/// Relative numerical-rank tolerance per matrix dimension: eigenvalues with
/// |lambda| <= kRankTolPerDim * dim * max|lambda| count as zero.
inline constexpr double kRankTolPerDim = 1e-10;

/// Effective zero threshold for a symmetric matrix of the given dimension.
double rank_threshold(double max_abs_eig, Eigen::Index dim,
                      double rank_tol = -1.0);

/// Moore-Penrose pseudoinverse of a symmetric matrix, via symmetric
/// eigendecomposition (preserves symmetry exactly). rank_tol < 0 selects the
/// default kRankTolPerDim * dim.
Matrix pseudoinverse(const Matrix& m, double rank_tol = -1.0);

/// Generalized Schur complement M/D of a symmetric block matrix. The matrix
/// is made of square blocks of size d; elim selects the block indices forming
/// D. Returns A - B D^{-1} B^T on the complementary blocks, in their original
/// order. With use_pseudo the inverse is replaced by the pseudoinverse;
/// otherwise a singular D throws SingularBlock.
Matrix schur_complement(const Matrix& m, const IndexSet& elim, int d,
                        bool use_pseudo = false);

/// Orthonormal basis of the numerical kernel of a symmetric PSD matrix,
/// returned as columns. tol < 0 selects the default threshold.
Matrix kernel_basis(const Matrix& m, double tol = -1.0);

/// Number of numerically zero eigenvalues of a symmetric PSD matrix.
int kernel_dimension(const Matrix& m, double tol = -1.0);

/// Extend a d x rho matrix with orthonormal columns to a d x d orthogonal
/// matrix whose first rho columns equal the input exactly.
Matrix complete_orthonormal(const Matrix& partial);

/// Largest singular value.
double spectral_norm(const Matrix& m);

} // namespace linalg
} // namespace conres
