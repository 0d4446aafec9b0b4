#ifndef COASTPCA_PCA_HPP
#define COASTPCA_PCA_HPP

#include <cstddef>
#include <vector>

#include "coastpca/matrix.hpp"

namespace coastpca {

/// Column-centered observation matrix. Column j holds one observation's
/// fluctuations; means[j] is the average that was removed from it.
struct SampleMatrix {
  Matrix data;                // N x M fluctuations
  std::vector<double> means;  // length M

  std::size_t n() const noexcept { return data.rows(); }
  std::size_t m() const noexcept { return data.cols(); }
};

/// Eigenpairs of a symmetric matrix, sorted by descending eigenvalue.
/// Column k of eigenvectors pairs with eigenvalues[k].
struct EigenSystem {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;  // N x N, orthonormal columns
};

/// Projection coefficients: row j holds observation j's coordinates over
/// all N modes (Phi = S^T A).
struct ModeSet {
  Matrix modes;  // M x N
};

/// Removes the per-column average from a raw observation matrix.
/// Throws invalid_argument_error on a non-finite entry, naming row/column.
SampleMatrix center_columns(const Matrix& raw);

/// C = (1/M) S S^T, exactly symmetric by construction.
Matrix covariance(const SampleMatrix& s, int workers = 1);

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// The input is symmetrized as (C + C^T)/2 before solving. Convergence:
/// off-diagonal Frobenius norm <= 1e-12 * ||C||_F within max_sweeps sweeps,
/// else throws numerical_error carrying the residual norm. Ties keep Jacobi
/// output order (stable sort); each eigenvector's largest-magnitude entry
/// is made positive.
EigenSystem eigendecompose_symmetric(const Matrix& c, int max_sweeps = 100);

/// Phi = S^T A. Throws invalid_argument_error on dimension mismatch.
ModeSet compute_modes(const SampleMatrix& s, const EigenSystem& e,
                      int workers = 1);

/// Truncated reconstruction A_k Phi_k^T with the removed means added back
/// per column. k = 0 returns the broadcast means; k = N reproduces the raw
/// input. Throws invalid_argument_error when k is out of [0, N].
Matrix reconstruct(const SampleMatrix& s, const EigenSystem& e,
                   const ModeSet& phi, std::size_t k, int workers = 1);

/// Fraction of total variance captured by the first k modes, clamped to
/// [0, 1]. Negative round-off eigenvalues count as zero; a non-positive
/// trace yields 1.
double variance_fraction(const EigenSystem& e, std::size_t k);

}  // namespace coastpca

#endif
