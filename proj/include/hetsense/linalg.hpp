#pragma once

#include <optional>

#include <Eigen/Core>

namespace hetsense::linalg {

struct EigenDecomposition {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;  // unit 2-norm columns
  // Real layout of `vectors`: a conjugate pair (j, j+1) is stored as
  // (Re v_j, Im v_j); real eigenvectors are stored as is.
  Eigen::MatrixXd packed;
};

/// Eigen-decomposition of a real square matrix (LAPACK dgeev). Complex
/// eigenvalues come out in exact conjugate pairs with conjugate vectors.
EigenDecomposition eig(const Eigen::MatrixXd& a);

struct ThinSvd {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;  // descending
  Eigen::MatrixXd v;
};

/// Thin SVD m = u diag(sigma) v^T (LAPACK dgesdd, Eigen BDCSVD if it fails).
ThinSvd svd(const Eigen::MatrixXd& m);

/// Leading r singular triplets from the eigendecomposition of the smaller
/// Gram matrix (LAPACK dsyevr). Returns nothing when sigma_r < min_ratio *
/// sigma_1, where squaring the condition would cost accuracy.
std::optional<ThinSvd> leading_svd_gram(const Eigen::MatrixXd& m, Eigen::Index r,
                                        double min_ratio);

/// Coefficients c with vectors * c = x, solved in real arithmetic on the
/// packed layout. Returns false when the basis is singular or ill-conditioned
/// (reciprocal condition <= 1e-10).
bool solve_packed(const EigenDecomposition& e, const Eigen::VectorXd& x, Eigen::VectorXcd& c);

/// Minimum-norm least-squares solution of a x = b with a rank-revealing
/// factorization; singular values below `rel_cutoff` * largest are dropped.
Eigen::VectorXcd lstsq(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                       double rel_cutoff = 1e-10);

/// Largest principal angle (radians) between the column spans of two
/// matrices with orthonormal columns.
double max_principal_angle(const Eigen::MatrixXd& u1, const Eigen::MatrixXd& u2);

/// max |Q^T Q - I|.
double orthonormality_error(const Eigen::MatrixXd& q);

}  // namespace hetsense::linalg
