#pragma once

#include <optional>
#include <string>

#include <Eigen/Core>

#include "hetsense/linalg.hpp"
#include "hetsense/workspace.hpp"

namespace hetsense {

/// Time-shifted snapshot matrices with Y = A X: column j of X is x(j) and
/// column j of Y is x(j+1).
struct SnapshotPair {
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
  double dt = 1.0;

  Index dimension() const { return x.rows(); }
  Index columns() const { return x.cols(); }
};

SnapshotPair make_pair(const SnapshotSeries& series);

/// How many singular triplets a truncated SVD keeps.
///
/// Relative keeps sigma_i / sigma_0 > tolerance. Fixed keeps the leading
/// `rank` triplets (fewer if the matrix has lower numerical rank). Either way
/// triplets with sigma_i <= 1e-14 sigma_0 are dropped so that Sigma^-1 is
/// finite.
struct RankPolicy {
  enum class Kind { Relative, Fixed };
  Kind kind = Kind::Relative;
  double tolerance = 1e-10;
  Index rank = 0;

  static RankPolicy relative(double tol) { return {Kind::Relative, tol, 0}; }
  static RankPolicy fixed(Index r) { return {Kind::Fixed, 0.0, r}; }
  /// rank > 0 -> fixed(rank), otherwise relative(tol).
  static RankPolicy from(Index rank, double tol) {
    return rank > 0 ? fixed(rank) : relative(tol);
  }

  /// Number of leading triplets to keep given descending singular values.
  Index choose(const Eigen::VectorXd& sigma) const;
  std::string describe() const;
};

struct TruncatedSvd {
  Eigen::MatrixXd u;      // N x r
  Eigen::VectorXd sigma;  // r, descending, positive
  Eigen::MatrixXd w;      // T x r
};

TruncatedSvd truncated_svd(const Eigen::MatrixXd& m,
                           const RankPolicy& policy = RankPolicy{});

/// Eigenvalue ordering used by every model constructor: descending
/// |alpha_i| * |lambda_i|, then descending |lambda_i|, then descending
/// Im(lambda_i). Keys are compared after rounding to 10 significant digits so
/// that conjugate pairs land next to each other with the positive-imaginary
/// member first.
inline constexpr const char* kOrderingConvention =
    "desc |alpha|*|lambda|, then desc |lambda|, then desc Im(lambda)";

/// Fitted DMD model. svd_* are empty for models that were not built from a
/// reduced SVD (e.g. the long-term online operator).
struct DmdModel {
  Eigen::MatrixXcd modes;        // N x r
  Eigen::VectorXcd eigenvalues;  // r
  Eigen::VectorXcd amplitudes;   // r
  Eigen::MatrixXd svd_u;
  Eigen::VectorXd svd_sigma;
  Eigen::MatrixXd svd_w;
  double dt = 1.0;

  Index rank() const { return eigenvalues.size(); }
  Index dimension() const { return modes.rows(); }
};

/// Batch DMD: truncated SVD of X, reduced operator U^T Y W Sigma^-1, its
/// eigendecomposition, modes Y W Sigma^-1 V, amplitudes Phi^+ x(0).
DmdModel fit_dmd(const SnapshotPair& pair, const RankPolicy& policy = RankPolicy{});

/// Builds a model from reduced SVD factors of X and the matching Y. The
/// amplitudes are solved against `anchor`.
DmdModel model_from_svd(const Eigen::MatrixXd& u, const Eigen::VectorXd& sigma,
                        const Eigen::MatrixXd& w, const Eigen::MatrixXd& y,
                        const Eigen::VectorXd& anchor, double dt);

/// Reduced operator U^T Y W Sigma^-1 (r x r).
Eigen::MatrixXd reduced_operator(const Eigen::MatrixXd& u, const Eigen::VectorXd& sigma,
                                 const Eigen::MatrixXd& w, const Eigen::MatrixXd& y);

/// Builds a model straight from modes/eigenvalues; amplitudes solved against
/// `anchor` and entries sorted by the ordering convention.
DmdModel model_from_modes(Eigen::MatrixXcd modes, Eigen::VectorXcd eigenvalues,
                          const Eigen::VectorXd& anchor, double dt);

/// Model from a full eigendecomposition of a real operator; amplitudes are
/// solved in real arithmetic when the eigenvector basis is well conditioned.
DmdModel model_from_eig(const linalg::EigenDecomposition& e, const Eigen::VectorXd& anchor,
                        double dt);

/// Same model with amplitudes re-solved against `anchor` (and re-sorted).
DmdModel reanchor(const DmdModel& m, const Eigen::VectorXd& anchor);

/// Least-squares amplitudes Phi^+ x (rank-revealing, cutoff 1e-10).
Eigen::VectorXcd solve_amplitudes(const Eigen::MatrixXcd& modes, const Eigen::VectorXd& x);

/// Re(Phi Lambda^t alpha).
Eigen::VectorXd reconstruct(const DmdModel& m, int t_index);
FieldSnapshot reconstruct_snapshot(const DmdModel& m, int t_index);

/// omega_i = ln(lambda_i) / dt on the principal branch.
Eigen::VectorXcd continuous_eigenvalues(const DmdModel& m);

/// ||Y - U U^T Y||_F / ||Y||_F for the model's retained U. Diagnostic for the
/// requirement that Y lie in the span of X; never used to reject a model.
double span_residual(const DmdModel& m, const Eigen::MatrixXd& y);

}  // namespace hetsense
