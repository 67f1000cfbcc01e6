#pragma once

#include <Eigen/Core>

#include "hetsense/dmd.hpp"

namespace hetsense {

/// Incremental-SVD streaming state.
///
/// Holds the truncated SVD of every X column seen so far and every Y column
/// (the model needs Y W Sigma^-1, so Y cannot be discarded). Storage grows
/// linearly with the number of accumulated snapshots.
struct GeneralOnlineState {
  Eigen::MatrixXd u;      // N x r
  Eigen::VectorXd sigma;  // r
  Eigen::MatrixXd w;      // T_acc x r
  Eigen::MatrixXd y;      // N x T_acc
  double dt = 1.0;
  RankPolicy policy;
  /// Keep only every time_stride-th column of each incoming batch.
  int time_stride = 1;

  Index dimension() const { return u.rows(); }
  Index rank() const { return sigma.size(); }
  Index accumulated() const { return y.cols(); }
  /// Number of doubles held by the state.
  Index storage() const { return u.size() + sigma.size() + w.size() + y.size(); }
};

GeneralOnlineState init_general(const SnapshotPair& pair,
                                const RankPolicy& policy = RankPolicy{});

/// Folds a batch of new snapshot pairs into the SVD (in place).
void update_general(GeneralOnlineState& st, const Eigen::MatrixXd& x_new,
                    const Eigen::MatrixXd& y_new);

/// Model from the current factors; amplitudes anchored on the most recent
/// snapshot (last retained Y column).
DmdModel general_model(const GeneralOnlineState& st);
DmdModel general_model(const GeneralOnlineState& st, const Eigen::VectorXd& anchor);

/// Reduced operator U^T Y W Sigma^-1 of the current state.
Eigen::MatrixXd general_reduced_operator(const GeneralOnlineState& st);

/// Operator/covariance streaming state with forgetting factor gamma.
///
/// a = Q S with Q the (weighted) Y X^T and S the inverse of the (weighted)
/// X X^T. Storage is O(N^2) no matter how long the stream is.
struct LongTermOnlineState {
  Eigen::MatrixXd a;  // N x N
  Eigen::MatrixXd s;  // N x N, symmetric positive definite
  double gamma = 1.0;
  double dt = 1.0;
  Eigen::VectorXd last_snapshot;

  Index dimension() const { return a.rows(); }
  Index storage() const { return a.size() + s.size() + last_snapshot.size(); }
};

/// Requires X (N x T) to have full row rank: T >= N and
/// sigma_min > 1e-10 sigma_max.
LongTermOnlineState init_longterm(const SnapshotPair& pair, double gamma = 1.0);

/// Rank-tau Woodbury update with forgetting (in place):
///   Gamma = (gamma I + X^T S X)^-1
///   A'    = A + (Y - A X) Gamma X^T S
///   S'    = (S - S X Gamma X^T S) / gamma
/// which is exact for Q' = gamma Q + Y X^T and S'^-1 = gamma S^-1 + X X^T.
void update_longterm(LongTermOnlineState& st, const Eigen::MatrixXd& x_new,
                     const Eigen::MatrixXd& y_new);

/// Eigendecomposition of the full operator; eigenvectors are the modes.
DmdModel longterm_model(const LongTermOnlineState& st);
DmdModel longterm_model(const LongTermOnlineState& st, const Eigen::VectorXd& anchor);

/// Batch DMD recomputed from scratch on all accumulated data.
DmdModel batch_baseline(const Eigen::MatrixXd& x_acc, const Eigen::MatrixXd& y_acc,
                        double dt, const RankPolicy& policy = RankPolicy{});

/// Y X^+ via the pseudoinverse; the operator the long-term method tracks.
Eigen::MatrixXd batch_operator(const Eigen::MatrixXd& x_acc, const Eigen::MatrixXd& y_acc);

}  // namespace hetsense
