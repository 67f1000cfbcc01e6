#include "hetsense/online.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "hetsense/error.hpp"
#include "hetsense/linalg.hpp"

namespace hetsense {
namespace {

Eigen::MatrixXd stride_columns(const Eigen::MatrixXd& m, int stride) {
  if (stride <= 1) return m;
  const Index n = (m.cols() + stride - 1) / stride;
  Eigen::MatrixXd out(m.rows(), n);
  for (Index j = 0; j < n; ++j) out.col(j) = m.col(j * stride);
  return out;
}

void check_batch(Index n, const Eigen::MatrixXd& x_new, const Eigen::MatrixXd& y_new) {
  require(x_new.rows() == n && y_new.rows() == n,
          "update batch has " + std::to_string(x_new.rows()) + " rows, state has " +
              std::to_string(n));
  require(x_new.cols() == y_new.cols(), "X_new and Y_new column counts differ");
  require(x_new.cols() >= 1, "empty update batch");
  require(x_new.allFinite() && y_new.allFinite(), "update batch contains non-finite values");
}

}  // namespace

GeneralOnlineState init_general(const SnapshotPair& pair, const RankPolicy& policy) {
  require(pair.x.cols() >= 1 && pair.x.cols() == pair.y.cols(), "invalid snapshot pair");
  const TruncatedSvd svd = truncated_svd(pair.x, policy);
  GeneralOnlineState st;
  st.u = svd.u;
  st.sigma = svd.sigma;
  st.w = svd.w;
  st.y = pair.y;
  st.dt = pair.dt;
  st.policy = policy;
  return st;
}

void update_general(GeneralOnlineState& st, const Eigen::MatrixXd& x_in,
                    const Eigen::MatrixXd& y_in) {
  check_batch(st.dimension(), x_in, y_in);
  const Eigen::MatrixXd x_new = stride_columns(x_in, st.time_stride);
  const Eigen::MatrixXd y_new = stride_columns(y_in, st.time_stride);
  const Index r = st.rank();
  const Index tau = x_new.cols();
  const Index t_old = st.w.rows();

  // Projection onto the current basis, with one re-orthogonalization pass.
  Eigen::MatrixXd l = st.u.transpose() * x_new;
  Eigen::MatrixXd h = x_new - st.u * l;
  const Eigen::MatrixXd l2 = st.u.transpose() * h;
  l += l2;
  h -= st.u * l2;

  // Orthonormal basis J of the residual, rank-revealed so that directions
  // already in span(U) do not enter as spurious basis vectors.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(h);
  const double scale = std::max(st.sigma[0], x_new.norm());
  qr.setThreshold(1e-12 * scale / std::max(h.norm(), 1e-300));
  const Index p = h.norm() > 1e-13 * scale ? qr.rank() : 0;
  Eigen::MatrixXd j = Eigen::MatrixXd(qr.householderQ()).leftCols(p);
  if (p > 0) {
    j -= st.u * (st.u.transpose() * j);
    j = Eigen::HouseholderQR<Eigen::MatrixXd>(j).householderQ() *
        Eigen::MatrixXd::Identity(st.dimension(), p);
  }
  const Eigen::MatrixXd pm = j.transpose() * h;

  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(r + p, r + tau);
  z.topLeftCorner(r, r) = st.sigma.asDiagonal();
  z.topRightCorner(r, tau) = l;
  z.bottomRightCorner(p, tau) = pm;

  Eigen::BDCSVD<Eigen::MatrixXd> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index k = std::max<Index>(st.policy.choose(svd.singularValues()), 1);

  Eigen::MatrixXd basis(st.dimension(), r + p);
  basis << st.u, j;
  st.u = basis * svd.matrixU().leftCols(k);
  st.sigma = svd.singularValues().head(k);

  Eigen::MatrixXd w_new(t_old + tau, k);
  w_new.topRows(t_old) = st.w * svd.matrixV().topLeftCorner(r, k);
  w_new.bottomRows(tau) = svd.matrixV().bottomLeftCorner(tau, k);
  st.w = std::move(w_new);

  st.y.conservativeResize(Eigen::NoChange, t_old + tau);
  st.y.rightCols(tau) = y_new;
}

Eigen::MatrixXd general_reduced_operator(const GeneralOnlineState& st) {
  return reduced_operator(st.u, st.sigma, st.w, st.y);
}

DmdModel general_model(const GeneralOnlineState& st, const Eigen::VectorXd& anchor) {
  return model_from_svd(st.u, st.sigma, st.w, st.y, anchor, st.dt);
}

DmdModel general_model(const GeneralOnlineState& st) {
  require(st.y.cols() >= 1, "general state holds no snapshots");
  return general_model(st, st.y.col(st.y.cols() - 1));
}

LongTermOnlineState init_longterm(const SnapshotPair& pair, double gamma) {
  require(gamma > 0.0 && gamma <= 1.0, "forgetting factor must lie in (0, 1]");
  const Index n = pair.x.rows();
  const Index t = pair.x.cols();
  require(pair.y.rows() == n && pair.y.cols() == t, "invalid snapshot pair");
  require(t >= n, "long-term initialization needs X with full row rank: at least N = " +
                      std::to_string(n) + " data points must be collected first (got " +
                      std::to_string(t) + ")");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(pair.x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  require(s[0] > 0.0 && s[n - 1] > 1e-10 * s[0],
          "long-term initialization needs X with full row rank: collect at least N = " +
              std::to_string(n) + " linearly independent data points");
  const Eigen::MatrixXd& u = svd.matrixU();
  LongTermOnlineState st;
  st.a = pair.y * svd.matrixV() * s.cwiseInverse().asDiagonal() * u.transpose();
  st.s = u * s.cwiseAbs2().cwiseInverse().asDiagonal() * u.transpose();
  st.gamma = gamma;
  st.dt = pair.dt;
  st.last_snapshot = pair.y.col(t - 1);
  return st;
}

void update_longterm(LongTermOnlineState& st, const Eigen::MatrixXd& x_new,
                     const Eigen::MatrixXd& y_new) {
  check_batch(st.dimension(), x_new, y_new);
  const Index tau = x_new.cols();
  const Eigen::MatrixXd sx = st.s * x_new;
  Eigen::MatrixXd g = x_new.transpose() * sx;
  g.diagonal().array() += st.gamma;
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  require(llt.info() == Eigen::Success && llt.rcond() > 1e-12,
          "update gain matrix (gamma I + X^T S X) is too ill-conditioned to invert");
  const Eigen::MatrixXd gamma_inv = llt.solve(Eigen::MatrixXd::Identity(tau, tau));
  const Eigen::MatrixXd gain = gamma_inv * sx.transpose();  // tau x N
  st.a += (y_new - st.a * x_new) * gain;
  st.s -= sx * gain;
  st.s /= st.gamma;
  st.s = 0.5 * (st.s + st.s.transpose()).eval();
  st.last_snapshot = y_new.col(tau - 1);
}

DmdModel longterm_model(const LongTermOnlineState& st, const Eigen::VectorXd& anchor) {
  return model_from_eig(linalg::eig(st.a), anchor, st.dt);
}

DmdModel longterm_model(const LongTermOnlineState& st) {
  return longterm_model(st, st.last_snapshot);
}

DmdModel batch_baseline(const Eigen::MatrixXd& x_acc, const Eigen::MatrixXd& y_acc,
                        double dt, const RankPolicy& policy) {
  return fit_dmd({x_acc, y_acc, dt}, policy);
}

Eigen::MatrixXd batch_operator(const Eigen::MatrixXd& x_acc, const Eigen::MatrixXd& y_acc) {
  require(x_acc.cols() == y_acc.cols(), "X and Y column counts differ");
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(x_acc.transpose());
  return cod.solve(y_acc.transpose()).transpose();
}

}  // namespace hetsense
