#include "hetsense/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <lapacke.h>

#include "hetsense/error.hpp"

namespace hetsense::linalg {

EigenDecomposition eig(const Eigen::MatrixXd& a) {
  require(a.rows() == a.cols(), "eig needs a square matrix");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  EigenDecomposition out;
  if (n == 0) return out;
  require(a.allFinite(), "eig input contains non-finite values");

  Eigen::MatrixXd work = a;
  Eigen::VectorXd wr(n), wi(n);
  Eigen::MatrixXd vr(n, n);
  const lapack_int info =
      LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, wr.data(),
                    wi.data(), nullptr, 1, vr.data(), n);
  require(info == 0, "dgeev failed to converge (info=" + std::to_string(info) + ")");

  out.values.resize(n);
  out.vectors.resize(n, n);
  for (lapack_int j = 0; j < n; ++j) {
    out.values[j] = {wr[j], wi[j]};
    if (wi[j] == 0.0) {
      out.vectors.col(j) = vr.col(j).cast<std::complex<double>>();
    } else if (wi[j] > 0.0 && j + 1 < n) {
      // dgeev packs a conjugate pair as (re, im) in columns j, j+1.
      for (lapack_int i = 0; i < n; ++i) {
        out.vectors(i, j) = {vr(i, j), vr(i, j + 1)};
        out.vectors(i, j + 1) = {vr(i, j), -vr(i, j + 1)};
      }
      out.values[j + 1] = {wr[j + 1], wi[j + 1]};
      ++j;
    }
  }
  for (lapack_int j = 0; j < n; ++j) {
    const double norm = out.vectors.col(j).norm();
    if (norm > 0.0) out.vectors.col(j) /= norm;
  }
  out.packed.resize(n, n);
  for (lapack_int j = 0; j < n; ++j) {
    if (wi[j] > 0.0 && j + 1 < n) {
      out.packed.col(j) = out.vectors.col(j).real();
      out.packed.col(j + 1) = out.vectors.col(j).imag();
      ++j;
    } else {
      out.packed.col(j) = out.vectors.col(j).real();
    }
  }
  return out;
}

ThinSvd svd(const Eigen::MatrixXd& m) {
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int k = std::min(rows, cols);
  ThinSvd out;
  if (k == 0) return out;
  Eigen::MatrixXd work = m;
  Eigen::MatrixXd vt(k, cols);
  out.u.resize(rows, k);
  out.sigma.resize(k);
  const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', rows, cols, work.data(), rows,
                                         out.sigma.data(), out.u.data(), rows, vt.data(), k);
  if (info == 0) {
    out.v = vt.transpose();
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> fallback(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {fallback.matrixU(), fallback.singularValues(), fallback.matrixV()};
}

std::optional<ThinSvd> leading_svd_gram(const Eigen::MatrixXd& m, Eigen::Index r,
                                        double min_ratio) {
  const bool wide = m.rows() <= m.cols();
  const lapack_int n = static_cast<lapack_int>(wide ? m.rows() : m.cols());
  if (r < 1 || r > n) return std::nullopt;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  if (wide)
    g.selfadjointView<Eigen::Lower>().rankUpdate(m);
  else
    g.selfadjointView<Eigen::Lower>().rankUpdate(m.transpose());

  const lapack_int k = static_cast<lapack_int>(r);
  lapack_int found = 0;
  Eigen::VectorXd mu(n);
  Eigen::MatrixXd z(n, k);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, g.data(), n, 0.0, 0.0, n - k + 1, n,
                     0.0, &found, mu.data(), z.data(), n, support.data());
  if (info != 0 || found != k) return std::nullopt;

  // dsyevr returns ascending eigenvalues; flip to descending.
  ThinSvd out;
  out.sigma.resize(r);
  Eigen::MatrixXd side(n, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    const double value = mu[k - 1 - j];
    if (!(value > 0.0)) return std::nullopt;
    out.sigma[j] = std::sqrt(value);
    side.col(j) = z.col(k - 1 - j);
  }
  if (out.sigma[r - 1] < min_ratio * out.sigma[0]) return std::nullopt;
  const Eigen::MatrixXd other =
      (wide ? Eigen::MatrixXd(m.transpose() * side) : Eigen::MatrixXd(m * side)) *
      out.sigma.cwiseInverse().asDiagonal();
  out.u = wide ? side : other;
  out.v = wide ? other : side;
  return out;
}

bool solve_packed(const EigenDecomposition& e, const Eigen::VectorXd& x, Eigen::VectorXcd& c) {
  const Eigen::Index n = e.packed.cols();
  require(e.packed.rows() == x.size(), "packed solve: length mismatch");
  if (n == 0 || e.packed.rows() != n) return false;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(e.packed);
  if (!(lu.rcond() > 1e-10)) return false;
  const Eigen::VectorXd p = lu.solve(x);
  c.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (e.values[j].imag() > 0.0 && j + 1 < n) {
      // x = p_j Re v + p_{j+1} Im v = a v + conj(a) conj(v) with a = (p_j - i p_{j+1}) / 2.
      c[j] = {0.5 * p[j], -0.5 * p[j + 1]};
      c[j + 1] = std::conj(c[j]);
      ++j;
    } else {
      c[j] = p[j];
    }
  }
  return true;
}

Eigen::VectorXcd lstsq(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                       double rel_cutoff) {
  require(a.rows() == b.size(), "lstsq dimension mismatch");
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod;
  cod.setThreshold(rel_cutoff);
  cod.compute(a);
  return cod.solve(b);
}

double max_principal_angle(const Eigen::MatrixXd& u1, const Eigen::MatrixXd& u2) {
  require(u1.rows() == u2.rows(), "principal angles need equal row counts");
  if (u1.cols() == 0 || u2.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(u1.transpose() * u2);
  const double smin = svd.singularValues().minCoeff();
  if (u1.cols() != u2.cols()) return std::acos(std::clamp(smin, -1.0, 1.0));
  // acos loses accuracy near 1; use the sine form for small angles.
  const Eigen::MatrixXd residual = u2 - u1 * (u1.transpose() * u2);
  Eigen::JacobiSVD<Eigen::MatrixXd> rsvd(residual);
  return std::asin(std::clamp(rsvd.singularValues()[0], 0.0, 1.0));
}

double orthonormality_error(const Eigen::MatrixXd& q) {
  if (q.cols() == 0) return 0.0;
  const Eigen::MatrixXd g = q.transpose() * q - Eigen::MatrixXd::Identity(q.cols(), q.cols());
  return g.cwiseAbs().maxCoeff();
}

}  // namespace hetsense::linalg
