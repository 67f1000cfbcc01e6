#pragma once

// Test-only helpers. Random data here comes from std::mt19937_64 so that
// oracles never share a generator with the code under test.

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

namespace testsupport {

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = nd(gen);
  return m;
}

inline Eigen::MatrixXd random_orthonormal(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(rows, cols, seed));
  return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}

/// Columns x(0..steps) of x(k+1) = A x(k).
inline Eigen::MatrixXd iterate(const Eigen::MatrixXd& a, const Eigen::VectorXd& x0, int steps) {
  Eigen::MatrixXd out(x0.size(), steps + 1);
  out.col(0) = x0;
  for (int k = 0; k < steps; ++k) out.col(k + 1) = a * out.col(k);
  return out;
}

/// Largest principal angle between column spans, as asin of the largest
/// singular value of (I - Qa Qa^T) Qb (accurate for small angles).
inline double span_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd qa = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() *
                             Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd qb = Eigen::HouseholderQR<Eigen::MatrixXd>(b).householderQ() *
                             Eigen::MatrixXd::Identity(b.rows(), b.cols());
  const Eigen::MatrixXd rest = qb - qa * (qa.transpose() * qb);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rest);
  return std::asin(std::min(1.0, svd.singularValues()(0)));
}

}  // namespace testsupport
