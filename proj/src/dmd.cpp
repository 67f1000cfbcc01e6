#include "hetsense/dmd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "hetsense/error.hpp"
#include "hetsense/linalg.hpp"

namespace hetsense {

SnapshotPair make_pair(const SnapshotSeries& series) {
  require(series.size() >= 2, "make_pair needs at least 2 snapshots");
  series.validate();
  const Eigen::MatrixXd all = series.matrix();
  const Index t = all.cols() - 1;
  return {all.leftCols(t), all.rightCols(t), series.dt};
}

Index RankPolicy::choose(const Eigen::VectorXd& sigma) const {
  if (sigma.size() == 0 || sigma[0] <= 0.0) return 0;
  const double floor = 1e-14 * sigma[0];
  Index numerical = 0;
  while (numerical < sigma.size() && sigma[numerical] > floor) ++numerical;
  if (kind == Kind::Fixed) return std::min(rank, numerical);
  Index r = 0;
  while (r < numerical && sigma[r] > tolerance * sigma[0]) ++r;
  return std::max<Index>(r, 1);
}

std::string RankPolicy::describe() const {
  std::ostringstream os;
  if (kind == Kind::Fixed)
    os << "fixed:" << rank;
  else
    os << "relative:" << tolerance;
  return os.str();
}

TruncatedSvd truncated_svd(const Eigen::MatrixXd& m, const RankPolicy& policy) {
  require(m.size() > 0, "truncated_svd of an empty matrix");
  require(m.allFinite(), "truncated_svd input contains non-finite values");
  require(m.cwiseAbs().maxCoeff() > 0.0, "truncated_svd of an all-zero matrix");
  // Small fixed ranks of large matrices go through the Gram matrix when the
  // kept spectrum is well conditioned; everything else uses a full SVD.
  if (policy.kind == RankPolicy::Kind::Fixed && policy.rank >= 1 &&
      4 * policy.rank <= std::min(m.rows(), m.cols()) && std::min(m.rows(), m.cols()) >= 64) {
    if (auto lead = linalg::leading_svd_gram(m, policy.rank, 1e-2))
      return {std::move(lead->u), std::move(lead->sigma), std::move(lead->v)};
  }
  const linalg::ThinSvd svd = linalg::svd(m);
  const Index r = policy.choose(svd.sigma);
  require(r >= 1, "truncated_svd found no nonzero singular values");
  return {svd.u.leftCols(r), svd.sigma.head(r), svd.v.leftCols(r)};
}

Eigen::VectorXcd solve_amplitudes(const Eigen::MatrixXcd& modes, const Eigen::VectorXd& x) {
  require(modes.rows() == x.size(), "amplitude solve: snapshot length mismatch");
  const Eigen::VectorXcd b = x.cast<std::complex<double>>();
  if (modes.rows() == modes.cols() && modes.rows() > 0) {
    // Square mode matrices (full-operator models) are usually invertible.
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(modes);
    if (lu.rcond() > 1e-10) return lu.solve(b);
  }
  return linalg::lstsq(modes, b, 1e-10);
}

namespace {

std::vector<Index> ordering(const Eigen::VectorXcd& eigenvalues,
                            const Eigen::VectorXcd& amplitudes) {
  const Index r = eigenvalues.size();
  std::vector<double> weight(static_cast<std::size_t>(r)), modulus(static_cast<std::size_t>(r));
  double wmax = 0.0, mmax = 0.0;
  for (Index i = 0; i < r; ++i) {
    modulus[std::size_t(i)] = std::abs(eigenvalues[i]);
    weight[std::size_t(i)] = std::abs(amplitudes[i]) * modulus[std::size_t(i)];
    wmax = std::max(wmax, weight[std::size_t(i)]);
    mmax = std::max(mmax, modulus[std::size_t(i)]);
  }
  auto quantize = [](double v, double scale) -> long long {
    return scale > 0.0 ? std::llround(v / scale * 1e10) : 0;
  };
  struct Key {
    long long w, m;
    double im;
  };
  std::vector<Key> keys;
  for (Index i = 0; i < r; ++i)
    keys.push_back({quantize(weight[std::size_t(i)], wmax),
                    quantize(modulus[std::size_t(i)], mmax), eigenvalues[i].imag()});
  std::vector<Index> idx(static_cast<std::size_t>(r));
  std::iota(idx.begin(), idx.end(), Index(0));
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    const Key& ka = keys[std::size_t(a)];
    const Key& kb = keys[std::size_t(b)];
    if (ka.w != kb.w) return ka.w > kb.w;
    if (ka.m != kb.m) return ka.m > kb.m;
    return ka.im > kb.im;
  });
  return idx;
}

DmdModel sorted_model(const Eigen::MatrixXcd& modes, const Eigen::VectorXcd& eigenvalues,
                      const Eigen::VectorXcd& amplitudes, double dt) {
  const auto order = ordering(eigenvalues, amplitudes);
  DmdModel m;
  m.dt = dt;
  m.modes.resize(modes.rows(), modes.cols());
  m.eigenvalues.resize(eigenvalues.size());
  m.amplitudes.resize(eigenvalues.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    m.modes.col(Index(k)) = modes.col(order[k]);
    m.eigenvalues[Index(k)] = eigenvalues[order[k]];
    m.amplitudes[Index(k)] = amplitudes[order[k]];
  }
  return m;
}

}  // namespace

DmdModel model_from_modes(Eigen::MatrixXcd modes, Eigen::VectorXcd eigenvalues,
                          const Eigen::VectorXd& anchor, double dt) {
  require(modes.cols() == eigenvalues.size(), "modes/eigenvalues size mismatch");
  return sorted_model(modes, eigenvalues, solve_amplitudes(modes, anchor), dt);
}

DmdModel model_from_eig(const linalg::EigenDecomposition& e, const Eigen::VectorXd& anchor,
                        double dt) {
  require(e.vectors.rows() == anchor.size(), "amplitude solve: snapshot length mismatch");
  Eigen::VectorXcd amplitudes;
  if (!linalg::solve_packed(e, anchor, amplitudes))
    amplitudes = solve_amplitudes(e.vectors, anchor);
  return sorted_model(e.vectors, e.values, amplitudes, dt);
}

DmdModel reanchor(const DmdModel& m, const Eigen::VectorXd& anchor) {
  DmdModel out = model_from_modes(m.modes, m.eigenvalues, anchor, m.dt);
  out.svd_u = m.svd_u;
  out.svd_sigma = m.svd_sigma;
  out.svd_w = m.svd_w;
  return out;
}

Eigen::MatrixXd reduced_operator(const Eigen::MatrixXd& u, const Eigen::VectorXd& sigma,
                                 const Eigen::MatrixXd& w, const Eigen::MatrixXd& y) {
  const Eigen::MatrixXd yws = (y * w) * sigma.cwiseInverse().asDiagonal();
  return u.transpose() * yws;
}

DmdModel model_from_svd(const Eigen::MatrixXd& u, const Eigen::VectorXd& sigma,
                        const Eigen::MatrixXd& w, const Eigen::MatrixXd& y,
                        const Eigen::VectorXd& anchor, double dt) {
  require(u.cols() == sigma.size() && w.cols() == sigma.size(),
          "inconsistent SVD factor shapes");
  require(y.cols() == w.rows() && y.rows() == u.rows(), "Y does not match SVD factors");
  const Eigen::MatrixXd yws = (y * w) * sigma.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd a_tilde = u.transpose() * yws;
  const auto decomposition = linalg::eig(a_tilde);
  Eigen::MatrixXcd modes = yws.cast<std::complex<double>>() * decomposition.vectors;
  DmdModel m = model_from_modes(std::move(modes), decomposition.values, anchor, dt);
  m.svd_u = u;
  m.svd_sigma = sigma;
  m.svd_w = w;
  return m;
}

DmdModel fit_dmd(const SnapshotPair& pair, const RankPolicy& policy) {
  require(pair.x.cols() >= 1 && pair.x.cols() == pair.y.cols() &&
              pair.x.rows() == pair.y.rows(),
          "snapshot pair must have matching non-empty X and Y");
  const TruncatedSvd svd = truncated_svd(pair.x, policy);
  return model_from_svd(svd.u, svd.sigma, svd.w, pair.y, pair.x.col(0), pair.dt);
}

Eigen::VectorXd reconstruct(const DmdModel& m, int t_index) {
  require(t_index >= 0, "reconstruct needs t_index >= 0");
  Eigen::VectorXcd coeff(m.rank());
  for (Index i = 0; i < m.rank(); ++i)
    coeff[i] = std::pow(m.eigenvalues[i], t_index) * m.amplitudes[i];
  return (m.modes * coeff).real();
}

FieldSnapshot reconstruct_snapshot(const DmdModel& m, int t_index) {
  return {reconstruct(m, t_index), t_index * m.dt};
}

Eigen::VectorXcd continuous_eigenvalues(const DmdModel& m) {
  Eigen::VectorXcd out(m.rank());
  for (Index i = 0; i < m.rank(); ++i) {
    require(std::abs(m.eigenvalues[i]) > 0.0,
            "continuous eigenvalue of a zero discrete eigenvalue");
    out[i] = std::log(m.eigenvalues[i]) / m.dt;
  }
  return out;
}

double span_residual(const DmdModel& m, const Eigen::MatrixXd& y) {
  require(m.svd_u.rows() == y.rows(), "span_residual needs the model's SVD basis");
  const double norm = y.norm();
  if (norm == 0.0) return 0.0;
  return (y - m.svd_u * (m.svd_u.transpose() * y)).norm() / norm;
}

}  // namespace hetsense
