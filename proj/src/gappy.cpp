#include "hetsense/gappy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "hetsense/error.hpp"
#include "hetsense/linalg.hpp"

namespace hetsense {

ObservationSet::ObservationSet(std::vector<Index> indices, Index n)
    : indices_(std::move(indices)), n_(n) {
  std::sort(indices_.begin(), indices_.end());
  require(std::adjacent_find(indices_.begin(), indices_.end()) == indices_.end(),
          "observation indices contain duplicates");
  for (Index i : indices_)
    require(i >= 0 && i < n, "observation index " + std::to_string(i) + " outside [0, " +
                                 std::to_string(n) + ")");
}

ObservationSet ObservationSet::all(Index n) {
  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) idx[std::size_t(i)] = i;
  return ObservationSet(std::move(idx), n);
}

Eigen::VectorXd observe(const FieldSnapshot& s, const ObservationSet& obs) {
  require(s.values.size() == obs.dimension(), "snapshot size does not match observation set");
  return obs.select_rows(s.values);
}

Eigen::VectorXcd estimate_amplitudes(const DmdModel& m, const ObservationSet& obs,
                                     const Eigen::VectorXd& x_l) {
  require(obs.size() >= 1, "gappy estimate needs at least one observation");
  require(obs.dimension() == m.dimension(), "observation set does not match model size");
  require(x_l.size() == obs.size(), "measurement count does not match observation set");
  const Eigen::MatrixXcd selected = obs.select_rows(m.modes);
  require(selected.cwiseAbs().maxCoeff() > 0.0,
          "observed rows carry no mode content (C_L Phi is zero)");
  return linalg::lstsq(selected, x_l.cast<std::complex<double>>(), 1e-10);
}

FieldSnapshot reconstruct_full(const DmdModel& m, const ObservationSet& obs,
                               const Eigen::VectorXd& x_l, double time) {
  const Eigen::VectorXcd a = estimate_amplitudes(m, obs, x_l);
  return {(m.modes * a).real(), time};
}

double placement_objective(const Eigen::MatrixXcd& modes, const ObservationSet& obs) {
  require(obs.dimension() == modes.rows(), "observation set does not match mode count");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const Index r = modes.cols();
  if (obs.size() < r || r == 0) return kNegInf;
  const double full = Eigen::JacobiSVD<Eigen::MatrixXcd>(modes).singularValues()[0];
  const Eigen::MatrixXcd selected = obs.select_rows(modes);
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXcd>(selected).singularValues();
  if (s[r - 1] <= 1e-10 * full) return kNegInf;
  return 2.0 * s.array().log().sum();
}

double placement_objective(const DmdModel& m, const ObservationSet& obs) {
  return placement_objective(m.modes, obs);
}

}  // namespace hetsense
