#pragma once

#include <vector>

#include <Eigen/Core>

#include "hetsense/dmd.hpp"
#include "hetsense/workspace.hpp"

namespace hetsense {

/// The observed grid indices L (C_L is applied as a row selection).
class ObservationSet {
 public:
  ObservationSet() = default;
  /// Sorts and validates; duplicates and out-of-range indices throw.
  ObservationSet(std::vector<Index> indices, Index n);

  static ObservationSet all(Index n);

  const std::vector<Index>& indices() const { return indices_; }
  Index size() const { return Index(indices_.size()); }
  Index dimension() const { return n_; }

  /// Rows of `m` at the observed indices.
  template <typename Derived>
  auto select_rows(const Eigen::MatrixBase<Derived>& m) const {
    return m(indices_, Eigen::all);
  }

 private:
  std::vector<Index> indices_;
  Index n_ = 0;
};

Eigen::VectorXd observe(const FieldSnapshot& s, const ObservationSet& obs);

/// (C_L Phi)^+ x_L with a rank-revealing solve (cutoff 1e-10).
Eigen::VectorXcd estimate_amplitudes(const DmdModel& m, const ObservationSet& obs,
                                     const Eigen::VectorXd& x_l);

/// Re(Phi a_hat): the gappy estimate of the whole field.
FieldSnapshot reconstruct_full(const DmdModel& m, const ObservationSet& obs,
                               const Eigen::VectorXd& x_l, double time = 0.0);

/// log det((C_L Phi)^* (C_L Phi)), or -infinity when the selection does not
/// resolve every mode (smallest singular value <= 1e-10 ||Phi||_2).
double placement_objective(const DmdModel& m, const ObservationSet& obs);
double placement_objective(const Eigen::MatrixXcd& modes, const ObservationSet& obs);

}  // namespace hetsense
