#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "hetsense/dmd.hpp"
#include "hetsense/workspace.hpp"

namespace hetsense {

/// Nonnegative per-point weights summing to 1.
class DensityMap {
 public:
  /// Normalizes `weights`; negative or non-finite entries and a zero total
  /// throw.
  explicit DensityMap(Eigen::VectorXd weights);
  static DensityMap uniform(Index n);

  const Eigen::VectorXd& weights() const { return weights_; }
  Index size() const { return weights_.size(); }
  double operator[](Index i) const { return weights_[i]; }

 private:
  Eigen::VectorXd weights_;
};

/// Robot positions in physical workspace units.
struct RobotConfiguration {
  std::vector<Eigen::Vector2d> positions;
  std::size_t size() const { return positions.size(); }
};

/// Per-point weight sum_i |Phi_pi| |ln|lambda_i||^exponent, normalized, with a
/// 1e-12 floor added before renormalizing. Uniform when every eigenvalue has
/// unit modulus.
DensityMap density_from_temporal(const DmdModel& m, double exponent = 1.0);

/// Owner robot of each grid point (nearest, ties to the lowest robot index).
std::vector<std::size_t> voronoi_partition(const Workspace& ws, const RobotConfiguration& cfg);

/// Every robot moves to the density-weighted centroid of its cell; robots
/// whose cell carries no mass stay put.
RobotConfiguration lloyd_step(const Workspace& ws, const RobotConfiguration& cfg,
                              const DensityMap& density);

struct LloydResult {
  RobotConfiguration config;
  int iterations = 0;
  std::vector<double> costs;  // cost before the first step and after each step
};

LloydResult lloyd(const Workspace& ws, RobotConfiguration cfg, const DensityMap& density,
                  int max_iters = 100, double tol = 1e-6);

/// sum_q ||q - p_owner(q)||^2 phi(q).
double coverage_cost(const Workspace& ws, const RobotConfiguration& cfg,
                     const DensityMap& density);

/// Each point is measured by its Voronoi owner with noise standard deviation
/// sigma0 (1 + beta d), d the distance to the owner in physical units.
FieldSnapshot av_sense(const FieldSnapshot& truth, const Workspace& ws,
                       const RobotConfiguration& cfg, double sigma0, double beta,
                       std::uint64_t seed);

/// `count` positions drawn uniformly inside the workspace rectangle.
RobotConfiguration random_configuration(const Workspace& ws, std::size_t count,
                                        std::uint64_t seed);

}  // namespace hetsense
