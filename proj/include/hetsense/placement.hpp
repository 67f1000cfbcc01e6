#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "hetsense/dmd.hpp"
#include "hetsense/gappy.hpp"
#include "hetsense/workspace.hpp"

namespace hetsense {

/// Grid points within Euclidean distance `radius` (cells) of the center,
/// clipped to the workspace.
struct SensingRegion {
  Index center_index = 0;
  int radius = 0;
  std::vector<Index> members;  // ascending
};

struct Placement {
  std::vector<SensingRegion> regions;
  std::vector<double> weights;

  /// Union of all region members as an observation set over n points.
  ObservationSet observations(Index n) const;
};

/// One candidate disk per grid point, in center-index order.
std::vector<SensingRegion> enumerate_candidates(const Workspace& ws, int k);

/// Greedy point selection with Householder deflation after each pick: the
/// column with the largest residual 2-norm wins, ties go to the lowest index.
std::vector<Index> pivoted_qr_points(const Eigen::MatrixXcd& m, Index count);

/// Block version over sensing regions. Each round picks the remaining
/// candidate with the largest sum of residual column norms over its members,
/// records weight ||selected block||_2 / (sum of all residual column norms)
/// before deflating, drops candidates that overlap the pick, then removes the
/// span of the selected block from every column.
Placement block_pivoted_qr(const Eigen::MatrixXcd& gram, const Workspace& ws, int k,
                           Index count);

/// block_pivoted_qr(Phi Phi^*) without forming the N x N gram matrix.
Placement block_pivoted_qr_modes(const Eigen::MatrixXcd& modes, const Workspace& ws, int k,
                                 Index count);

/// Phi Phi^* (N x N).
Eigen::MatrixXcd mode_gram(const DmdModel& m);

struct BruteForceResult {
  Placement best;
  double best_objective = 0.0;
  /// Smallest finite objective over all disjoint tuples (-inf if none).
  double worst_objective = 0.0;
  Index tuples = 0;
};

/// Exhaustive search over disjoint `count`-tuples of candidate regions
/// maximizing placement_objective. count <= 3 and at most 5e6 tuples.
BruteForceResult brute_force_placement(const DmdModel& model, const Workspace& ws, int k,
                                       Index count);

/// `count` disjoint regions at random centers (for initial or baseline
/// deployments). Weights are uniform.
Placement random_placement(const Workspace& ws, int k, Index count, std::uint64_t seed);

/// CSV with header center_x,center_y,radius,weight,member_count.
void write_placement_csv(const std::filesystem::path& path, const Placement& p,
                         const Workspace& ws);

}  // namespace hetsense
