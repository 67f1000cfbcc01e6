#pragma once

#include <map>

#include "hetsense/workspace.hpp"

namespace hetsense {

/// How source and target grids are overlaid for interpolation.
///   Corners:  both grids span the unit square corner to corner.
///   Physical: points sit at their physical positions; target points outside
///             the source extent clamp to the boundary.
enum class Alignment { Corners, Physical };

/// Bilinear interpolation of `s` (on `from`) onto every point of `to`.
FieldSnapshot bilinear_upsample(const FieldSnapshot& s, const Workspace& from,
                                const Workspace& to, Alignment align = Alignment::Corners);

/// Combined stream: at each time index the mv reconstruction replaces the av
/// estimate when one exists.
SnapshotSeries assemble_combined(const SnapshotSeries& av_estimates,
                                 const std::map<Index, FieldSnapshot>& mv_reconstructions);

/// (1/N) sum_i (est_i - truth_i)^2.
double mse(const FieldSnapshot& est, const FieldSnapshot& truth);
/// mse averaged over all snapshots of two equally long series.
double mse_series(const SnapshotSeries& est, const SnapshotSeries& truth);

}  // namespace hetsense
