#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hetsense/config.hpp"
#include "hetsense/dmd.hpp"
#include "hetsense/placement.hpp"

namespace hetsense {

/// Metrics logged after one assimilation step.
struct MetricsRecord {
  Index time_index = 0;
  double time = 0.0;
  double mse_heterogeneous = 0.0;
  double mse_av_only = 0.0;
  double mse_mv_only = 0.0;
  double eig_re = 0.0;  // dominant continuous-time eigenvalue
  double eig_im = 0.0;
  Index model_rank = 0;
  std::string placement;  // "x:y" centers joined by '|'
  double update_seconds = 0.0;
};

struct ScenarioResult {
  std::vector<MetricsRecord> records;
  DmdModel final_model;
  Placement final_placement;
  Workspace model_workspace{1, 1};
};

/// Closed loop on the mv (modeling) grid:
///  * aerial robots sense on the av grid every av_time_step steps (noise std
///    sigma0 (1 + beta d)) and their data is upsampled bilinearly;
///  * before the first model the combined stream is av-only; the first model
///    is fit on snapshots 0..init_T;
///  * marine robots sense their disks every mv_time_step steps (noise variance
///    noise_variance) and the gappy reconstruction through the current model
///    replaces the av estimate at that step;
///  * every update_every steps the new pairs are folded in per `method`, then
///    the placement (block pivoted QR on the modes) and the av density
///    (temporal spectrum, Lloyd) are recomputed.
/// Marine robots start at random disjoint disks, aerial robots at a Lloyd
/// configuration for the uniform density.
///
/// Baselines at every record time: av-only is the upsampled av estimate;
/// mv-only is a separate model fit on marine data alone (zero-filled until it
/// has a model, gappy through its own model afterwards) sensing either at the
/// heterogeneous model's placements or at fresh random placements
/// (mv_baseline).
ScenarioResult run_scenario(const ExperimentConfig& cfg);

/// Writes the metrics CSV. The update_seconds column is the only
/// non-deterministic one and is left out when include_timing is false.
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRecord>& records,
                       bool include_timing = true);

/// Mean of a metric over the final third of the records.
double final_third_mean(const std::vector<MetricsRecord>& records,
                        double MetricsRecord::*field);

}  // namespace hetsense
