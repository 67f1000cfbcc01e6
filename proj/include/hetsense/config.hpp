#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hetsense/dmd.hpp"
#include "hetsense/fusion.hpp"
#include "hetsense/workspace.hpp"

namespace hetsense {

/// One timing environment: grid size, snapshots before the first model (T),
/// snapshots per update (tau) and total steps.
struct BenchEnv {
  int width = 10;
  int height = 10;
  int init_T = 100;
  int tau = 10;
  int steps = 500;
};

/// Every experiment knob. Serialized as flat JSON (keys = member names); any
/// key can be overridden from the command line with --key=value, where value
/// is parsed as JSON when possible and as a string otherwise.
struct ExperimentConfig {
  // field
  std::string generator = "damped_oscillation";  // damped_oscillation | lti | external_series
  std::string series_path;
  int full_width = 32;
  int full_height = 64;
  double spacing = 1.0;
  std::vector<std::array<double, 2>> lti_eigs{{-1.0, 0.0}};
  double signal_scale = 1.0;

  // sampling
  int av_space_step = 4;
  int mv_space_step = 2;
  int T_total = 300;
  double dt = 0.01;
  int init_T = 100;
  int update_every = 10;
  int av_time_step = 1;
  int mv_time_step = 10;
  double noise_variance = 0.01;

  // robots
  int sensing_radius = 2;
  int mv_count = 4;
  int av_count = 2;
  double sigma0 = -1.0;  // < 0: sqrt(noise_variance)
  double beta = 0.0;
  int lloyd_max_iters = 100;
  double lloyd_tol = 1e-6;
  double density_exponent = 1.0;
  std::string mv_baseline = "optimal";  // optimal | random
  std::string upsample = "physical";    // physical | corners

  // model
  std::string method = "general";  // batch | general | longterm
  double gamma = 1.0;
  int rank = 4;  // 0: relative threshold rank_tol
  double rank_tol = 1e-10;
  int time_stride = 1;

  std::uint64_t seed = 0;
  int workers = 1;

  // eigenvalue trials
  int trials = 10;
  std::vector<double> variances{0.01, 0.04, 0.1};
  std::string trial_anchor = "initial";  // initial | recent
  double summary_after = 5.0;

  // timing benchmark
  std::vector<BenchEnv> bench_envs{{10, 10, 100, 10, 500},
                                   {10, 10, 100, 100, 500},
                                   {20, 20, 400, 100, 1000},
                                   {20, 10, 200, 100, 2000}};
  double bench_noise = 0.4;
  int bench_general_rank = 10;
  int bench_repeats = 1;

  // forgetting comparison
  std::vector<double> gammas{0.9, 1.0};
  int switch_step = 200;
  int forgetting_width = 4;
  int forgetting_height = 4;
  double forgetting_before = 0.95;
  double forgetting_after = 0.7;
  double process_noise = 0.1;

  RankPolicy rank_policy() const { return RankPolicy::from(rank, rank_tol); }
  std::vector<std::complex<double>> lti_eigenvalues() const;
  Alignment alignment() const;
  Workspace full_workspace() const { return {full_width, full_height, spacing}; }
  Workspace mv_workspace() const;
  Workspace av_workspace() const;
  double av_sigma0() const;

  /// Throws on inconsistent values.
  void validate() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& cfg);

/// Applies `key=value`; unknown keys throw.
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

}  // namespace hetsense
