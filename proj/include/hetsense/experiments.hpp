#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hetsense/config.hpp"

namespace hetsense {

inline const std::vector<std::string> kMethods{"batch", "general", "longterm"};

// ---- eigenvalue-tracking trials ----

struct EigTracePoint {
  std::string method;
  double variance = 0.0;
  int trial = 0;
  double time = 0.0;
  double re = 0.0;
  double im = 0.0;
};

struct EigSummary {
  std::string method;
  double variance = 0.0;
  std::size_t samples = 0;
  double median_re = 0.0;
  double q1_re = 0.0;
  double q3_re = 0.0;
  double iqr_re() const { return q3_re - q1_re; }
  double median_im = 0.0;
};

struct EigTrialsResult {
  std::vector<EigTracePoint> traces;
  std::vector<EigSummary> summaries;  // method-major, variances in config order

  const EigSummary& summary(const std::string& method, double variance) const;
};

/// LTI field (cfg.lti_eigs scaled by signal_scale) on the full grid with
/// T_total steps; models start from snapshots 0..init_T and are updated every
/// update_every steps. The trace point is the dominant continuous eigenvalue
/// of each model; amplitudes anchor on x(0) or the latest snapshot
/// (trial_anchor). Batch and general use cfg.rank_policy(); long-term uses the
/// full operator. Summaries pool every point with time > summary_after.
/// Trials for different (variance, trial) cells run on cfg.workers threads.
EigTrialsResult run_eigenvalue_trials(const ExperimentConfig& cfg);

void write_eig_traces_csv(std::ostream& out, const EigTrialsResult& r);
void write_eig_summary_csv(std::ostream& out, const EigTrialsResult& r);

// ---- timing benchmark ----

struct TimingRow {
  std::string env;  // e.g. "20x20/T=400/tau=100/steps=1000"
  std::string method;
  int updates = 0;  // timed updates (warmup excluded)
  double seconds_without_eig = 0.0;
  double seconds_with_eig = 0.0;
};

/// Damped-oscillation field with N(0, bench_noise) noise on each bench env.
/// Per update, "without eig" times the data update plus the reduced operator
/// (batch: SVD + operator; general: SVD update + operator; long-term: the
/// Woodbury update) and "with eig" times the update plus full model
/// extraction. The first update of every run is a discarded warmup. Batch uses
/// the relative-threshold rank (the pseudoinverse operator), general a fixed
/// rank bench_general_rank.
std::vector<TimingRow> run_timing_benchmark(const ExperimentConfig& cfg);

void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows);

// ---- forgetting-factor comparison ----

struct ForgettingRow {
  double gamma = 1.0;
  int trial = 0;
  double error_switch = 0.0;      // regime-switch stream
  double error_stationary = 0.0;  // same stream without the switch
  double error_stationary_batch = 0.0;  // pseudoinverse operator on the stationary stream
};

/// Long-term method on x(k+1) = A(k) x(k) + w(k) over a small grid, where A is
/// symmetric with random orthonormal eigenvectors, dominant eigenvalue
/// forgetting_before until switch_step and forgetting_after from then on
/// (2 * switch_step steps in total), other eigenvalues in [0.2, 0.5], and w
/// i.i.d. N(0, process_noise^2). Initialized on the first 2N pairs, updated
/// every update_every steps. Error is |omega_hat - omega_true| where omega_hat
/// is the continuous eigenvalue of the estimated operator closest to the true
/// final dominant eigenvalue. The batch column uses the pseudoinverse operator
/// of every stationary pair and does not depend on gamma.
std::vector<ForgettingRow> run_forgetting_comparison(const ExperimentConfig& cfg);

void write_forgetting_csv(std::ostream& out, const std::vector<ForgettingRow>& rows);

/// Linear-interpolation quantile (type 7) of unsorted data.
double quantile(std::vector<double> v, double q);

}  // namespace hetsense
