// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "hetsense/config.hpp"
#include "hetsense/coverage.hpp"
#include "hetsense/dmd.hpp"
#include "hetsense/error.hpp"
#include "hetsense/experiments.hpp"
#include "hetsense/gappy.hpp"
#include "hetsense/generators.hpp"
#include "hetsense/linalg.hpp"
#include "hetsense/online.hpp"
#include "hetsense/placement.hpp"
#include "hetsense/random.hpp"
#include "hetsense/scenario.hpp"

using namespace hetsense;
using cd = std::complex<double>;

namespace {

// ---- pinned tolerances and budgets ----

constexpr double kExactEigTol = 1e-8;        // criterion 1, continuous eigenvalues
constexpr double kExactReconTol = 1e-8;      // criterion 1, relative per snapshot
constexpr double kOperatorTol = 1e-8;        // criterion 2, relative Frobenius
constexpr double kSvdTol = 1e-8;             // criterion 3, sigma / angles / orthonormality
constexpr double kGappyTol = 1e-8;           // criterion 5, relative reconstruction
constexpr double kMonotoneSlack = 1e-9;      // criterion 5, log-det rounding slack
constexpr double kOptimumSlack = 1e-9;       // criterion 6, greedy <= optimum
constexpr double kLloydSlack = 1e-12;        // criterion 7, relative cost increase
constexpr double kCentroidTol = 1e-6;        // criterion 7, strip centroids

// Criterion 4: half-widths of the band around -1 for the median dominant
// Re(omega) after t = 5 s, per noise variance. Frozen from batch calibration
// runs (seed 101, 10 trials per variance) as 1.5 x the calibrated batch
// |median + 1| plus the calibrated batch IQR, floored at 0.15.
constexpr double kTrackingVariances[] = {0.01, 0.04, 0.1};
constexpr double kTrackingBand[] = {0.15, 0.15, 0.15};
constexpr double kTrackingSignalScale = 50.0;
constexpr int kTrackingRank = 4;

// Criterion 6: floor on (greedy - worst) / (best - worst) of the log-det
// objective. Calibrated once against the exhaustive oracle on three seed sets
// disjoint from the ones below (720 runs, minimum 0.686, all low cases at
// k = 1 with a single region and rank 3) and rounded down to 0.05.
constexpr double kPlacementFloor = 0.65;

// Criteria 9 and 10: required successes out of 10 seeded trials.
constexpr int kRequiredOf10 = 8;

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// ---- criterion 1 ----

struct LtiCase {
  int width, height;
  std::vector<cd> eigs;
  double dt;
  int steps;
};

Outcome exact_recovery() {
  const std::vector<LtiCase> cases{
      {20, 20, {{-1.0, 0.0}, {-0.5, 3.0}, {-0.2, 6.0}, {-2.0, 0.0}}, 0.05, 200},
      {10, 10, {{-0.1, 2.0}, {-0.3, 5.0}, {-0.7, 0.0}}, 0.1, 80},
      {6, 5, {{-0.5, 0.0}}, 0.1, 30},
      {15, 12, {{0.0, 1.0}, {-0.05, 0.0}}, 0.2, 150},
      {8, 8, {{0.3, 0.0}, {-0.4, 2.5}, {-1.5, 0.0}, {-0.8, 7.0}}, 0.02, 300},
  };
  double worst_eig = 0.0, worst_recon = 0.0;
  bool ranks_ok = true;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& lc = cases[c];
    const Workspace ws(lc.width, lc.height);
    const SnapshotSeries s = gen_lti_field(ws, lc.eigs, 100 + c, lc.steps, lc.dt);
    const DmdModel m = fit_dmd(make_pair(s), RankPolicy::relative(1e-10));
    Index expected_rank = 0;
    for (const cd& e : lc.eigs) expected_rank += e.imag() == 0.0 ? 1 : 2;
    ranks_ok = ranks_ok && m.rank() == expected_rank;
    const Eigen::VectorXcd omega = continuous_eigenvalues(m);
    for (const cd& e : lc.eigs)
      for (const cd& target : {e, std::conj(e)}) {
        double best = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < omega.size(); ++i) best = std::min(best, std::abs(omega[i] - target));
        worst_eig = std::max(worst_eig, best);
      }
    for (int k = 0; k <= lc.steps; ++k) {
      const Eigen::VectorXd& x = s.snapshots[std::size_t(k)].values;
      worst_recon = std::max(worst_recon, (reconstruct(m, k) - x).norm() / x.norm());
    }
  }
  return {ranks_ok && worst_eig <= kExactEigTol && worst_recon <= kExactReconTol,
          std::to_string(cases.size()) + " fields, max eigenvalue error " + fmt(worst_eig) +
              ", max reconstruction error " + fmt(worst_recon) +
              (ranks_ok ? "" : ", rank mismatch")};
}

// ---- criteria 2 and 3 ----

Eigen::MatrixXd gaussian(Rng& rng, Index rows, Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

Outcome operator_equivalence() {
  double worst = 0.0;
  int updates = 0;
  for (int s = 0; s < 50; ++s) {
    Rng rng(derive_seed(2, std::uint64_t(s)));
    const Index n = 3 + rng.uniform_int(0, 17);
    const Index init = n + rng.uniform_int(0, 10);
    const Index total = init + rng.uniform_int(20, 80);
    const Eigen::MatrixXd a = gaussian(rng, n, n) / std::sqrt(double(n));
    const Eigen::MatrixXd x = gaussian(rng, n, total);
    const Eigen::MatrixXd y = a * x + 0.1 * gaussian(rng, n, total);
    LongTermOnlineState st = init_longterm({x.leftCols(init), y.leftCols(init), 0.1}, 1.0);
    for (Index k = init; k < total;) {
      const Index width = std::min<Index>(rng.uniform_int(1, 15), total - k);
      update_longterm(st, x.middleCols(k, width), y.middleCols(k, width));
      k += width;
      ++updates;
      const Eigen::MatrixXd ref = batch_operator(x.leftCols(k), y.leftCols(k));
      worst = std::max(worst, (st.a - ref).norm() / ref.norm());
    }
  }
  return {worst <= kOperatorTol,
          "50 streams, " + std::to_string(updates) + " updates, max relative error " + fmt(worst)};
}

Outcome svd_equivalence() {
  double worst_sigma = 0.0, worst_angle = 0.0, worst_orth = 0.0;
  int updates = 0;
  bool ranks_ok = true;
  for (int s = 0; s < 50; ++s) {
    Rng rng(derive_seed(3, std::uint64_t(s)));
    const Index n = 4 + rng.uniform_int(0, 16);
    const Index total = 40 + rng.uniform_int(0, 20);
    // Every third sequence has exactly rank-3 data so truncation is exercised.
    const bool low_rank = s % 3 == 0;
    const Eigen::MatrixXd x =
        low_rank ? Eigen::MatrixXd(gaussian(rng, n, 3) * gaussian(rng, 3, total))
                 : gaussian(rng, n, total);
    const Eigen::MatrixXd y = gaussian(rng, n, total);
    const Index init = 3 + rng.uniform_int(0, 7);
    GeneralOnlineState st =
        init_general({x.leftCols(init), y.leftCols(init), 0.1}, RankPolicy::relative(1e-10));
    for (Index k = init; k < total;) {
      const Index width = std::min<Index>(rng.uniform_int(1, 6), total - k);
      update_general(st, x.middleCols(k, width), y.middleCols(k, width));
      k += width;
      ++updates;
      Eigen::JacobiSVD<Eigen::MatrixXd> ref(x.leftCols(k), Eigen::ComputeThinU);
      const Eigen::VectorXd& sv = ref.singularValues();
      Index r = 0;
      while (r < sv.size() && sv[r] > 1e-10 * sv[0]) ++r;
      if (st.rank() != r) {
        ranks_ok = false;
        continue;
      }
      worst_sigma = std::max(worst_sigma, (st.sigma - sv.head(r)).cwiseAbs().maxCoeff() / sv[0]);
      worst_angle = std::max(worst_angle,
                             linalg::max_principal_angle(st.u, ref.matrixU().leftCols(r)));
      worst_orth = std::max({worst_orth, linalg::orthonormality_error(st.u),
                             linalg::orthonormality_error(st.w)});
    }
  }
  const bool pass = ranks_ok && worst_sigma <= kSvdTol && worst_angle <= kSvdTol &&
                    worst_orth <= kSvdTol;
  return {pass, "50 sequences, " + std::to_string(updates) + " updates, max sigma error " +
                    fmt(worst_sigma) + ", max angle " + fmt(worst_angle) +
                    ", max orthonormality error " + fmt(worst_orth) +
                    (ranks_ok ? "" : ", rank mismatch")};
}

// ---- criterion 4 ----

Outcome tracking_trials() {
  ExperimentConfig cfg;
  cfg.generator = "lti";
  cfg.lti_eigs = {{-1.0, 0.0}};
  cfg.full_width = 20;
  cfg.full_height = 20;
  cfg.T_total = 1000;
  cfg.dt = 0.01;
  cfg.init_T = 400;
  cfg.update_every = 10;
  cfg.variances.assign(std::begin(kTrackingVariances), std::end(kTrackingVariances));
  cfg.trials = 10;
  cfg.rank = kTrackingRank;
  cfg.signal_scale = kTrackingSignalScale;
  cfg.trial_anchor = "initial";
  cfg.summary_after = 5.0;
  cfg.seed = 2024;
  const EigTrialsResult r = run_eigenvalue_trials(cfg);

  bool in_band = true, monotone = true;
  std::ostringstream detail;
  for (const auto& method : kMethods) {
    detail << method << " median/IQR";
    double prev_iqr = -1.0;
    for (std::size_t v = 0; v < std::size(kTrackingVariances); ++v) {
      const EigSummary& s = r.summary(method, kTrackingVariances[v]);
      in_band = in_band && std::abs(s.median_re + 1.0) <= kTrackingBand[v];
      monotone = monotone && s.iqr_re() > prev_iqr;
      prev_iqr = s.iqr_re();
      detail << ' ' << fmt(s.median_re) << '/' << fmt(s.iqr_re());
    }
    detail << "; ";
  }
  detail << (in_band ? "medians in band" : "median outside band") << ", "
         << (monotone ? "IQR increasing" : "IQR not increasing");
  return {in_band && monotone, detail.str()};
}

// ---- criterion 5 ----

Outcome gappy_suite() {
  double worst = 0.0;
  int monotone_failures = 0;
  for (int c = 0; c < 200; ++c) {
    Rng rng(derive_seed(5, std::uint64_t(c)));
    const Index n = 10 + rng.uniform_int(0, 30);
    const Index pairs = 1 + rng.uniform_int(0, 3);
    const Eigen::MatrixXd re = gaussian(rng, n, pairs), im = gaussian(rng, n, pairs);
    DmdModel m;
    m.modes.resize(n, 2 * pairs);
    m.modes << re.cast<cd>() + cd(0, 1) * im.cast<cd>(), re.cast<cd>() - cd(0, 1) * im.cast<cd>();
    m.eigenvalues = Eigen::VectorXcd::Ones(2 * pairs);
    m.amplitudes = Eigen::VectorXcd::Zero(2 * pairs);
    Eigen::VectorXcd a(2 * pairs);
    for (Index i = 0; i < pairs; ++i) {
      a[i] = cd(rng.normal(), rng.normal());
      a[pairs + i] = std::conj(a[i]);
    }
    const Eigen::VectorXd x = (m.modes * a).real();

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index(0));
    for (Index i = n - 1; i > 0; --i) std::swap(order[std::size_t(i)], order[std::size_t(rng.uniform_int(0, i))]);
    const Index picked = 2 * pairs + rng.uniform_int(0, 4);
    const ObservationSet obs({order.begin(), order.begin() + picked}, n);
    const FieldSnapshot est = reconstruct_full(m, obs, observe({x, 0.0}, obs));
    worst = std::max(worst, (est.values - x).norm() / x.norm());

    double prev = -std::numeric_limits<double>::infinity();
    for (Index k = 1; k <= n; ++k) {
      const double v = placement_objective(m, ObservationSet({order.begin(), order.begin() + k}, n));
      if (v < prev - kMonotoneSlack * std::max(1.0, std::abs(prev))) ++monotone_failures;
      prev = v;
    }
  }
  return {worst <= kGappyTol && monotone_failures == 0,
          "200 cases, max relative error " + fmt(worst) + ", monotonicity violations " +
              std::to_string(monotone_failures)};
}

// ---- criterion 6 ----

Outcome placement_suite() {
  int runs = 0, disjoint_failures = 0, optimum_failures = 0, point_failures = 0;
  double min_ratio = 1.0, sum_ratio = 0.0;
  for (int width : {6, 8}) {
    const Workspace ws(width, width);
    for (int k : {0, 1}) {
      std::size_t min_members = std::numeric_limits<std::size_t>::max();
      for (const auto& c : enumerate_candidates(ws, k)) min_members = std::min(min_members, c.members.size());
      for (Index count : {1, 2}) {
        // Largest rank that some disjoint tuple can observe in full.
        const Index max_rank = std::min<Index>(4, count * Index(min_members));
        for (int inst = 0; inst < 30; ++inst) {
          Rng rng(derive_seed(6, std::uint64_t(inst)));
          const Index r = 1 + inst % max_rank;
          DmdModel m;
          m.modes = gaussian(rng, ws.size(), r).cast<cd>() + cd(0, 1) * gaussian(rng, ws.size(), r).cast<cd>();
          m.eigenvalues = Eigen::VectorXcd::Ones(r);
          m.amplitudes = Eigen::VectorXcd::Zero(r);

          const Placement g = block_pivoted_qr_modes(m.modes, ws, k, count);
          ++runs;
          std::set<Index> seen;
          for (const auto& reg : g.regions)
            for (Index i : reg.members)
              if (!seen.insert(i).second) ++disjoint_failures;
          if (Index(g.regions.size()) != count) ++disjoint_failures;

          if (k == 0) {
            const auto points = pivoted_qr_points(m.modes * m.modes.adjoint(), count);
            for (std::size_t i = 0; i < g.regions.size(); ++i)
              if (g.regions[i].center_index != points[i]) ++point_failures;
          }

          const BruteForceResult bf = brute_force_placement(m, ws, k, count);
          const double og = placement_objective(m, g.observations(ws.size()));
          if (og > bf.best_objective + kOptimumSlack * std::max(1.0, std::abs(bf.best_objective)))
            ++optimum_failures;
          double ratio = 1.0;
          if (!std::isfinite(og))
            ratio = 0.0;
          else if (bf.best_objective - bf.worst_objective > 1e-12)
            ratio = (og - bf.worst_objective) / (bf.best_objective - bf.worst_objective);
          min_ratio = std::min(min_ratio, ratio);
          sum_ratio += ratio;
        }
      }
    }
  }
  const bool pass = disjoint_failures == 0 && optimum_failures == 0 && point_failures == 0 &&
                    min_ratio >= kPlacementFloor;
  return {pass, std::to_string(runs) + " runs, normalized log-det ratio min " + fmt(min_ratio) +
                    " mean " + fmt(sum_ratio / runs) + " (floor " + fmt(kPlacementFloor) +
                    "), overlap " + std::to_string(disjoint_failures) + ", above optimum " +
                    std::to_string(optimum_failures) + ", k=0 mismatches " +
                    std::to_string(point_failures)};
}

// ---- criterion 7 ----

Outcome lloyd_suite() {
  int increases = 0;
  for (int c = 0; c < 100; ++c) {
    Rng rng(derive_seed(7, std::uint64_t(c)));
    const Workspace ws(3 + int(rng.uniform_int(0, 17)), 3 + int(rng.uniform_int(0, 17)),
                       0.5 + rng.uniform());
    Eigen::VectorXd w(ws.size());
    for (Index i = 0; i < ws.size(); ++i) w[i] = std::pow(rng.uniform(), 3.0) + 1e-3;
    const auto cfg = random_configuration(ws, std::size_t(1 + rng.uniform_int(0, 5)),
                                          derive_seed(70, std::uint64_t(c)));
    const LloydResult r = lloyd(ws, cfg, DensityMap(w), 100, 1e-6);
    for (std::size_t k = 1; k < r.costs.size(); ++k)
      if (r.costs[k] > r.costs[k - 1] * (1.0 + kLloydSlack)) ++increases;
  }
  RobotConfiguration strip{{{0.0, 0.0}, {9.0, 0.0}}};
  const LloydResult s = lloyd(Workspace(10, 1), strip, DensityMap::uniform(10), 100, 1e-7);
  const double e0 = std::abs(s.config.positions[0].x() - 2.0);
  const double e1 = std::abs(s.config.positions[1].x() - 7.0);
  return {increases == 0 && e0 <= kCentroidTol && e1 <= kCentroidTol,
          "100 cases, cost increases " + std::to_string(increases) + ", strip centroids " +
              fmt(s.config.positions[0].x()) + ", " + fmt(s.config.positions[1].x())};
}

// ---- criterion 8 ----

Outcome timing_table() {
  ExperimentConfig cfg;  // default bench_envs are the four table environments
  cfg.seed = 8;
  cfg.bench_repeats = 3;
  const auto rows = run_timing_benchmark(cfg);
  auto find = [&](const std::string& env, const std::string& method) -> const TimingRow& {
    for (const auto& r : rows)
      if (r.env == env && r.method == method) return r;
    throw Error("missing timing row " + env + " " + method);
  };
  const std::string big = "20x20/T=400/tau=100/steps=1000";
  const std::string wide = "20x10/T=200/tau=100/steps=2000";
  const TimingRow &bb = find(big, "batch"), &bg = find(big, "general"), &bl = find(big, "longterm");
  const TimingRow &wg = find(wide, "general"), &wl = find(wide, "longterm");
  const bool a = bg.seconds_with_eig < bb.seconds_with_eig && bl.seconds_with_eig < bb.seconds_with_eig;
  const bool b = bg.seconds_with_eig < bl.seconds_with_eig;
  const bool c = wl.seconds_without_eig < wg.seconds_without_eig;
  std::ostringstream d;
  d << "20x20 with eig: batch " << fmt(bb.seconds_with_eig) << " s, general "
    << fmt(bg.seconds_with_eig) << " s, long-term " << fmt(bl.seconds_with_eig)
    << " s; 20x10 without eig: general " << fmt(wg.seconds_without_eig) << " s, long-term "
    << fmt(wl.seconds_without_eig) << " s; (a) " << (a ? "ok" : "no") << " (b) "
    << (b ? "ok" : "no") << " (c) " << (c ? "ok" : "no");
  return {a && b && c, d.str()};
}

// ---- criterion 9 ----

Outcome forgetting() {
  ExperimentConfig cfg;
  cfg.trials = 10;
  cfg.gammas = {0.9, 1.0};
  cfg.seed = 9;
  const auto rows = run_forgetting_comparison(cfg);
  int wins = 0;
  double mean09 = 0.0, mean10 = 0.0;
  for (int t = 0; t < 10; ++t) {
    const double e09 = rows[std::size_t(t)].error_switch;
    const double e10 = rows[std::size_t(10 + t)].error_switch;
    wins += e09 <= e10;
    mean09 += e09 / 10;
    mean10 += e10 / 10;
  }
  return {wins >= kRequiredOf10, "gamma 0.9 error <= gamma 1 error in " + std::to_string(wins) +
                                     "/10 trials (mean " + fmt(mean09) + " vs " + fmt(mean10) + ")"};
}

// ---- criterion 10 ----

Outcome heterogeneity_ablation() {
  int het_wins = 0, mv_worst = 0;
  double het = 0.0, av = 0.0, mv = 0.0;
  for (int t = 0; t < 10; ++t) {
    ExperimentConfig cfg;  // damped oscillation on 32 x 64
    cfg.noise_variance = 0.01;
    cfg.mv_baseline = "random";
    cfg.seed = derive_seed(10, std::uint64_t(t));
    const ScenarioResult r = run_scenario(cfg);
    const double h = final_third_mean(r.records, &MetricsRecord::mse_heterogeneous);
    const double a = final_third_mean(r.records, &MetricsRecord::mse_av_only);
    const double m = final_third_mean(r.records, &MetricsRecord::mse_mv_only);
    het_wins += h <= a;
    mv_worst += m > h && m > a;
    het += h / 10;
    av += a / 10;
    mv += m / 10;
  }
  return {het_wins >= kRequiredOf10 && mv_worst >= kRequiredOf10,
          "heterogeneous <= av-only in " + std::to_string(het_wins) +
              "/10, mv-only worst in " + std::to_string(mv_worst) + "/10 (mean MSE " + fmt(het) +
              " / " + fmt(av) + " / " + fmt(mv) + ")"};
}

// ---- criterion 11 ----

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Keeps the first `keep` comma-separated fields of every line.
std::string leading_columns(const std::string& text, int keep) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    std::size_t end = 0;
    for (int f = 0; f < keep && end != std::string::npos; ++f)
      end = line.find(',', f == 0 ? 0 : end + 1);
    out += line.substr(0, end) + '\n';
  }
  return out;
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hetsense_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path config = dir / "config.json";
  std::ofstream(config) << R"({
  "generator": "lti", "lti_eigs": [[-1.0, 0.0], [-0.5, 3.0]],
  "full_width": 12, "full_height": 8, "av_space_step": 2, "mv_space_step": 2,
  "T_total": 60, "init_T": 20, "update_every": 10, "mv_time_step": 5,
  "noise_variance": 0.05, "beta": 0.3, "sensing_radius": 1, "mv_count": 2, "rank": 3,
  "trials": 2, "variances": [0.01, 0.1], "signal_scale": 5.0,
  "switch_step": 40, "forgetting_width": 3, "forgetting_height": 3,
  "bench_envs": [{"width": 4, "height": 4, "init_T": 20, "tau": 10, "steps": 60}],
  "bench_general_rank": 3
})";

  struct Command {
    std::string name, args, file;
    int keep_columns;  // 0: compare whole file
  };
  const std::vector<Command> commands{
      {"generate", "generate --out {}", "series.csv", 0},
      {"scenario", "scenario --no-timing -o {}", "metrics.csv", 0},
      {"scenario-random", "scenario --no-timing --mv_baseline=random -o {}", "metrics_random.csv", 0},
      {"eigtrials", "eigtrials --full_width=4 --full_height=4 --init_T=30 --T_total=80 -o {}",
       "traces.csv", 0},
      {"forgetting", "forgetting -o {}", "forgetting.csv", 0},
      {"bench", "bench -o {}", "bench.csv", 3},
  };
  std::vector<std::string> failed;
  for (const auto& c : commands) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / (std::to_string(run) + "_" + c.file);
      std::string args = c.args;
      args.replace(args.find("{}"), 2, "\"" + out.string() + "\"");
      const std::string cmd = std::string("\"") + HETSENSE_CLI + "\" " + args + " --config \"" +
                              config.string() + "\" --seed 77 > \"" +
                              (dir / "log.txt").string() + "\" 2>&1";
      if (std::system(cmd.c_str()) != 0 || !fs::exists(out)) {
        failed.push_back(c.name + " (run failed)");
        break;
      }
      outputs[run] = c.keep_columns ? leading_columns(slurp(out), c.keep_columns) : slurp(out);
    }
    if (outputs[0].empty() || outputs[0] != outputs[1]) failed.push_back(c.name);
  }
  std::string detail = std::to_string(commands.size()) + " commands run twice with seed 77";
  if (failed.empty()) return {true, detail + ", outputs byte-identical"};
  for (const auto& f : failed) detail += ", differs: " + f;
  return {false, detail};
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

// With arguments, runs only the listed criterion numbers.
int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<Criterion> criteria{
      {1, "exact recovery", 10, exact_recovery},
      {2, "online/batch operator equivalence", 30, operator_equivalence},
      {3, "incremental SVD equivalence", 30, svd_equivalence},
      {4, "eigenvalue tracking at full scale", 600, tracking_trials},
      {5, "gappy reconstruction properties", 10, gappy_suite},
      {6, "placement against exhaustive search", 120, placement_suite},
      {7, "Lloyd coverage", 10, lloyd_suite},
      {8, "timing orderings", 900, timing_table},
      {9, "forgetting factor", 120, forgetting},
      {10, "heterogeneity ablation", 300, heterogeneity_ablation},
      {11, "determinism", 300, determinism},
  };
  int failures = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    ++ran;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = seconds < c.budget_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("[%s] criterion %d %s: %s; runtime %.1f s (budget %.0f s%s)\n",
                pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(), seconds,
                c.budget_seconds, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failures, ran);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
