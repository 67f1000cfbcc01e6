#include "hetsense/scenario.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "hetsense/coverage.hpp"
#include "hetsense/error.hpp"
#include "hetsense/fusion.hpp"
#include "hetsense/gappy.hpp"
#include "hetsense/generators.hpp"
#include "hetsense/matrix_io.hpp"
#include "hetsense/online.hpp"
#include "hetsense/random.hpp"

namespace hetsense {
namespace {

// Seed streams.
enum : std::uint64_t {
  kModes = 1,
  kAvNoise = 2,
  kMvNoise = 3,
  kMvInit = 4,
  kMvOnlyPlacement = 5,
  kAvInit = 6,
  kMvOnlyNoise = 7,
};

/// Ground truth on the full grid, downsampled on demand.
class Truth {
 public:
  explicit Truth(const ExperimentConfig& cfg) : cfg_(cfg), ws_(cfg.full_workspace()) {
    if (cfg.generator == "lti") {
      series_ = gen_lti_field(ws_, cfg.lti_eigenvalues(), derive_seed(cfg.seed, kModes),
                              cfg.T_total, cfg.dt);
    } else if (cfg.generator == "external_series") {
      series_ = read_series(cfg.series_path);
      require(series_->dimension() == ws_.size(),
              "external series has " + std::to_string(series_->dimension()) +
                  " points, the full grid has " + std::to_string(ws_.size()));
      require(Index(series_->size()) >= Index(cfg.T_total) + 1,
              "external series is shorter than T_total + 1 snapshots");
    }
  }

  Eigen::VectorXd on(int step, int k) const {
    const FieldSnapshot full = at(k);
    return downsample(full, ws_, step, step).first.values;
  }

 private:
  FieldSnapshot at(int k) const {
    FieldSnapshot s = series_ ? series_->snapshots[std::size_t(k)]
                              : gen_damped_oscillation(ws_, k * cfg_.dt);
    s.values *= cfg_.signal_scale;
    return s;
  }

  const ExperimentConfig& cfg_;
  Workspace ws_;
  std::optional<SnapshotSeries> series_;
};

Eigen::VectorXd noisy(const Eigen::VectorXd& v, double variance, std::uint64_t seed) {
  return inject_noise(FieldSnapshot{v, 0.0}, variance, seed).values;
}

/// Re(Phi Lambda^s alpha) for a possibly fractional number of model steps.
Eigen::VectorXd predict(const DmdModel& m, double steps) {
  Eigen::VectorXcd coeff(m.rank());
  for (Index i = 0; i < m.rank(); ++i)
    coeff[i] = std::pow(m.eigenvalues[i], steps) * m.amplitudes[i];
  return (m.modes * coeff).real();
}

std::string describe(const Placement& p, const Workspace& ws) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.regions.size(); ++i) {
    const GridPoint c = ws.point_of(p.regions[i].center_index);
    if (i) os << '|';
    os << c.x << ':' << c.y;
  }
  return os.str();
}

/// Marine-only baseline: its own model, fit on marine estimates alone.
class MvOnlyPipeline {
 public:
  MvOnlyPipeline(const ExperimentConfig& cfg, Index n) : cfg_(cfg), n_(n) {}

  void sense(int k, const Placement& placement, const Eigen::VectorXd& truth) {
    const ObservationSet obs = placement.observations(n_);
    const Eigen::VectorXd x_l =
        noisy(observe({truth, 0.0}, obs), cfg_.noise_variance,
              derive_seed(derive_seed(cfg_.seed, kMvOnlyNoise), std::uint64_t(k)));
    Eigen::VectorXd est = Eigen::VectorXd::Zero(n_);
    if (model_ && obs.select_rows(model_->modes).cwiseAbs().maxCoeff() > 0.0) {
      est = reconstruct_full(*model_, obs, x_l).values;
    } else {
      for (Index i = 0; i < obs.size(); ++i) est[obs.indices()[std::size_t(i)]] = x_l[i];
    }
    stream_.push_back(est);
    last_time_ = k;
    if (stream_.size() >= 2) refit();
  }

  Eigen::VectorXd estimate(int k) const {
    require(!stream_.empty(), "mv-only pipeline has no data yet");
    if (!model_ || k == last_time_) return stream_.back();
    return predict(*model_, double(k - last_time_) / cfg_.mv_time_step);
  }

 private:
  void refit() {
    const Index t = Index(stream_.size()) - 1;
    Eigen::MatrixXd x(n_, t), y(n_, t);
    for (Index j = 0; j < t; ++j) {
      x.col(j) = stream_[std::size_t(j)];
      y.col(j) = stream_[std::size_t(j + 1)];
    }
    if (x.cwiseAbs().maxCoeff() == 0.0) return;
    const DmdModel m = fit_dmd({x, y, cfg_.dt * cfg_.mv_time_step}, cfg_.rank_policy());
    model_ = reanchor(m, stream_.back());
  }

  const ExperimentConfig& cfg_;
  Index n_;
  std::vector<Eigen::VectorXd> stream_;
  std::optional<DmdModel> model_;
  int last_time_ = -1;
};

/// Heterogeneous model in whichever online form the config selects.
class ModelEngine {
 public:
  ModelEngine(const ExperimentConfig& cfg, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y)
      : cfg_(cfg) {
    const SnapshotPair pair{x, y, cfg.dt};
    if (cfg.method == "general") {
      general_ = init_general(pair, cfg.rank_policy());
      general_->time_stride = cfg.time_stride;
    } else if (cfg.method == "longterm") {
      longterm_ = init_longterm(pair, cfg.gamma);
    } else {
      x_acc_ = x;
      y_acc_ = y;
    }
  }

  void update(const Eigen::MatrixXd& x_new, const Eigen::MatrixXd& y_new) {
    if (general_) {
      update_general(*general_, x_new, y_new);
    } else if (longterm_) {
      update_longterm(*longterm_, x_new, y_new);
    } else {
      const Index t = x_acc_.cols();
      x_acc_.conservativeResize(Eigen::NoChange, t + x_new.cols());
      y_acc_.conservativeResize(Eigen::NoChange, t + y_new.cols());
      x_acc_.rightCols(x_new.cols()) = x_new;
      y_acc_.rightCols(y_new.cols()) = y_new;
    }
  }

  DmdModel model(const Eigen::VectorXd& anchor) const {
    if (general_) return general_model(*general_, anchor);
    if (longterm_) return longterm_model(*longterm_, anchor);
    return reanchor(batch_baseline(x_acc_, y_acc_, cfg_.dt, cfg_.rank_policy()), anchor);
  }

 private:
  const ExperimentConfig& cfg_;
  std::optional<GeneralOnlineState> general_;
  std::optional<LongTermOnlineState> longterm_;
  Eigen::MatrixXd x_acc_, y_acc_;
};

}  // namespace

ScenarioResult run_scenario(const ExperimentConfig& cfg) {
  cfg.validate();
  const Workspace mv_ws = cfg.mv_workspace();
  const Workspace av_ws = cfg.av_workspace();
  const Index n = mv_ws.size();
  const Truth truth(cfg);

  Placement placement = random_placement(mv_ws, cfg.sensing_radius, cfg.mv_count,
                                         derive_seed(cfg.seed, kMvInit));
  RobotConfiguration av_cfg = random_configuration(mv_ws, std::size_t(cfg.av_count),
                                                   derive_seed(cfg.seed, kAvInit));
  av_cfg = lloyd(mv_ws, av_cfg, DensityMap::uniform(n), cfg.lloyd_max_iters, cfg.lloyd_tol)
               .config;

  Eigen::VectorXd av_last;
  auto av_estimate = [&](int k) {
    if (k % cfg.av_time_step == 0 || av_last.size() == 0) {
      const FieldSnapshot raw{truth.on(cfg.av_space_step, k), k * cfg.dt};
      const FieldSnapshot sensed =
          av_sense(raw, av_ws, av_cfg, cfg.av_sigma0(), cfg.beta,
                   derive_seed(derive_seed(cfg.seed, kAvNoise), std::uint64_t(k)));
      av_last = bilinear_upsample(sensed, av_ws, mv_ws, cfg.alignment()).values;
    }
    return av_last;
  };

  MvOnlyPipeline mv_only(cfg, n);
  auto mv_only_placement = [&](int k) {
    if (cfg.mv_baseline == "optimal") return placement;
    return random_placement(mv_ws, cfg.sensing_radius, cfg.mv_count,
                            derive_seed(derive_seed(cfg.seed, kMvOnlyPlacement),
                                        std::uint64_t(k)));
  };

  // Av-only warm-up stream and the initial model.
  Eigen::MatrixXd combined(n, cfg.T_total + 1);
  for (int k = 0; k <= cfg.init_T; ++k) {
    combined.col(k) = av_estimate(k);
    if (k % cfg.mv_time_step == 0) mv_only.sense(k, mv_only_placement(k), truth.on(cfg.mv_space_step, k));
  }
  ModelEngine engine(cfg, combined.leftCols(cfg.init_T), combined.middleCols(1, cfg.init_T));
  DmdModel model = engine.model(combined.col(cfg.init_T));

  ScenarioResult result;
  result.model_workspace = mv_ws;
  for (int k_prev = cfg.init_T; k_prev < cfg.T_total;) {
    const int k_next = std::min(k_prev + cfg.update_every, cfg.T_total);
    const int width = k_next - k_prev;

    SnapshotSeries av_window;
    av_window.dt = cfg.dt;
    std::map<Index, FieldSnapshot> mv_window;
    for (int k = k_prev + 1; k <= k_next; ++k) {
      const Eigen::VectorXd truth_k = truth.on(cfg.mv_space_step, k);
      av_window.snapshots.push_back({av_estimate(k), k * cfg.dt});
      if (k % cfg.mv_time_step == 0) {
        const ObservationSet obs = placement.observations(n);
        const Eigen::VectorXd x_l =
            noisy(observe({truth_k, 0.0}, obs), cfg.noise_variance,
                  derive_seed(derive_seed(cfg.seed, kMvNoise), std::uint64_t(k)));
        mv_window[k - k_prev - 1] = reconstruct_full(model, obs, x_l, k * cfg.dt);
        mv_only.sense(k, mv_only_placement(k), truth_k);
      }
    }
    const SnapshotSeries window = assemble_combined(av_window, mv_window);
    for (int j = 0; j < width; ++j)
      combined.col(k_prev + 1 + j) = window.snapshots[std::size_t(j)].values;

    const auto start = std::chrono::steady_clock::now();
    engine.update(combined.middleCols(k_prev, width), combined.middleCols(k_prev + 1, width));
    model = engine.model(combined.col(k_next));
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    placement = block_pivoted_qr_modes(model.modes, mv_ws, cfg.sensing_radius, cfg.mv_count);
    av_cfg = lloyd(mv_ws, av_cfg, density_from_temporal(model, cfg.density_exponent),
                   cfg.lloyd_max_iters, cfg.lloyd_tol)
                 .config;

    const FieldSnapshot truth_now{truth.on(cfg.mv_space_step, k_next), k_next * cfg.dt};
    MetricsRecord rec;
    rec.time_index = k_next;
    rec.time = k_next * cfg.dt;
    rec.mse_heterogeneous = mse({reconstruct(model, 0), rec.time}, truth_now);
    rec.mse_av_only = mse({av_window.snapshots.back().values, rec.time}, truth_now);
    rec.mse_mv_only = mse({mv_only.estimate(k_next), rec.time}, truth_now);
    const std::complex<double> lambda = model.eigenvalues[0];
    if (std::abs(lambda) > 0.0) {
      const std::complex<double> omega = std::log(lambda) / cfg.dt;
      rec.eig_re = omega.real();
      rec.eig_im = omega.imag();
    } else {
      rec.eig_re = rec.eig_im = std::numeric_limits<double>::quiet_NaN();
    }
    rec.model_rank = model.rank();
    rec.placement = describe(placement, mv_ws);
    rec.update_seconds = seconds;
    result.records.push_back(std::move(rec));
    k_prev = k_next;
  }
  result.final_model = std::move(model);
  result.final_placement = std::move(placement);
  return result;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRecord>& records,
                       bool include_timing) {
  out << "time_index,time,mse_heterogeneous,mse_av_only,mse_mv_only,eig_re,eig_im,rank,"
         "placement";
  if (include_timing) out << ",update_seconds";
  out << '\n';
  const auto old_precision = out.precision(17);
  for (const auto& r : records) {
    out << r.time_index << ',' << r.time << ',' << r.mse_heterogeneous << ',' << r.mse_av_only
        << ',' << r.mse_mv_only << ',' << r.eig_re << ',' << r.eig_im << ',' << r.model_rank
        << ',' << r.placement;
    if (include_timing) out << ',' << r.update_seconds;
    out << '\n';
  }
  out.precision(old_precision);
}

double final_third_mean(const std::vector<MetricsRecord>& records,
                        double MetricsRecord::*field) {
  require(!records.empty(), "no records");
  const std::size_t start = records.size() - std::max<std::size_t>(records.size() / 3, 1);
  double total = 0.0;
  for (std::size_t i = start; i < records.size(); ++i) total += records[i].*field;
  return total / double(records.size() - start);
}

}  // namespace hetsense
