#include "hetsense/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include <Eigen/QR>

#include "hetsense/error.hpp"
#include "hetsense/generators.hpp"
#include "hetsense/linalg.hpp"
#include "hetsense/online.hpp"
#include "hetsense/random.hpp"

namespace hetsense {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Runs task(i) for i in [0, count) on `workers` threads. Results must be
/// written into per-index slots so the outcome does not depend on scheduling.
void parallel_for(int count, int workers, const std::function<void(int)>& task) {
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min(workers, count));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

std::complex<double> dominant_omega(const DmdModel& m) {
  require(m.rank() >= 1 && std::abs(m.eigenvalues[0]) > 0.0, "model has no usable eigenvalue");
  return std::log(m.eigenvalues[0]) / m.dt;
}

Eigen::MatrixXd random_orthonormal(Index n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = rng.normal();
  return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
}

}  // namespace

double quantile(std::vector<double> v, double q) {
  require(!v.empty(), "quantile of empty data");
  std::sort(v.begin(), v.end());
  const double h = (double(v.size()) - 1.0) * q;
  const auto lo = std::size_t(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - double(lo)) * (v[hi] - v[lo]);
}

const EigSummary& EigTrialsResult::summary(const std::string& method, double variance) const {
  for (const auto& s : summaries)
    if (s.method == method && s.variance == variance) return s;
  throw Error("no summary for " + method + " at variance " + std::to_string(variance));
}

EigTrialsResult run_eigenvalue_trials(const ExperimentConfig& cfg) {
  require(cfg.init_T >= 1 && cfg.T_total > cfg.init_T, "bad trial horizon");
  require(cfg.trials >= 1 && !cfg.variances.empty(), "need trials and variances");
  const Workspace ws = cfg.full_workspace();
  const int cells = int(cfg.variances.size()) * cfg.trials;
  std::vector<std::vector<EigTracePoint>> per_cell(static_cast<std::size_t>(cells));

  parallel_for(cells, cfg.workers, [&](int cell) {
    const int vi = cell / cfg.trials;
    const int trial = cell % cfg.trials;
    const double variance = cfg.variances[std::size_t(vi)];
    SnapshotSeries clean = gen_lti_field(ws, cfg.lti_eigenvalues(),
                                         derive_seed(cfg.seed, 1000000 + std::uint64_t(trial)),
                                         cfg.T_total, cfg.dt);
    for (auto& s : clean.snapshots) s.values *= cfg.signal_scale;
    const Eigen::MatrixXd d =
        inject_noise(clean, variance,
                     derive_seed(derive_seed(cfg.seed, 2000000 + std::uint64_t(vi)),
                                 std::uint64_t(trial)))
            .matrix();
    const bool initial = cfg.trial_anchor == "initial";
    auto anchor = [&](int k) -> Eigen::VectorXd { return d.col(initial ? 0 : k); };
    auto& out = per_cell[std::size_t(cell)];
    auto record = [&](const std::string& method, int k, const DmdModel& m) {
      const auto w = dominant_omega(m);
      out.push_back({method, variance, trial, k * cfg.dt, w.real(), w.imag()});
    };

    const int t0 = cfg.init_T;
    const SnapshotPair init{d.leftCols(t0), d.middleCols(1, t0), cfg.dt};
    GeneralOnlineState general = init_general(init, cfg.rank_policy());
    general.time_stride = cfg.time_stride;
    LongTermOnlineState longterm = init_longterm(init, cfg.gamma);
    for (int k = t0;;) {
      record("batch", k,
             reanchor(fit_dmd({d.leftCols(k), d.middleCols(1, k), cfg.dt}, cfg.rank_policy()),
                      anchor(k)));
      record("general", k, general_model(general, anchor(k)));
      record("longterm", k, longterm_model(longterm, anchor(k)));
      if (k >= cfg.T_total) break;
      const int next = std::min(k + cfg.update_every, cfg.T_total);
      const Eigen::MatrixXd x_new = d.middleCols(k, next - k);
      const Eigen::MatrixXd y_new = d.middleCols(k + 1, next - k);
      update_general(general, x_new, y_new);
      update_longterm(longterm, x_new, y_new);
      k = next;
    }
  });

  EigTrialsResult res;
  for (const auto& method : kMethods)
    for (const auto& cell : per_cell)
      for (const auto& p : cell)
        if (p.method == method) res.traces.push_back(p);
  for (const auto& method : kMethods)
    for (double variance : cfg.variances) {
      std::vector<double> re, im;
      for (const auto& p : res.traces)
        if (p.method == method && p.variance == variance && p.time > cfg.summary_after) {
          re.push_back(p.re);
          im.push_back(p.im);
        }
      EigSummary s;
      s.method = method;
      s.variance = variance;
      s.samples = re.size();
      if (!re.empty()) {
        s.median_re = quantile(re, 0.5);
        s.q1_re = quantile(re, 0.25);
        s.q3_re = quantile(re, 0.75);
        s.median_im = quantile(im, 0.5);
      }
      res.summaries.push_back(s);
    }
  return res;
}

void write_eig_traces_csv(std::ostream& out, const EigTrialsResult& r) {
  out << "method,variance,trial,time,re,im\n";
  const auto old = out.precision(17);
  for (const auto& p : r.traces)
    out << p.method << ',' << p.variance << ',' << p.trial << ',' << p.time << ',' << p.re
        << ',' << p.im << '\n';
  out.precision(old);
}

void write_eig_summary_csv(std::ostream& out, const EigTrialsResult& r) {
  out << "method,variance,samples,median_re,q1_re,q3_re,iqr_re,median_im\n";
  const auto old = out.precision(17);
  for (const auto& s : r.summaries)
    out << s.method << ',' << s.variance << ',' << s.samples << ',' << s.median_re << ','
        << s.q1_re << ',' << s.q3_re << ',' << s.iqr_re() << ',' << s.median_im << '\n';
  out.precision(old);
}

std::vector<TimingRow> run_timing_benchmark(const ExperimentConfig& cfg) {
  require(cfg.bench_repeats >= 1, "bench_repeats must be >= 1");
  std::vector<TimingRow> rows;
  for (std::size_t e = 0; e < cfg.bench_envs.size(); ++e) {
    const BenchEnv& env = cfg.bench_envs[e];
    require(env.init_T >= 1 && env.tau >= 1 && env.steps > env.init_T, "bad bench env");
    const Workspace ws(env.width, env.height);
    const Eigen::MatrixXd d =
        inject_noise(gen_damped_oscillation_series(ws, env.steps, cfg.dt), cfg.bench_noise,
                     derive_seed(cfg.seed, 3000000 + e))
            .matrix();
    const std::string label = std::to_string(env.width) + "x" + std::to_string(env.height) +
                              "/T=" + std::to_string(env.init_T) +
                              "/tau=" + std::to_string(env.tau) +
                              "/steps=" + std::to_string(env.steps);
    const SnapshotPair init{d.leftCols(env.init_T), d.middleCols(1, env.init_T), cfg.dt};
    const RankPolicy batch_policy = RankPolicy::relative(cfg.rank_tol);
    const RankPolicy general_policy = RankPolicy::fixed(cfg.bench_general_rank);

    for (const auto& method : kMethods) {
      TimingRow best{label, method, 0, 1e300, 1e300};
      for (int rep = 0; rep < cfg.bench_repeats; ++rep) {
        GeneralOnlineState general;
        LongTermOnlineState longterm;
        if (method == "general") general = init_general(init, general_policy);
        if (method == "longterm") longterm = init_longterm(init, 1.0);
        double without = 0.0, with = 0.0;
        int updates = 0;
        bool warm = false;
        for (int k = env.init_T; k < env.steps;) {
          const int next = std::min(k + env.tau, env.steps);
          const Eigen::MatrixXd x_new = d.middleCols(k, next - k);
          const Eigen::MatrixXd y_new = d.middleCols(k + 1, next - k);
          double t_update = 0.0, t_model = 0.0;
          if (method == "batch") {
            const auto t0 = Clock::now();
            const TruncatedSvd svd = truncated_svd(d.leftCols(next), batch_policy);
            const Eigen::MatrixXd a = reduced_operator(svd.u, svd.sigma, svd.w,
                                                       d.middleCols(1, next));
            t_update = seconds_since(t0);
            const auto t1 = Clock::now();
            const DmdModel m = model_from_svd(svd.u, svd.sigma, svd.w, d.middleCols(1, next),
                                              d.col(next), cfg.dt);
            t_model = seconds_since(t1);
            require(a.rows() == m.rank(), "inconsistent batch model");
          } else if (method == "general") {
            const auto t0 = Clock::now();
            update_general(general, x_new, y_new);
            const Eigen::MatrixXd a = general_reduced_operator(general);
            t_update = seconds_since(t0);
            const auto t1 = Clock::now();
            const DmdModel m = general_model(general);
            t_model = seconds_since(t1);
            require(a.rows() == m.rank(), "inconsistent general model");
          } else {
            const auto t0 = Clock::now();
            update_longterm(longterm, x_new, y_new);
            t_update = seconds_since(t0);
            const auto t1 = Clock::now();
            const DmdModel m = longterm_model(longterm);
            t_model = seconds_since(t1);
            require(m.rank() == ws.size(), "inconsistent long-term model");
          }
          if (warm) {
            without += t_update;
            with += t_update + t_model;
            ++updates;
          }
          warm = true;
          k = next;
        }
        if (with < best.seconds_with_eig) {
          best.seconds_with_eig = with;
          best.updates = updates;
        }
        best.seconds_without_eig = std::min(best.seconds_without_eig, without);
      }
      rows.push_back(best);
    }
  }
  return rows;
}

void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows) {
  out << "env,method,updates,seconds_without_eig,seconds_with_eig\n";
  const auto old = out.precision(6);
  for (const auto& r : rows)
    out << r.env << ',' << r.method << ',' << r.updates << ',' << r.seconds_without_eig << ','
        << r.seconds_with_eig << '\n';
  out.precision(old);
}

std::vector<ForgettingRow> run_forgetting_comparison(const ExperimentConfig& cfg) {
  const Index n = Index(cfg.forgetting_width) * cfg.forgetting_height;
  const int init_pairs = int(2 * n);
  require(cfg.switch_step > init_pairs,
          "switch_step must exceed the " + std::to_string(init_pairs) + " initialization pairs");
  require(cfg.forgetting_before > 0.0 && cfg.forgetting_after > 0.0,
          "dominant eigenvalues must be positive");
  require(!cfg.gammas.empty() && cfg.trials >= 1, "need gammas and trials");
  const int steps = 2 * cfg.switch_step;
  const std::size_t ng = cfg.gammas.size();
  std::vector<ForgettingRow> rows(ng * std::size_t(cfg.trials));

  parallel_for(cfg.trials, cfg.workers, [&](int trial) {
    const std::uint64_t base = derive_seed(cfg.seed, 4000000 + std::uint64_t(trial));
    const Eigen::MatrixXd q = random_orthonormal(n, derive_seed(base, 1));
    Rng rng(derive_seed(base, 2));
    Eigen::VectorXd eig(n);
    eig[0] = cfg.forgetting_before;
    for (Index i = 1; i < n; ++i) eig[i] = 0.2 + 0.3 * rng.uniform();
    const Eigen::MatrixXd a_before = q * eig.asDiagonal() * q.transpose();
    eig[0] = cfg.forgetting_after;
    const Eigen::MatrixXd a_after = q * eig.asDiagonal() * q.transpose();

    Eigen::MatrixXd sw(n, steps + 1), st(n, steps + 1);
    for (Index i = 0; i < n; ++i) sw(i, 0) = rng.normal();
    st.col(0) = sw.col(0);
    for (int k = 0; k < steps; ++k) {
      Eigen::VectorXd w(n);
      for (Index i = 0; i < n; ++i) w[i] = cfg.process_noise * rng.normal();
      sw.col(k + 1) = (k < cfg.switch_step ? a_before : a_after) * sw.col(k) + w;
      st.col(k + 1) = a_before * st.col(k) + w;
    }

    auto error_of = [&](const Eigen::MatrixXd& a, double truth) {
      const Eigen::VectorXcd values = linalg::eig(a).values;
      const std::complex<double> omega_true = std::log(truth) / cfg.dt;
      double best = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < values.size(); ++i) {
        if (std::abs(values[i]) == 0.0) continue;
        best = std::min(best, std::abs(std::log(values[i]) / cfg.dt - omega_true));
      }
      return best;
    };
    auto final_error = [&](const Eigen::MatrixXd& d, double gamma, double truth) {
      LongTermOnlineState s = init_longterm(
          {d.leftCols(init_pairs), d.middleCols(1, init_pairs), cfg.dt}, gamma);
      for (int k = init_pairs; k < steps;) {
        const int next = std::min(k + cfg.update_every, steps);
        update_longterm(s, d.middleCols(k, next - k), d.middleCols(k + 1, next - k));
        k = next;
      }
      return error_of(s.a, truth);
    };
    const double batch_error =
        error_of(batch_operator(st.leftCols(steps), st.middleCols(1, steps)),
                 cfg.forgetting_before);

    for (std::size_t g = 0; g < ng; ++g) {
      const double gamma = cfg.gammas[g];
      rows[g * std::size_t(cfg.trials) + std::size_t(trial)] = {
          gamma, trial, final_error(sw, gamma, cfg.forgetting_after),
          final_error(st, gamma, cfg.forgetting_before), batch_error};
    }
  });
  return rows;
}

void write_forgetting_csv(std::ostream& out, const std::vector<ForgettingRow>& rows) {
  out << "gamma,trial,error_switch,error_stationary,error_stationary_batch\n";
  const auto old = out.precision(17);
  for (const auto& r : rows)
    out << r.gamma << ',' << r.trial << ',' << r.error_switch << ',' << r.error_stationary << ','
        << r.error_stationary_batch << '\n';
  out.precision(old);
}

}  // namespace hetsense
