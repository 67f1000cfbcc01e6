// Command-line front end for the hetsense library.
//
// Every subcommand reads an optional JSON config (--config) and then applies
// --key=value overrides for any config key. Stochastic subcommands require
// --seed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "hetsense/config.hpp"
#include "hetsense/dmd.hpp"
#include "hetsense/error.hpp"
#include "hetsense/experiments.hpp"
#include "hetsense/generators.hpp"
#include "hetsense/matrix_io.hpp"
#include "hetsense/model_io.hpp"
#include "hetsense/online.hpp"
#include "hetsense/placement.hpp"
#include "hetsense/random.hpp"
#include "hetsense/scenario.hpp"

namespace {

using namespace hetsense;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON config file");
  cmd->add_option("--seed", c.seed, "RNG seed");
  cmd->allow_extras();
}

/// Config from --config plus --key=value / --key value extras.
ExperimentConfig build_config(const CLI::App* cmd, const Common& c, bool stochastic) {
  ExperimentConfig cfg = c.config_path.empty() ? ExperimentConfig{} : load_config(c.config_path);
  const auto extras = cmd->remaining();
  for (std::size_t i = 0; i < extras.size(); ++i) {
    std::string arg = extras[i];
    require(arg.rfind("--", 0) == 0, "unexpected argument '" + arg + "'");
    arg = arg.substr(2);
    std::string key, value;
    if (const auto eq = arg.find('='); eq != std::string::npos) {
      key = arg.substr(0, eq);
      value = arg.substr(eq + 1);
    } else {
      require(i + 1 < extras.size(), "missing value for --" + arg);
      key = arg;
      value = extras[++i];
    }
    apply_override(cfg, key, value);
  }
  if (stochastic) require(c.seed.has_value(), "--seed is required for this command");
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  require(bool(out), "cannot open " + path + " for writing");
  return out;
}

void print_model(const DmdModel& m) {
  std::printf("rank %lld, dt %g\n", static_cast<long long>(m.rank()), m.dt);
  const Eigen::VectorXcd omega = continuous_eigenvalues(m);
  for (Index i = 0; i < m.rank() && i < 10; ++i)
    std::printf("  lambda %+.10f %+.10fi  omega %+.6f %+.6fi  |alpha| %.6g\n",
                m.eigenvalues[i].real(), m.eigenvalues[i].imag(), omega[i].real(),
                omega[i].imag(), std::abs(m.amplitudes[i]));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous multi-robot field modeling toolkit"};
  app.require_subcommand(1);

  Common gen_c, fit_c, upd_c, place_c, scen_c, eig_c, bench_c, forget_c;

  auto* gen = app.add_subcommand("generate", "write a synthetic snapshot series");
  add_common(gen, gen_c);
  std::string gen_out;
  gen->add_option("--out,-o", gen_out, "series file (.bin or .csv)")->required();

  auto* fit = app.add_subcommand("fit", "batch DMD on a series file");
  add_common(fit, fit_c);
  std::string fit_in, fit_out;
  fit->add_option("--input,-i", fit_in, "series file")->required();
  fit->add_option("--out,-o", fit_out, "model directory")->required();

  auto* upd = app.add_subcommand("update", "fold a batch of snapshots into a checkpointed state");
  add_common(upd, upd_c);
  std::string upd_in, upd_state, upd_model;
  bool upd_init = false;
  upd->add_option("--input,-i", upd_in, "series file with the new snapshots")->required();
  upd->add_option("--state,-s", upd_state, "state directory (read and rewritten)")->required();
  upd->add_option("--model-out", upd_model, "also write the current model here");
  upd->add_flag("--init", upd_init, "create the state from the input series (uses method, gamma, rank)");

  auto* place = app.add_subcommand("place", "placement CSV from a model");
  add_common(place, place_c);
  std::string place_model, place_out;
  int place_w = 0, place_h = 0, place_k = -1, place_m = 0;
  place->add_option("--model", place_model, "model directory")->required();
  place->add_option("--out,-o", place_out, "placement CSV")->required();
  place->add_option("--width", place_w, "grid width (cells)")->required();
  place->add_option("--height", place_h, "grid height (cells)")->required();
  place->add_option("--radius", place_k, "sensing radius (default: sensing_radius)");
  place->add_option("--count", place_m, "regions (default: mv_count)");

  auto* scen = app.add_subcommand("scenario", "closed-loop heterogeneous sensing run");
  add_common(scen, scen_c);
  std::string scen_out, scen_model;
  bool scen_no_timing = false;
  scen->add_option("--out,-o", scen_out, "metrics CSV")->required();
  scen->add_option("--model-out", scen_model, "write the final model here");
  scen->add_flag("--no-timing", scen_no_timing, "omit the update_seconds column");

  auto* eig = app.add_subcommand("eigtrials", "eigenvalue-tracking trials");
  add_common(eig, eig_c);
  std::string eig_out, eig_summary;
  eig->add_option("--out,-o", eig_out, "trace CSV")->required();
  eig->add_option("--summary", eig_summary, "summary CSV");

  auto* bench = app.add_subcommand("bench", "online update timing benchmark");
  add_common(bench, bench_c);
  std::string bench_out;
  bench->add_option("--out,-o", bench_out, "timing CSV")->required();

  auto* forget = app.add_subcommand("forgetting", "forgetting-factor comparison");
  add_common(forget, forget_c);
  std::string forget_out;
  forget->add_option("--out,-o", forget_out, "CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const ExperimentConfig cfg = build_config(gen, gen_c, true);
      const Workspace ws = cfg.full_workspace();
      SnapshotSeries s =
          cfg.generator == "lti"
              ? gen_lti_field(ws, cfg.lti_eigenvalues(), derive_seed(cfg.seed, 1), cfg.T_total,
                              cfg.dt)
              : gen_damped_oscillation_series(ws, cfg.T_total, cfg.dt);
      for (auto& snap : s.snapshots) snap.values *= cfg.signal_scale;
      s = inject_noise(s, cfg.noise_variance, derive_seed(cfg.seed, 2));
      write_series(gen_out, s);
      std::printf("wrote %zu snapshots of %lld points to %s\n", s.size(),
                  static_cast<long long>(s.dimension()), gen_out.c_str());
    } else if (fit->parsed()) {
      const ExperimentConfig cfg = build_config(fit, fit_c, false);
      const DmdModel m = fit_dmd(make_pair(read_series(fit_in)), cfg.rank_policy());
      save_model(fit_out, m);
      print_model(m);
    } else if (upd->parsed()) {
      const ExperimentConfig cfg = build_config(upd, upd_c, false);
      const SnapshotSeries s = read_series(upd_in);
      OnlineState state;
      if (upd_init) {
        const SnapshotPair pair = make_pair(s);
        if (cfg.method == "longterm") {
          state = init_longterm(pair, cfg.gamma);
        } else {
          require(cfg.method == "general", "update supports method general or longterm");
          GeneralOnlineState g = init_general(pair, cfg.rank_policy());
          g.time_stride = cfg.time_stride;
          state = std::move(g);
        }
      } else {
        state = load_state(upd_state);
        // New pairs start from the last snapshot the state has seen.
        Eigen::MatrixXd cols = s.matrix();
        Eigen::VectorXd last;
        if (auto* g = std::get_if<GeneralOnlineState>(&state))
          last = g->y.col(g->y.cols() - 1);
        else
          last = std::get<LongTermOnlineState>(state).last_snapshot;
        Eigen::MatrixXd all(cols.rows(), cols.cols() + 1);
        all << last, cols;
        const Index t = cols.cols();
        if (auto* g = std::get_if<GeneralOnlineState>(&state))
          update_general(*g, all.leftCols(t), all.rightCols(t));
        else
          update_longterm(std::get<LongTermOnlineState>(state), all.leftCols(t),
                          all.rightCols(t));
      }
      save_state(upd_state, state);
      const DmdModel m = std::holds_alternative<GeneralOnlineState>(state)
                             ? general_model(std::get<GeneralOnlineState>(state))
                             : longterm_model(std::get<LongTermOnlineState>(state));
      if (!upd_model.empty()) save_model(upd_model, m);
      print_model(m);
    } else if (place->parsed()) {
      const ExperimentConfig cfg = build_config(place, place_c, false);
      const DmdModel m = load_model(place_model);
      const Workspace ws(place_w, place_h);
      require(ws.size() == m.dimension(), "grid size does not match the model dimension");
      const int k = place_k >= 0 ? place_k : cfg.sensing_radius;
      const int count = place_m > 0 ? place_m : cfg.mv_count;
      const Placement p = block_pivoted_qr_modes(m.modes, ws, k, count);
      write_placement_csv(place_out, p, ws);
      std::printf("placed %zu regions of radius %d\n", p.regions.size(), k);
    } else if (scen->parsed()) {
      const ExperimentConfig cfg = build_config(scen, scen_c, true);
      const ScenarioResult r = run_scenario(cfg);
      auto out = open_out(scen_out);
      write_metrics_csv(out, r.records, !scen_no_timing);
      if (!scen_model.empty()) save_model(scen_model, r.final_model);
      std::printf("%zu records; final-third mse: heterogeneous %.6g, av-only %.6g, mv-only %.6g\n",
                  r.records.size(),
                  final_third_mean(r.records, &MetricsRecord::mse_heterogeneous),
                  final_third_mean(r.records, &MetricsRecord::mse_av_only),
                  final_third_mean(r.records, &MetricsRecord::mse_mv_only));
    } else if (eig->parsed()) {
      const ExperimentConfig cfg = build_config(eig, eig_c, true);
      const EigTrialsResult r = run_eigenvalue_trials(cfg);
      auto out = open_out(eig_out);
      write_eig_traces_csv(out, r);
      if (!eig_summary.empty()) {
        auto sum = open_out(eig_summary);
        write_eig_summary_csv(sum, r);
      }
      write_eig_summary_csv(std::cout, r);
    } else if (bench->parsed()) {
      const ExperimentConfig cfg = build_config(bench, bench_c, true);
      const auto rows = run_timing_benchmark(cfg);
      auto out = open_out(bench_out);
      write_timing_csv(out, rows);
      write_timing_csv(std::cout, rows);
    } else if (forget->parsed()) {
      const ExperimentConfig cfg = build_config(forget, forget_c, true);
      const auto rows = run_forgetting_comparison(cfg);
      auto out = open_out(forget_out);
      write_forgetting_csv(out, rows);
      write_forgetting_csv(std::cout, rows);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
