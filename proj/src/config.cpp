#include "hetsense/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hetsense/error.hpp"

namespace hetsense {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(BenchEnv, width, height, init_T, tau, steps)

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    ExperimentConfig, generator, series_path, full_width, full_height, spacing, lti_eigs,
    signal_scale, av_space_step, mv_space_step, T_total, dt, init_T, update_every,
    av_time_step, mv_time_step, noise_variance, sensing_radius, mv_count, av_count, sigma0,
    beta, lloyd_max_iters, lloyd_tol, density_exponent, mv_baseline, upsample, method, gamma,
    rank, rank_tol, time_stride, seed, workers, trials, variances, trial_anchor,
    summary_after, bench_envs, bench_noise, bench_general_rank, bench_repeats, gammas,
    switch_step, forgetting_width, forgetting_height, forgetting_before, forgetting_after,
    process_noise)

namespace {

using nlohmann::json;

ExperimentConfig from_json_checked(const json& j) {
  require(j.is_object(), "config must be a JSON object");
  const json known = ExperimentConfig{};
  for (const auto& [key, _] : j.items())
    require(known.contains(key), "unknown config key '" + key + "'");
  try {
    return j.get<ExperimentConfig>();
  } catch (const json::exception& e) {
    throw Error("bad config value: " + std::string(e.what()));
  }
}

}  // namespace

std::vector<std::complex<double>> ExperimentConfig::lti_eigenvalues() const {
  std::vector<std::complex<double>> out;
  for (const auto& e : lti_eigs) out.emplace_back(e[0], e[1]);
  return out;
}

Alignment ExperimentConfig::alignment() const {
  return upsample == "corners" ? Alignment::Corners : Alignment::Physical;
}

Workspace ExperimentConfig::mv_workspace() const {
  return downsample(full_workspace(), mv_space_step, mv_space_step);
}

Workspace ExperimentConfig::av_workspace() const {
  return downsample(full_workspace(), av_space_step, av_space_step);
}

double ExperimentConfig::av_sigma0() const {
  return sigma0 >= 0.0 ? sigma0 : std::sqrt(noise_variance);
}

void ExperimentConfig::validate() const {
  require(generator == "damped_oscillation" || generator == "lti" ||
              generator == "external_series",
          "generator must be damped_oscillation, lti or external_series");
  require(generator != "external_series" || !series_path.empty(),
          "external_series needs series_path");
  require(full_width >= 1 && full_height >= 1 && spacing > 0.0, "bad grid dimensions");
  require(av_space_step >= 1 && mv_space_step >= 1, "space steps must be >= 1");
  require(dt > 0.0, "dt must be positive");
  require(init_T >= 2, "init_T must be >= 2");
  require(update_every >= 1, "update_every must be >= 1");
  require(av_time_step >= 1 && mv_time_step >= 1, "time steps must be >= 1");
  require(T_total > init_T, "T_total must exceed init_T");
  require(noise_variance >= 0.0 && beta >= 0.0, "noise parameters must be nonnegative");
  require(sensing_radius >= 0 && mv_count >= 1 && av_count >= 1, "bad robot counts");
  require(method == "batch" || method == "general" || method == "longterm",
          "method must be batch, general or longterm");
  require(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
  require(rank >= 0 && rank_tol > 0.0, "bad rank settings");
  require(time_stride >= 1, "time_stride must be >= 1");
  require(mv_baseline == "optimal" || mv_baseline == "random",
          "mv_baseline must be optimal or random");
  require(upsample == "physical" || upsample == "corners",
          "upsample must be physical or corners");
  require(trial_anchor == "initial" || trial_anchor == "recent",
          "trial_anchor must be initial or recent");
  require(workers >= 1, "workers must be >= 1");
  if (method == "longterm")
    require(init_T >= mv_workspace().size(),
            "method=longterm needs init_T >= N of the modeling grid (" +
                std::to_string(mv_workspace().size()) + ")");
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error("config is not valid JSON: " + std::string(e.what()));
  }
  return from_json_checked(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(bool(in), "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  return json(cfg).dump(2);
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  json j = cfg;
  require(j.contains(key), "unknown config key '" + key + "'");
  json parsed = j[key].is_string() ? json(value) : json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;
  j[key] = parsed;
  cfg = from_json_checked(j);
}

}  // namespace hetsense
