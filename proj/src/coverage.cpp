#include "hetsense/coverage.hpp"

#include <cmath>

#include "hetsense/error.hpp"
#include "hetsense/random.hpp"

namespace hetsense {

DensityMap::DensityMap(Eigen::VectorXd weights) : weights_(std::move(weights)) {
  require(weights_.size() >= 1, "density needs at least one point");
  require(weights_.allFinite() && weights_.minCoeff() >= 0.0,
          "density weights must be finite and nonnegative");
  const double total = weights_.sum();
  require(total > 0.0, "density has zero total mass");
  weights_ /= total;
}

DensityMap DensityMap::uniform(Index n) { return DensityMap(Eigen::VectorXd::Ones(n)); }

DensityMap density_from_temporal(const DmdModel& m, double exponent) {
  require(m.rank() >= 1, "density needs a model with at least one mode");
  Eigen::VectorXd rate(m.rank());
  for (Index i = 0; i < m.rank(); ++i)
    rate[i] = std::pow(std::abs(std::log(std::abs(m.eigenvalues[i]))), exponent);
  Eigen::VectorXd w = m.modes.cwiseAbs() * rate;
  if (!(w.allFinite() && w.sum() > 0.0)) return DensityMap::uniform(m.dimension());
  w /= w.sum();
  w.array() += 1e-12;
  return DensityMap(std::move(w));
}

std::vector<std::size_t> voronoi_partition(const Workspace& ws, const RobotConfiguration& cfg) {
  require(cfg.size() >= 1, "voronoi partition needs at least one robot");
  std::vector<std::size_t> owner(std::size_t(ws.size()));
  for (Index i = 0; i < ws.size(); ++i) {
    const Eigen::Vector2d q = ws.position(i);
    std::size_t best = 0;
    double best_d = (q - cfg.positions[0]).squaredNorm();
    for (std::size_t j = 1; j < cfg.size(); ++j) {
      const double d = (q - cfg.positions[j]).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    owner[std::size_t(i)] = best;
  }
  return owner;
}

RobotConfiguration lloyd_step(const Workspace& ws, const RobotConfiguration& cfg,
                              const DensityMap& density) {
  require(density.size() == ws.size(), "density does not match the workspace");
  const auto owner = voronoi_partition(ws, cfg);
  std::vector<double> mass(cfg.size(), 0.0);
  std::vector<Eigen::Vector2d> moment(cfg.size(), Eigen::Vector2d::Zero());
  for (Index i = 0; i < ws.size(); ++i) {
    const std::size_t o = owner[std::size_t(i)];
    mass[o] += density[i];
    moment[o] += density[i] * ws.position(i);
  }
  RobotConfiguration next = cfg;
  for (std::size_t j = 0; j < cfg.size(); ++j)
    if (mass[j] > 0.0) next.positions[j] = moment[j] / mass[j];
  return next;
}

LloydResult lloyd(const Workspace& ws, RobotConfiguration cfg, const DensityMap& density,
                  int max_iters, double tol) {
  LloydResult res;
  res.costs.push_back(coverage_cost(ws, cfg, density));
  for (int it = 0; it < max_iters; ++it) {
    RobotConfiguration next = lloyd_step(ws, cfg, density);
    double moved = 0.0;
    for (std::size_t j = 0; j < cfg.size(); ++j)
      moved = std::max(moved, (next.positions[j] - cfg.positions[j]).norm());
    cfg = std::move(next);
    res.costs.push_back(coverage_cost(ws, cfg, density));
    res.iterations = it + 1;
    if (moved < tol * ws.spacing()) break;
  }
  res.config = std::move(cfg);
  return res;
}

double coverage_cost(const Workspace& ws, const RobotConfiguration& cfg,
                     const DensityMap& density) {
  require(density.size() == ws.size(), "density does not match the workspace");
  const auto owner = voronoi_partition(ws, cfg);
  double cost = 0.0;
  for (Index i = 0; i < ws.size(); ++i)
    cost += (ws.position(i) - cfg.positions[owner[std::size_t(i)]]).squaredNorm() * density[i];
  return cost;
}

FieldSnapshot av_sense(const FieldSnapshot& truth, const Workspace& ws,
                       const RobotConfiguration& cfg, double sigma0, double beta,
                       std::uint64_t seed) {
  require(sigma0 >= 0.0 && beta >= 0.0, "sigma0 and beta must be nonnegative");
  validate_snapshot(truth, ws);
  const auto owner = voronoi_partition(ws, cfg);
  Rng rng(seed);
  FieldSnapshot out = truth;
  for (Index i = 0; i < ws.size(); ++i) {
    const double d = (ws.position(i) - cfg.positions[owner[std::size_t(i)]]).norm();
    const double noise = rng.normal();
    out.values[i] += sigma0 * (1.0 + beta * d) * noise;
  }
  return out;
}

RobotConfiguration random_configuration(const Workspace& ws, std::size_t count,
                                        std::uint64_t seed) {
  Rng rng(seed);
  RobotConfiguration cfg;
  const Eigen::Vector2d ext = ws.extent();
  for (std::size_t j = 0; j < count; ++j) {
    const double x = rng.uniform() * ext.x();
    const double y = rng.uniform() * ext.y();
    cfg.positions.emplace_back(x, y);
  }
  return cfg;
}

}  // namespace hetsense
