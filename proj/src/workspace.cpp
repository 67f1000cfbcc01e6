#include "hetsense/workspace.hpp"

#include <cmath>
#include <string>

#include "hetsense/error.hpp"

namespace hetsense {

Workspace::Workspace(int width, int height, double spacing)
    : width_(width), height_(height), spacing_(spacing) {
  require(width >= 1 && height >= 1, "workspace dimensions must be >= 1");
  require(spacing > 0.0 && std::isfinite(spacing),
          "workspace spacing must be positive");
}

Index Workspace::index_of(GridPoint p) const {
  require(contains(p), "grid point outside workspace");
  return Index(p.y) * width_ + p.x;
}

GridPoint Workspace::point_of(Index i) const {
  require(i >= 0 && i < size(), "grid index out of range");
  return {static_cast<int>(i % width_), static_cast<int>(i / width_)};
}

Eigen::Vector2d Workspace::position(Index i) const {
  const GridPoint p = point_of(i);
  return {p.x * spacing_, p.y * spacing_};
}

void validate_snapshot(const FieldSnapshot& s, const Workspace& ws) {
  require(s.values.size() == ws.size(),
          "snapshot length " + std::to_string(s.values.size()) +
              " does not match workspace size " + std::to_string(ws.size()));
  require(s.values.allFinite(), "snapshot contains non-finite values");
}

void SnapshotSeries::validate() const {
  require(dt > 0.0 && std::isfinite(dt), "series dt must be positive");
  if (snapshots.empty()) return;
  const Index n = dimension();
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    require(snapshots[k].values.size() == n, "series snapshots differ in size");
    require(snapshots[k].values.allFinite(), "series contains non-finite values");
    if (k > 0) {
      const double gap = snapshots[k].time - snapshots[k - 1].time;
      require(gap > 0.0, "series times must be strictly increasing");
      require(std::abs(gap - dt) <= 1e-9 * dt,
              "series times are not uniformly spaced by dt");
    }
  }
}

Eigen::MatrixXd SnapshotSeries::matrix() const {
  Eigen::MatrixXd m(dimension(), Index(snapshots.size()));
  for (std::size_t k = 0; k < snapshots.size(); ++k) m.col(Index(k)) = snapshots[k].values;
  return m;
}

SnapshotSeries SnapshotSeries::from_matrix(const Eigen::MatrixXd& columns,
                                           double dt, double t0) {
  SnapshotSeries s;
  s.dt = dt;
  s.snapshots.reserve(std::size_t(columns.cols()));
  for (Index k = 0; k < columns.cols(); ++k)
    s.snapshots.push_back({columns.col(k), t0 + double(k) * dt});
  return s;
}

Workspace downsample(const Workspace& ws, int step_x, int step_y) {
  require(step_x >= 1 && step_y >= 1, "downsample steps must be >= 1");
  const int w = (ws.width() + step_x - 1) / step_x;
  const int h = (ws.height() + step_y - 1) / step_y;
  return Workspace(w, h, ws.spacing() * std::max(step_x, step_y));
}

std::pair<FieldSnapshot, Workspace> downsample(const FieldSnapshot& s,
                                               const Workspace& ws, int step_x,
                                               int step_y) {
  validate_snapshot(s, ws);
  Workspace coarse = downsample(ws, step_x, step_y);
  FieldSnapshot out;
  out.time = s.time;
  out.values.resize(coarse.size());
  for (int y = 0; y < coarse.height(); ++y)
    for (int x = 0; x < coarse.width(); ++x)
      out.values[coarse.index_of({x, y})] =
          s.values[ws.index_of({x * step_x, y * step_y})];
  return {std::move(out), coarse};
}

}  // namespace hetsense
