#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace hetsense {

using Index = Eigen::Index;

struct GridPoint {
  int x = 0;
  int y = 0;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// Rectangular grid discretization of the field domain.
///
/// Grid points are numbered row by row: index = y * width + x. Physical
/// coordinates of a point are (x * spacing, y * spacing).
class Workspace {
 public:
  Workspace(int width, int height, double spacing = 1.0);

  int width() const { return width_; }
  int height() const { return height_; }
  double spacing() const { return spacing_; }
  Index size() const { return Index(width_) * height_; }

  Index index_of(GridPoint p) const;
  GridPoint point_of(Index i) const;
  bool contains(GridPoint p) const {
    return p.x >= 0 && p.x < width_ && p.y >= 0 && p.y < height_;
  }
  Eigen::Vector2d position(Index i) const;
  // Upper corner of the bounding rectangle in physical units.
  Eigen::Vector2d extent() const {
    return {(width_ - 1) * spacing_, (height_ - 1) * spacing_};
  }

  friend bool operator==(const Workspace&, const Workspace&) = default;

 private:
  int width_;
  int height_;
  double spacing_;
};

struct FieldSnapshot {
  Eigen::VectorXd values;
  double time = 0.0;
};

/// Time-ordered snapshots with uniform spacing `dt`.
struct SnapshotSeries {
  std::vector<FieldSnapshot> snapshots;
  double dt = 1.0;

  std::size_t size() const { return snapshots.size(); }
  Index dimension() const {
    return snapshots.empty() ? 0 : snapshots.front().values.size();
  }
  /// Throws if sizes differ, values are non-finite, or times are not
  /// strictly increasing with spacing dt (relative tolerance 1e-9).
  void validate() const;
  /// N x (T+1) matrix with snapshots as columns.
  Eigen::MatrixXd matrix() const;
  static SnapshotSeries from_matrix(const Eigen::MatrixXd& columns, double dt,
                                    double t0 = 0.0);
};

void validate_snapshot(const FieldSnapshot& s, const Workspace& ws);

/// Keeps rows/columns 0, step, 2*step, ... of the grid.
std::pair<FieldSnapshot, Workspace> downsample(const FieldSnapshot& s,
                                               const Workspace& ws, int step_x,
                                               int step_y);
Workspace downsample(const Workspace& ws, int step_x, int step_y);

}  // namespace hetsense
