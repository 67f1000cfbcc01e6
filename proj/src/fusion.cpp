#include "hetsense/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "hetsense/error.hpp"

namespace hetsense {
namespace {

// Source coordinate along one axis for target cell i.
double source_coord(int i, int to_count, double to_spacing, int from_count,
                    double from_spacing, Alignment align) {
  if (from_count == 1) return 0.0;
  double c = 0.0;
  if (align == Alignment::Corners)
    c = to_count == 1 ? 0.0 : double(i) / double(to_count - 1) * double(from_count - 1);
  else
    c = i * to_spacing / from_spacing;
  return std::clamp(c, 0.0, double(from_count - 1));
}

void split(double c, int count, int& i0, double& frac) {
  i0 = std::min(int(std::floor(c)), std::max(count - 2, 0));
  frac = c - i0;
}

}  // namespace

FieldSnapshot bilinear_upsample(const FieldSnapshot& s, const Workspace& from,
                                const Workspace& to, Alignment align) {
  validate_snapshot(s, from);
  FieldSnapshot out{Eigen::VectorXd(to.size()), s.time};
  for (int y = 0; y < to.height(); ++y) {
    int y0;
    double fy;
    split(source_coord(y, to.height(), to.spacing(), from.height(), from.spacing(), align),
          from.height(), y0, fy);
    const int y1 = std::min(y0 + 1, from.height() - 1);
    for (int x = 0; x < to.width(); ++x) {
      int x0;
      double fx;
      split(source_coord(x, to.width(), to.spacing(), from.width(), from.spacing(), align),
            from.width(), x0, fx);
      const int x1 = std::min(x0 + 1, from.width() - 1);
      const auto v = [&](int xx, int yy) { return s.values[from.index_of({xx, yy})]; };
      out.values[to.index_of({x, y})] =
          (1 - fy) * ((1 - fx) * v(x0, y0) + fx * v(x1, y0)) +
          fy * ((1 - fx) * v(x0, y1) + fx * v(x1, y1));
    }
  }
  return out;
}

SnapshotSeries assemble_combined(const SnapshotSeries& av_estimates,
                                 const std::map<Index, FieldSnapshot>& mv_reconstructions) {
  SnapshotSeries out = av_estimates;
  const Index n = av_estimates.dimension();
  for (const auto& [t, snap] : mv_reconstructions) {
    require(t >= 0 && t < Index(out.size()),
            "mv time index " + std::to_string(t) + " outside the av series");
    require(snap.values.size() == n, "mv reconstruction is on a different grid");
    out.snapshots[std::size_t(t)].values = snap.values;
  }
  return out;
}

double mse(const FieldSnapshot& est, const FieldSnapshot& truth) {
  require(est.values.size() == truth.values.size(), "mse: length mismatch");
  require(est.values.size() > 0, "mse of empty snapshots");
  return (est.values - truth.values).squaredNorm() / double(est.values.size());
}

double mse_series(const SnapshotSeries& est, const SnapshotSeries& truth) {
  require(est.size() == truth.size() && est.size() > 0, "mse_series: series length mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < est.size(); ++k)
    total += mse(est.snapshots[k], truth.snapshots[k]);
  return total / double(est.size());
}

}  // namespace hetsense
