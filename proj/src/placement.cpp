#include "hetsense/placement.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "hetsense/error.hpp"
#include "hetsense/random.hpp"

namespace hetsense {
namespace {

/// Residual matrix R = M K, or R = M when K is absent. Deflation only ever
/// touches M, so R never has to be formed when K is wide.
class Residual {
 public:
  explicit Residual(Eigen::MatrixXcd m) : m_(std::move(m)) {}
  Residual(Eigen::MatrixXcd m, Eigen::MatrixXcd k) : m_(std::move(m)), k_(std::move(k)) {
    factored_ = true;
  }

  Index cols() const { return factored_ ? k_.cols() : m_.cols(); }

  Eigen::VectorXd norms() const {
    if (!factored_) return m_.colwise().norm().transpose();
    Eigen::VectorXd out(cols());
    constexpr Index kChunk = 512;
    for (Index c0 = 0; c0 < cols(); c0 += kChunk) {
      const Index n = std::min(kChunk, cols() - c0);
      out.segment(c0, n) = (m_ * k_.middleCols(c0, n)).colwise().norm().transpose();
    }
    return out;
  }

  Eigen::MatrixXcd block(const std::vector<Index>& cols) const {
    if (!factored_) return m_(Eigen::all, cols);
    return m_ * k_(Eigen::all, cols);
  }

  /// Removes span(R[:, cols]) from every column of R.
  void deflate(const std::vector<Index>& cols, double abs_tol) {
    const Eigen::MatrixXcd b = block(cols);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(b);
    const double maxpivot = qr.maxPivot();
    if (maxpivot <= abs_tol) return;
    qr.setThreshold(abs_tol / maxpivot);
    const Eigen::MatrixXcd q = Eigen::MatrixXcd(qr.householderQ()).leftCols(qr.rank());
    m_ -= q * (q.adjoint() * m_);
  }

 private:
  Eigen::MatrixXcd m_;
  Eigen::MatrixXcd k_;
  bool factored_ = false;
};

struct GreedyPick {
  Index candidate;
  double weight;
};

/// Shared greedy kernel: groups are candidate column sets; a pick removes
/// every group sharing a column with it. When the picks already span the
/// residual (more sensors than the matrix rank), deflation restarts from the
/// original matrix so later picks are still driven by the data and not by
/// rounding noise.
std::vector<GreedyPick> greedy_select(const Residual& original,
                                      const std::vector<std::vector<Index>>& groups, Index count,
                                      Index* feasible) {
  std::vector<char> alive(groups.size(), 1);
  std::vector<char> taken(std::size_t(original.cols()), 0);
  std::vector<GreedyPick> picks;
  Residual r = original;
  double abs_tol = 0.0;
  auto best_group = [&](const Eigen::VectorXd& norms, double& best_score) {
    Index best = -1;
    best_score = -1.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (!alive[g]) continue;
      double score = 0.0;
      for (Index c : groups[g]) score += norms[c];
      if (score > best_score) {
        best_score = score;
        best = Index(g);
      }
    }
    return best;
  };
  for (Index step = 0; step < count; ++step) {
    Eigen::VectorXd norms = r.norms();
    if (step == 0) abs_tol = 1e-12 * std::max(norms.norm(), 1e-300);
    double best_score = 0.0;
    Index best = best_group(norms, best_score);
    if (best < 0) break;
    if (step > 0 && best_score <= abs_tol) {
      r = original;
      norms = r.norms();
      best = best_group(norms, best_score);
    }
    const double total = norms.sum();
    const auto& cols = groups[std::size_t(best)];
    const Eigen::MatrixXcd block = r.block(cols);
    const double block_norm =
        block.size() ? Eigen::JacobiSVD<Eigen::MatrixXcd>(block).singularValues()[0] : 0.0;
    picks.push_back({best, total > 0.0 ? block_norm / total : 0.0});
    for (Index c : cols) taken[std::size_t(c)] = 1;
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (Index c : groups[g])
        if (taken[std::size_t(c)]) {
          alive[g] = 0;
          break;
        }
    r.deflate(cols, abs_tol);
  }
  if (feasible) *feasible = Index(picks.size());
  return picks;
}

Placement select_regions(const Residual& r, const Workspace& ws, int k, Index count) {
  require(count >= 1, "placement needs at least one region");
  const auto candidates = enumerate_candidates(ws, k);
  std::vector<std::vector<Index>> groups;
  for (const auto& c : candidates) groups.push_back(c.members);
  Index feasible = 0;
  const auto picks = greedy_select(r, groups, count, &feasible);
  require(feasible == count, "only " + std::to_string(feasible) +
                                 " disjoint sensing regions of radius " + std::to_string(k) +
                                 " fit; " + std::to_string(count) + " requested");
  Placement out;
  for (const auto& p : picks) {
    out.regions.push_back(candidates[std::size_t(p.candidate)]);
    out.weights.push_back(p.weight);
  }
  return out;
}

}  // namespace

ObservationSet Placement::observations(Index n) const {
  std::vector<Index> idx;
  for (const auto& reg : regions) idx.insert(idx.end(), reg.members.begin(), reg.members.end());
  return ObservationSet(std::move(idx), n);
}

std::vector<SensingRegion> enumerate_candidates(const Workspace& ws, int k) {
  require(k >= 0, "sensing radius must be nonnegative");
  std::vector<SensingRegion> out;
  out.reserve(std::size_t(ws.size()));
  for (Index c = 0; c < ws.size(); ++c) {
    const GridPoint p = ws.point_of(c);
    SensingRegion reg{c, k, {}};
    for (int y = std::max(0, p.y - k); y <= std::min(ws.height() - 1, p.y + k); ++y)
      for (int x = std::max(0, p.x - k); x <= std::min(ws.width() - 1, p.x + k); ++x) {
        const int dx = x - p.x, dy = y - p.y;
        if (dx * dx + dy * dy <= k * k) reg.members.push_back(ws.index_of({x, y}));
      }
    out.push_back(std::move(reg));
  }
  return out;
}

std::vector<Index> pivoted_qr_points(const Eigen::MatrixXcd& m, Index count) {
  require(count >= 0 && count <= m.cols(), "cannot select " + std::to_string(count) +
                                               " columns from " + std::to_string(m.cols()));
  std::vector<std::vector<Index>> groups(std::size_t(m.cols()));
  for (Index c = 0; c < m.cols(); ++c) groups[std::size_t(c)] = {c};
  const auto picks = greedy_select(Residual(m), groups, count, nullptr);
  std::vector<Index> out;
  for (const auto& p : picks) out.push_back(p.candidate);
  return out;
}

Placement block_pivoted_qr(const Eigen::MatrixXcd& gram, const Workspace& ws, int k,
                           Index count) {
  require(gram.rows() == ws.size() && gram.cols() == ws.size(),
          "gram matrix does not match the workspace");
  return select_regions(Residual(gram), ws, k, count);
}

Placement block_pivoted_qr_modes(const Eigen::MatrixXcd& modes, const Workspace& ws, int k,
                                 Index count) {
  require(modes.rows() == ws.size(), "modes do not match the workspace");
  return select_regions(Residual(modes, modes.adjoint()), ws, k, count);
}

Eigen::MatrixXcd mode_gram(const DmdModel& m) { return m.modes * m.modes.adjoint(); }

BruteForceResult brute_force_placement(const DmdModel& model, const Workspace& ws, int k,
                                       Index count) {
  require(count >= 1 && count <= 3, "brute-force placement is limited to 1..3 regions");
  require(model.dimension() == ws.size(), "model does not match the workspace");
  const auto candidates = enumerate_candidates(ws, k);
  const auto nc = candidates.size();
  double tuples = 1.0;
  for (Index i = 0; i < count; ++i) tuples *= double(nc - std::size_t(i)) / double(i + 1);
  require(tuples <= 5e6, "brute-force search space too large (" + std::to_string(tuples) +
                             " tuples)");

  std::vector<std::vector<char>> overlap(nc, std::vector<char>(nc, 0));
  {
    std::vector<std::vector<std::size_t>> owners(std::size_t(ws.size()));
    for (std::size_t c = 0; c < nc; ++c)
      for (Index p : candidates[c].members) owners[std::size_t(p)].push_back(c);
    for (const auto& o : owners)
      for (std::size_t a : o)
        for (std::size_t b : o) overlap[a][b] = 1;
  }

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  BruteForceResult res;
  res.best_objective = kNegInf;
  res.worst_objective = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_tuple;
  std::vector<std::size_t> tuple;

  auto evaluate = [&] {
    std::vector<Index> idx;
    for (std::size_t c : tuple)
      idx.insert(idx.end(), candidates[c].members.begin(), candidates[c].members.end());
    const double obj = placement_objective(model, ObservationSet(std::move(idx), ws.size()));
    ++res.tuples;
    if (best_tuple.empty() || obj > res.best_objective) {
      res.best_objective = obj;
      best_tuple = tuple;
    }
    if (std::isfinite(obj)) res.worst_objective = std::min(res.worst_objective, obj);
  };
  auto recurse = [&](auto&& self, std::size_t start) -> void {
    if (Index(tuple.size()) == count) {
      evaluate();
      return;
    }
    for (std::size_t c = start; c < nc; ++c) {
      bool ok = true;
      for (std::size_t t : tuple) ok = ok && !overlap[t][c];
      if (!ok) continue;
      tuple.push_back(c);
      self(self, c + 1);
      tuple.pop_back();
    }
  };
  recurse(recurse, 0);
  require(!best_tuple.empty(), "no disjoint tuple of " + std::to_string(count) +
                                   " regions exists");
  if (!std::isfinite(res.worst_objective)) res.worst_objective = kNegInf;
  for (std::size_t c : best_tuple) {
    res.best.regions.push_back(candidates[c]);
    res.best.weights.push_back(1.0 / double(count));
  }
  return res;
}

Placement random_placement(const Workspace& ws, int k, Index count, std::uint64_t seed) {
  require(count >= 1, "placement needs at least one region");
  const auto candidates = enumerate_candidates(ws, k);
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t(0));
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[std::size_t(rng.uniform_int(0, long(i) - 1))]);
  std::vector<char> taken(std::size_t(ws.size()), 0);
  Placement out;
  for (std::size_t c : order) {
    if (Index(out.regions.size()) == count) break;
    const auto& reg = candidates[c];
    bool free = true;
    for (Index p : reg.members) free = free && !taken[std::size_t(p)];
    if (!free) continue;
    for (Index p : reg.members) taken[std::size_t(p)] = 1;
    out.regions.push_back(reg);
  }
  require(Index(out.regions.size()) == count,
          "only " + std::to_string(out.regions.size()) + " random disjoint regions fit");
  out.weights.assign(out.regions.size(), 1.0 / double(count));
  return out;
}

void write_placement_csv(const std::filesystem::path& path, const Placement& p,
                         const Workspace& ws) {
  std::ofstream out(path);
  require(bool(out), "cannot open " + path.string() + " for writing");
  out << "center_x,center_y,radius,weight,member_count\n";
  out.precision(17);
  for (std::size_t i = 0; i < p.regions.size(); ++i) {
    const GridPoint c = ws.point_of(p.regions[i].center_index);
    out << c.x << ',' << c.y << ',' << p.regions[i].radius << ',' << p.weights[i] << ','
        << p.regions[i].members.size() << '\n';
  }
  require(bool(out), "write failed for " + path.string());
}

}  // namespace hetsense
