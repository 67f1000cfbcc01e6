#include "hetsense/generators.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "hetsense/error.hpp"
#include "hetsense/random.hpp"

namespace hetsense {
namespace {

// Printed definition of "senh"; numerically this is cosh.
double senh(double z) { return (std::exp(z) + std::exp(-z)) / 2.0; }

bool is_real(std::complex<double> w) {
  return std::abs(w.imag()) <= 1e-14 * std::max(1.0, std::abs(w));
}

}  // namespace

double normalized_coordinate(int i, int count) {
  if (count <= 1) return 0.0;
  return -1.0 + 2.0 * double(i) / double(count - 1);
}

Eigen::VectorXcd damped_oscillation_complex(const Workspace& ws, double t) {
  require(t >= 0.0, "damped oscillation requires t >= 0");
  // (1.9 i)^(-t) = exp(-t * Log(1.9 i)), Log(1.9 i) = ln 1.9 + i pi/2.
  const std::complex<double> log_base(std::log(1.9), std::numbers::pi / 2.0);
  const std::complex<double> factor = std::exp(-t * log_base);
  Eigen::VectorXcd out(ws.size());
  for (int y = 0; y < ws.height(); ++y) {
    const double sy = senh(normalized_coordinate(y, ws.height()));
    for (int x = 0; x < ws.width(); ++x) {
      const double sx = senh(normalized_coordinate(x, ws.width()));
      out[ws.index_of({x, y})] = sx * sy * factor;
    }
  }
  return out;
}

FieldSnapshot gen_damped_oscillation(const Workspace& ws, double t) {
  return {damped_oscillation_complex(ws, t).real(), t};
}

SnapshotSeries gen_damped_oscillation_series(const Workspace& ws, int steps,
                                             double dt) {
  require(steps >= 1 && dt > 0.0, "series needs steps >= 1 and dt > 0");
  SnapshotSeries s;
  s.dt = dt;
  for (int k = 0; k <= steps; ++k)
    s.snapshots.push_back(gen_damped_oscillation(ws, k * dt));
  return s;
}

SnapshotSeries gen_lti_field(const Workspace& ws,
                             const std::vector<std::complex<double>>& cont_eigs,
                             std::uint64_t mode_seed, int steps, double dt) {
  require(!cont_eigs.empty(), "gen_lti_field needs at least one eigenvalue");
  require(steps >= 2 && dt > 0.0, "gen_lti_field needs steps >= 2 and dt > 0");
  const Index n = ws.size();
  require(Index(cont_eigs.size()) <= n,
          "more modes (" + std::to_string(cont_eigs.size()) +
              ") than spatial dimension (" + std::to_string(n) + ")");

  // Assign basis columns: one per real eigenvalue, two per complex pair or
  // unpaired complex eigenvalue.
  struct Term {
    std::complex<double> omega;
    Index col_a;
    Index col_b;  // -1 for a real mode
    bool conjugate;
  };
  std::vector<Term> terms;
  std::vector<bool> used(cont_eigs.size(), false);
  Index cols = 0;
  for (std::size_t j = 0; j < cont_eigs.size(); ++j) {
    if (used[j]) continue;
    used[j] = true;
    const auto w = cont_eigs[j];
    if (is_real(w)) {
      terms.push_back({w, cols++, -1, false});
      continue;
    }
    const Index a = cols++;
    const Index b = cols++;
    terms.push_back({w, a, b, false});
    for (std::size_t k = j + 1; k < cont_eigs.size(); ++k) {
      if (!used[k] && std::abs(cont_eigs[k] - std::conj(w)) <=
                          1e-12 * std::max(1.0, std::abs(w))) {
        used[k] = true;
        terms.push_back({cont_eigs[k], a, b, true});
        break;
      }
    }
  }
  require(cols <= n, "complex modes need " + std::to_string(cols) +
                         " basis vectors but the grid has " + std::to_string(n));

  Rng rng(mode_seed);
  Eigen::MatrixXd gauss(n, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index i = 0; i < n; ++i) gauss(i, c) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  const Eigen::MatrixXd basis =
      qr.householderQ() * Eigen::MatrixXd::Identity(n, cols);

  std::vector<Eigen::VectorXcd> modes;
  for (const Term& term : terms) {
    if (term.col_b < 0) {
      modes.push_back(basis.col(term.col_a).cast<std::complex<double>>());
    } else {
      Eigen::VectorXcd m(n);
      const double s = 1.0 / std::sqrt(2.0);
      for (Index i = 0; i < n; ++i)
        m[i] = {s * basis(i, term.col_a),
                (term.conjugate ? -s : s) * basis(i, term.col_b)};
      modes.push_back(std::move(m));
    }
  }

  SnapshotSeries series;
  series.dt = dt;
  series.snapshots.reserve(std::size_t(steps) + 1);
  for (int k = 0; k <= steps; ++k) {
    const double t = k * dt;
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    for (std::size_t j = 0; j < terms.size(); ++j)
      x += modes[j] * std::exp(terms[j].omega * t);
    series.snapshots.push_back({x.real(), t});
  }
  return series;
}

FieldSnapshot inject_noise(const FieldSnapshot& s, double variance,
                           std::uint64_t seed) {
  require(variance >= 0.0, "noise variance must be >= 0");
  FieldSnapshot out = s;
  if (variance == 0.0) return out;
  Rng rng(seed);
  const double sd = std::sqrt(variance);
  for (Index i = 0; i < out.values.size(); ++i) out.values[i] += rng.normal(0.0, sd);
  return out;
}

SnapshotSeries inject_noise(const SnapshotSeries& s, double variance,
                            std::uint64_t seed) {
  SnapshotSeries out;
  out.dt = s.dt;
  out.snapshots.reserve(s.size());
  for (std::size_t k = 0; k < s.size(); ++k)
    out.snapshots.push_back(inject_noise(s.snapshots[k], variance, derive_seed(seed, k)));
  return out;
}

}  // namespace hetsense
