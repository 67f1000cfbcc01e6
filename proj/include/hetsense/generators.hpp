#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "hetsense/workspace.hpp"

namespace hetsense {

/// Grid coordinate mapped affinely onto [-1, 1] (0 for a single-cell axis).
double normalized_coordinate(int i, int count);

/// The damped-oscillation test field (complex form):
///   f(x, y, t) = senh(x) senh(y) (1.9 i)^(-t),  senh(z) = (e^z + e^-z) / 2,
/// with (1.9 i)^(-t) evaluated on the principal branch and grid coordinates
/// mapped to [-1, 1]^2.
Eigen::VectorXcd damped_oscillation_complex(const Workspace& ws, double t);

/// Real part of damped_oscillation_complex; the observable field.
FieldSnapshot gen_damped_oscillation(const Workspace& ws, double t);

/// Series of damped-oscillation snapshots at times k * dt, k = 0..steps.
SnapshotSeries gen_damped_oscillation_series(const Workspace& ws, int steps,
                                             double dt);

/// Linear time-invariant field with prescribed continuous-time eigenvalues.
///
/// Spatial modes are drawn as a random orthonormal basis (seeded by
/// `mode_seed`). A real eigenvalue gets one real unit mode; a complex
/// eigenvalue gets a unit complex mode (q_a + i q_b) / sqrt(2) built from two
/// basis vectors, and its conjugate (listed or not) gets the conjugate mode, so
/// the real field excites every requested eigenvalue. Snapshots are
///   x(k) = Re sum_j mode_j exp(omega_j k dt),   k = 0..steps.
SnapshotSeries gen_lti_field(const Workspace& ws,
                             const std::vector<std::complex<double>>& cont_eigs,
                             std::uint64_t mode_seed, int steps, double dt);

/// Adds i.i.d. N(0, variance) noise; deterministic in `seed`.
FieldSnapshot inject_noise(const FieldSnapshot& s, double variance,
                           std::uint64_t seed);

/// Noise on every snapshot of a series; snapshot k uses stream k of `seed`.
SnapshotSeries inject_noise(const SnapshotSeries& s, double variance,
                            std::uint64_t seed);

}  // namespace hetsense
