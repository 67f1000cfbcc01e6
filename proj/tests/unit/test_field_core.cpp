#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>

#include "hetsense/dmd.hpp"
#include "hetsense/error.hpp"
#include "hetsense/generators.hpp"
#include "hetsense/matrix_io.hpp"
#include "hetsense/random.hpp"
#include "hetsense/workspace.hpp"

using namespace hetsense;

TEST_CASE("workspace index mapping is a bijection") {
  const Workspace ws(7, 5, 0.5);
  CHECK(ws.size() == 35);
  for (Index i = 0; i < ws.size(); ++i) CHECK(ws.index_of(ws.point_of(i)) == i);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 7; ++x) CHECK(ws.point_of(ws.index_of({x, y})) == GridPoint{x, y});
  CHECK_THROWS_AS(ws.point_of(35), Error);
  CHECK_THROWS_AS(ws.index_of({7, 0}), Error);
  CHECK_THROWS_AS(Workspace(0, 3), Error);
  CHECK(ws.position(ws.index_of({2, 3})).isApprox(Eigen::Vector2d(1.0, 1.5)));
}

TEST_CASE("damped oscillation at the origin of a 1x1 grid") {
  const Workspace ws(1, 1);
  CHECK(gen_damped_oscillation(ws, 0.0).values[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("damped oscillation matches the closed form at t = 1") {
  const Workspace ws(5, 4);
  const FieldSnapshot s = gen_damped_oscillation(ws, 1.0);
  // (1.9 i)^-1 = -i / 1.9, so the real part vanishes.
  for (Index i = 0; i < ws.size(); ++i) CHECK(std::abs(s.values[i]) < 1e-15);

  const double t = 0.37;
  const FieldSnapshot u = gen_damped_oscillation(ws, t);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 5; ++x) {
      const double cx = -1.0 + 2.0 * x / 4.0, cy = -1.0 + 2.0 * y / 3.0;
      const double mag = std::cosh(cx) * std::cosh(cy) * std::pow(1.9, -t);
      const double expect = mag * std::cos(-t * std::numbers::pi / 2.0);
      CHECK(u.values[ws.index_of({x, y})] == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("damped oscillation envelope decays as 1.9^-t") {
  const Workspace ws(6, 6);
  for (double t : {0.25, 2.0, 3.5}) {
    const double ratio = damped_oscillation_complex(ws, t).cwiseAbs().maxCoeff() /
                         damped_oscillation_complex(ws, 0.0).cwiseAbs().maxCoeff();
    CHECK(std::abs(ratio - std::pow(1.9, -t)) < 1e-9);
  }
}

TEST_CASE("lti field with zero rate is constant") {
  const Workspace ws(4, 3);
  const SnapshotSeries s = gen_lti_field(ws, {{0.0, 0.0}}, 11, 20, 0.1);
  REQUIRE(s.size() == 21);
  for (const auto& snap : s.snapshots) CHECK((snap.values - s.snapshots[0].values).norm() < 1e-14);
  CHECK(s.snapshots[0].values.norm() == doctest::Approx(1.0));
}

TEST_CASE("lti field eigenvalue recovered by batch DMD") {
  const Workspace ws(6, 5);
  const SnapshotSeries s = gen_lti_field(ws, {{-1.0, 0.0}}, 3, 1000, 0.01);
  const DmdModel m = fit_dmd(make_pair(s));
  REQUIRE(m.rank() == 1);
  CHECK(std::abs(m.eigenvalues[0] - std::exp(-0.01)) < 1e-8);
}

TEST_CASE("lti field complex pair decays with envelope e^-t") {
  const Workspace ws(5, 5);
  const SnapshotSeries s = gen_lti_field(ws, {{-1.0, 2.0}, {-1.0, -2.0}}, 5, 300, 0.01);
  // Real modes from a conjugate pair are orthogonal with equal norm, so the
  // snapshot norm is exactly sqrt(2) e^-t at every step.
  for (std::size_t k = 0; k < s.size(); k += 37) {
    const double t = s.snapshots[k].time;
    CHECK(s.snapshots[k].values.norm() == doctest::Approx(std::sqrt(2.0) * std::exp(-t)).epsilon(1e-12));
  }
}

TEST_CASE("lti field with real negative rates has decreasing norms") {
  const Workspace ws(4, 4);
  const SnapshotSeries s = gen_lti_field(ws, {{-1.0, 0.0}, {-3.0, 0.0}, {-0.5, 0.0}}, 9, 100, 0.05);
  for (std::size_t k = 1; k < s.size(); ++k)
    CHECK(s.snapshots[k].values.norm() < s.snapshots[k - 1].values.norm());
}

TEST_CASE("lti field rejects more modes than points") {
  const Workspace ws(2, 1);
  CHECK_THROWS_AS(gen_lti_field(ws, {{-1, 0}, {-2, 0}, {-3, 0}}, 1, 10, 0.1), Error);
}

TEST_CASE("inject_noise contracts") {
  const Workspace ws(400, 250);
  FieldSnapshot clean{Eigen::VectorXd::LinSpaced(ws.size(), -1.0, 1.0), 0.0};

  CHECK(inject_noise(clean, 0.0, 7).values == clean.values);

  const FieldSnapshot a = inject_noise(clean, 0.04, 7);
  const FieldSnapshot b = inject_noise(clean, 0.04, 7);
  CHECK(a.values == b.values);
  CHECK(inject_noise(clean, 0.04, 8).values != a.values);

  const Eigen::VectorXd d = a.values - clean.values;
  const double mean = d.mean();
  const double var = (d.array() - mean).square().sum() / double(d.size() - 1);
  CHECK(std::abs(var - 0.04) < 0.05 * 0.04);
  CHECK_THROWS_AS(inject_noise(clean, -1.0, 1), Error);
}

TEST_CASE("downsample picks every step-th row and column") {
  const Workspace ws(4, 4);
  FieldSnapshot s{Eigen::VectorXd::LinSpaced(16, 0, 15), 0.0};
  auto [same, ws1] = downsample(s, ws, 1, 1);
  CHECK(same.values == s.values);
  CHECK(ws1 == ws);

  auto [c, cws] = downsample(s, ws, 2, 2);
  REQUIRE(cws.width() == 2);
  REQUIRE(cws.height() == 2);
  CHECK(c.values[cws.index_of({0, 0})] == s.values[ws.index_of({0, 0})]);
  CHECK(c.values[cws.index_of({1, 0})] == s.values[ws.index_of({2, 0})]);
  CHECK(c.values[cws.index_of({0, 1})] == s.values[ws.index_of({0, 2})]);
  CHECK(c.values[cws.index_of({1, 1})] == s.values[ws.index_of({2, 2})]);
}

TEST_CASE("downsample sizes use ceiling division") {
  const Workspace big(96, 384);
  const Workspace c = downsample(big, 2, 2);
  CHECK(c.width() == 48);
  CHECK(c.height() == 192);
  const Workspace odd = downsample(Workspace(7, 10), 3, 4);
  CHECK(odd.width() == 3);
  CHECK(odd.height() == 3);
}

TEST_CASE("series validation and matrix round trip") {
  SnapshotSeries s = SnapshotSeries::from_matrix(Eigen::MatrixXd::Random(5, 4), 0.2);
  CHECK_NOTHROW(s.validate());
  CHECK(s.matrix().cols() == 4);
  s.snapshots[2].time += 0.05;
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("series file round trip in both formats") {
  const auto dir = std::filesystem::temp_directory_path() / "hetsense_field_core_io";
  std::filesystem::create_directories(dir);
  const SnapshotSeries s = SnapshotSeries::from_matrix(Eigen::MatrixXd::Random(6, 9), 0.01);
  for (const char* name : {"s.bin", "s.csv"}) {
    write_series(dir / name, s);
    const SnapshotSeries r = read_series(dir / name);
    CHECK(r.dt == doctest::Approx(0.01).epsilon(1e-15));
    CHECK((r.matrix() - s.matrix()).cwiseAbs().maxCoeff() < 1e-15);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("derived seeds are deterministic and distinct") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
}
