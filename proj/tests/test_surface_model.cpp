#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "lorentz_iso/surface_model.hpp"

using namespace lorentz_iso;
using std::numbers::pi;

TEST_CASE("space form embeddings") {
  const Vec6 o = embed_space_form({Eigen::Vector4d::Zero(), 0}).as_vec6();
  CHECK(o[0] == -0.5);
  CHECK(o[5] == 0.5);
  CHECK(o.segment<4>(1).norm() == 0.0);

  Eigen::VectorXd s(5);
  s << 0.6, 0.8, 0.0, 0.0, 0.0;
  const Vec6 p = embed_space_form({s, 1}).as_vec6();
  CHECK(p[5] == 1.0);
  CHECK(std::abs(inner(p, p)) < 1e-15);

  Eigen::VectorXd h(5);
  h << 0, 0, 0, 1, 0;
  const Vec6 q = embed_space_form({h, -1}).as_vec6();
  CHECK(q == (Vec6() << 1, 0, 0, 0, 1, 0).finished());
  CHECK(inner(q, q) == 0.0);

  s[0] = 2.0;
  CHECK_THROWS_AS(embed_space_form({s, 1}), Error);
  CHECK_THROWS_AS(embed_space_form({Eigen::Vector3d::Zero(), 0}), Error);
  CHECK_THROWS_AS(embed_space_form({h, 2}), Error);
}

TEST_CASE("flat embedding encodes the Minkowski distance") {
  std::mt19937 rng(2);
  std::normal_distribution<double> d;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Vector4d x, y;
    for (int k = 0; k < 4; ++k) {
      x[k] = d(rng);
      y[k] = d(rng);
    }
    const Vec6 a = embed_space_form({x, 0}).as_vec6(), b = embed_space_form({y, 0}).as_vec6();
    const Eigen::Vector4d w = x - y;
    const double dist2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2] - w[3] * w[3];
    CHECK(inner(a, b) == doctest::Approx(-dist2 / 2).epsilon(1e-12));
    CHECK(std::abs(inner(a, a)) < 1e-12);
  }
}

TEST_CASE("homogeneous torus: base point, nullity and metric") {
  const auto angular = homogeneous_torus(2.0, TorusCoordinates::angular);
  const Vec6 y0 = angular.at(0, 0, 0).value();
  CHECK((y0 - (Vec6() << 1, 0, 0, 0, 1, 0).finished()).norm() < 1e-15);

  std::mt19937 rng(4);
  std::uniform_real_distribution<double> d(0, 2 * pi);
  for (auto coords : {TorusCoordinates::angular, TorusCoordinates::adapted}) {
    const auto chart = homogeneous_torus(2.0, coords);
    for (int trial = 0; trial < 50; ++trial) {
      const JetPoint p = chart.at(d(rng), d(rng), 1);
      const Vec6 y = p.value(), yu = p.partial(1, 0), yv = p.partial(0, 1);
      CHECK(std::abs(inner(y, y)) < 1e-14);
      CHECK(inner(yu, yu) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(inner(yv, yv) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(std::abs(inner(yu, yv)) < 1e-13);
    }
  }
  CHECK(angular.grid().periodic_u);
  CHECK(angular.grid().periodic_v);
  CHECK_THROWS_AS(homogeneous_torus(1.0), Error);
  CHECK_THROWS_AS(homogeneous_torus(0.5), Error);
}

TEST_CASE("homogeneous torus closes for rational t") {
  for (double t : {2.0, 1.5, 5.0 / 3.0}) {
    const auto chart = homogeneous_torus(t, TorusCoordinates::angular);
    const double period = chart.grid().u1 - chart.grid().u0;
    int q = 1;
    while (std::abs(t * q - std::round(t * q)) > 1e-12) ++q;
    CHECK(period == doctest::Approx(2 * pi * std::sqrt(t * t - 1) * q));
    for (double th : {0.0, 0.7, 2.1})
      for (double ph : {0.0, 1.3}) {
        const Vec6 a = chart.at(th, ph, 0).value(), b = chart.at(th + period, ph, 0).value();
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
      }
  }
}

TEST_CASE("rotated chart composes the rotation into the jets") {
  const auto base = homogeneous_torus(2.0, TorusCoordinates::angular);
  const double ang = 0.4;
  const auto rot = base.rotated(ang);
  const double u = 0.9, v = 1.7;
  const double du = u - base.grid().u0, dv = v - base.grid().v0;
  const double ub = base.grid().u0 + std::cos(ang) * du - std::sin(ang) * dv;
  const double vb = base.grid().v0 + std::sin(ang) * du + std::cos(ang) * dv;
  const JetPoint a = rot.at(u, v, 3), b = base.at(ub, vb, 3);
  CHECK((a.value() - b.value()).norm() < 1e-14);
  const Vec6 expect_u = std::cos(ang) * b.partial(1, 0) + std::sin(ang) * b.partial(0, 1);
  CHECK((a.partial(1, 0) - expect_u).norm() < 1e-13);
  // The Laplacian is rotation invariant.
  CHECK((a.partial(2, 0) + a.partial(0, 2) - b.partial(2, 0) - b.partial(0, 2)).norm() < 1e-12);
}

TEST_CASE("rotational surface is conformally parameterized") {
  const auto profile = ProfileCurve::polynomial({0, 1}, {0, 0, 0.5}, {});
  const auto chart = rotational_surface(profile, 1.0, 2.0, 24, 16);
  double worst = 0.0;
  for (int i = 0; i < chart.grid().nu; ++i)
    for (int j = 0; j < chart.grid().nv; ++j) {
      const JetPoint p = chart.node(i, j, 2);
      const Vec6 y = p.value(), yu = p.partial(1, 0), yv = p.partial(0, 1);
      CHECK(std::abs(inner(y, y)) < 1e-12);
      worst = std::max({worst, std::abs(inner(yu, yu) - inner(yv, yv)), std::abs(inner(yu, yv))});
    }
  CHECK(worst < 1e-8);

  // Finite-difference check of the metric on the grid itself.
  const auto fd = jets_from_samples(sample_values(chart.with_grid({chart.grid().u0, chart.grid().u1, 0, 2 * pi,
                                                                    65, 64, false, true})),
                                    1);
  const JetPoint q = fd.node(32, 10, 1);
  CHECK(inner(q.partial(1, 0), q.partial(1, 0)) ==
        doctest::Approx(inner(q.partial(0, 1), q.partial(0, 1))).epsilon(1e-2));

  // ut(u) is strictly increasing.
  double prev = -1.0;
  for (int k = 0; k <= 20; ++k) {
    const double ut = rotational_parameter(profile, 1.0, 1.0 + k / 20.0);
    CHECK(ut > prev);
    prev = ut;
  }
}

TEST_CASE("rotational surface rejects invalid profiles") {
  CHECK_THROWS_AS(rotational_surface(ProfileCurve::polynomial({1}, {0, 1}, {}), 0.0, 1.0), Error);
  CHECK_THROWS_AS(rotational_surface(ProfileCurve::polynomial({0, 1}, {0, 1}, {}), -1.0, 1.0), Error);
  CHECK_THROWS_AS(rotational_surface(ProfileCurve::polynomial({1, 1}, {0, 1}, {0, 1}), 0.0, 1.0), Error);
}

TEST_CASE("sampled jets are exact on affine data") {
  GridSpec g{0, 1, 0, 2, 9, 11, false, false};
  Grid<Vec6> values(g);
  Vec6 a, b, c;
  a << 1, 2, 3, 4, 5, 6;
  b << 0.5, -1, 0, 2, 1, 3;
  c << -2, 0, 1, 1, 0.25, 0;
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) values.at(i, j) = a + g.u(i) * b + g.v(j) * c;
  const auto chart = jets_from_samples(values, 4);
  for (int i : {0, 4, 8})
    for (int j : {0, 5, 10}) {
      const JetPoint p = chart.node(i, j, 4);
      CHECK((p.partial(1, 0) - b).norm() < 1e-12);
      CHECK((p.partial(0, 1) - c).norm() < 1e-12);
      CHECK(p.partial(2, 0).norm() < 1e-9);
      CHECK(p.partial(1, 1).norm() < 1e-9);
      CHECK(p.partial(0, 2).norm() < 1e-9);
    }
  CHECK(chart.node(0, 5, 2).lower_accuracy);
  CHECK_FALSE(chart.node(4, 5, 2).lower_accuracy);
}

TEST_CASE("sampled jets need enough nodes") {
  GridSpec g{0, 1, 0, 1, 2, 2, false, false};
  CHECK_THROWS_AS(jets_from_samples(Grid<Vec6>(g, Vec6::Zero()), 4), Error);
}

TEST_CASE("sampled torus jets converge at second order") {
  const auto analytic = homogeneous_torus(2.0, TorusCoordinates::angular);
  std::vector<double> err;
  for (int n : {32, 64, 128}) {
    GridSpec g = analytic.grid();
    g.nu = g.nv = n;
    const auto chart = analytic.with_grid(g);
    const auto sampled = jets_from_samples(sample_values(chart), 3);
    double e = 0.0;
    for (int k = 0; k < 4; ++k) {
      const int i = k * n / 4, j = (3 * k + 1) * n / 16;
      const JetPoint a = chart.node(i, j, 3), s = sampled.node(i, j, 3);
      for (int deg = 1; deg <= 3; ++deg)
        for (int q = 0; q <= deg; ++q) e = std::max(e, (a.partial(deg - q, q) - s.partial(deg - q, q)).norm());
    }
    err.push_back(e);
  }
  const double r1 = err[0] / err[1], r2 = err[1] / err[2];
  CHECK(r1 > 3.5);
  CHECK(r1 < 4.5);
  CHECK(r2 > 3.5);
  CHECK(r2 < 4.5);
}

TEST_CASE("chart CSV round trip and diagnostics") {
  const auto dir = std::filesystem::temp_directory_path() / "lorentz_iso_csv_test";
  std::filesystem::create_directories(dir);
  const auto chart = homogeneous_torus(2.0, TorusCoordinates::angular, 16, 16);
  const std::string path = (dir / "torus.csv").string();
  write_chart_csv(path, sample_values(chart));
  CsvChartOptions opts;
  opts.periodic_u = opts.periodic_v = true;
  opts.order = 2;
  const auto loaded = load_chart_csv(path, opts);
  CHECK(loaded.grid().nu == 16);
  CHECK(loaded.grid().nv == 16);
  CHECK(loaded.grid().u1 == doctest::Approx(chart.grid().u1));
  CHECK((loaded.node(3, 5, 0).value() - chart.node(3, 5, 0).value()).norm() < 1e-15);

  const std::string bad = (dir / "bad.csv").string();
  {
    std::ofstream out(bad);
    out << "u,v,x1,x2,x3,x4,x5,x6\n0,0,1,0,0,0,1,0\n0,1,1,0,0,0,0.5,0\n";
  }
  try {
    load_chart_csv(bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::input);
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  {
    std::ofstream out(bad);
    out << "u,v,x1,x2,x3,x4,x5\n";
  }
  CHECK_THROWS_AS(load_chart_csv(bad), Error);
  CHECK_THROWS_AS(load_chart_csv((dir / "missing.csv").string()), Error);
  std::filesystem::remove_all(dir);
}
