#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lorentz_iso/pseudo_euclidean.hpp"

using namespace lorentz_iso;

namespace {

PseudoVector basis(int k) {
  Vec6 v = Vec6::Zero();
  v[k] = 1.0;
  return PseudoVector(v);
}

PseudoVector vec(std::initializer_list<double> xs) {
  Vec6 v;
  int k = 0;
  for (double x : xs) v[k++] = x;
  return PseudoVector(v);
}

Vec6 random_vec(std::mt19937& rng) {
  std::normal_distribution<double> d;
  Vec6 v;
  for (int k = 0; k < 6; ++k) v[k] = d(rng);
  return v;
}

}  // namespace

TEST_CASE("inner product on basis vectors") {
  CHECK(inner(basis(0), basis(0)) == 1.0);
  CHECK(inner(basis(4), basis(4)) == -1.0);
  const auto n = vec({1, 0, 0, 0, 1, 0});
  CHECK(inner(n, n) == 0.0);
}

TEST_CASE("inner product rejects mismatched signatures") {
  PseudoVector a(Eigen::VectorXd::Ones(5), Signature::r51());
  PseudoVector b(Eigen::VectorXd::Ones(5), Signature::r52());
  CHECK_THROWS_AS(inner(a, b), Error);
  CHECK_THROWS_AS(PseudoVector(Eigen::VectorXd::Ones(4), Signature::r62()), Error);
  CHECK_THROWS_AS(Signature::make(-1, 2), Error);
}

TEST_CASE("complex inner product is bilinear without conjugation") {
  CVec6 z = CVec6::Zero();
  z[0] = {1.0, 0.0};
  z[1] = {0.0, 1.0};
  ComplexPseudoVector w(z);
  CHECK(std::abs(inner(w, w)) < 1e-15);
  CHECK(inner(w, w.conj()).real() == doctest::Approx(2.0));
}

TEST_CASE("inner is symmetric and bilinear") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> s(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const PseudoVector x(random_vec(rng)), y(random_vec(rng)), z(random_vec(rng));
    const double a = s(rng), b = s(rng);
    CHECK(inner(x, y) == doctest::Approx(inner(y, x)));
    CHECK(inner(x * a + y * b, z) == doctest::Approx(a * inner(x, z) + b * inner(y, z)));
  }
}

TEST_CASE("null basis of the (e1, e5) plane") {
  const auto nb = null_basis_of_lorentzian_plane(basis(0), basis(4));
  CHECK(std::abs(inner(nb.L, nb.L)) < 1e-14);
  CHECK(std::abs(inner(nb.R, nb.R)) < 1e-14);
  CHECK(inner(nb.L, nb.R) == doctest::Approx(-1.0));
  // One valid output is L=(e1+e5)/sqrt2, R=(-e1+e5)/sqrt2; ours spans the same null lines.
  const auto l_ref = vec({1, 0, 0, 0, 1, 0}), r_ref = vec({-1, 0, 0, 0, 1, 0});
  const double dl = std::min(projective_distance(ProjectivePoint(nb.L), ProjectivePoint(l_ref)),
                             projective_distance(ProjectivePoint(nb.L), ProjectivePoint(r_ref)));
  CHECK(dl < 1e-14);
}

TEST_CASE("null basis rejects non-Lorentzian planes") {
  CHECK_THROWS_AS(null_basis_of_lorentzian_plane(basis(0), basis(1)), Error);
  CHECK_THROWS_AS(null_basis_of_lorentzian_plane(basis(4), basis(5)), Error);
  CHECK_THROWS_AS(null_basis_of_lorentzian_plane(basis(0), basis(0) * 2.0), Error);
}

TEST_CASE("null basis is invariant under rescaling the inputs") {
  const auto a = null_basis_of_lorentzian_plane(basis(0), basis(4));
  const auto b = null_basis_of_lorentzian_plane(basis(0) * 2.0, basis(4) * 3.0);
  auto d = [](const PseudoVector& x, const PseudoVector& y) {
    return projective_distance(ProjectivePoint(x), ProjectivePoint(y));
  };
  CHECK(std::min(d(a.L, b.L), d(a.L, b.R)) < 1e-14);
  CHECK(std::min(d(a.R, b.L), d(a.R, b.R)) < 1e-14);
}

TEST_CASE("null basis properties on random Lorentzian planes") {
  std::mt19937 rng(3);
  int tested = 0;
  while (tested < 300) {
    const Vec6 b1 = random_vec(rng), b2 = random_vec(rng);
    const double g11 = inner(b1, b1), g12 = inner(b1, b2), g22 = inner(b2, b2);
    if (g11 * g22 - g12 * g12 > -1e-3) continue;
    ++tested;
    const auto nb = null_basis_of_lorentzian_plane(PseudoVector(b1), PseudoVector(b2));
    const double scale = b1.squaredNorm() + b2.squaredNorm();
    CHECK(std::abs(inner(nb.L, nb.L)) < 1e-10 * scale);
    CHECK(std::abs(inner(nb.R, nb.R)) < 1e-10 * scale);
    CHECK(std::abs(inner(nb.L, nb.R) + 1.0) < 1e-10);
    Eigen::Matrix<double, 6, 4> m;
    m << b1, b2, nb.L.as_vec6(), nb.R.as_vec6();
    Eigen::FullPivLU<Eigen::Matrix<double, 6, 4>> lu(m);
    lu.setThreshold(1e-9);
    CHECK(lu.rank() == 2);
  }
}

TEST_CASE("orientation determinant") {
  std::vector<PseudoVector> e;
  for (int k = 0; k < 6; ++k) e.push_back(basis(k));
  CHECK(orientation_det(e) == doctest::Approx(1.0));
  std::swap(e[0], e[1]);
  CHECK(orientation_det(e) == doctest::Approx(-1.0));
  e[2] = e[0];
  CHECK(orientation_det(e) == 0.0);

  std::mt19937 rng(5);
  std::uniform_int_distribution<int> pick(0, 5);
  for (int trial = 0; trial < 50; ++trial) {
    std::array<Vec6, 6> v;
    for (auto& x : v) x = random_vec(rng);
    const double d0 = orientation_det(v);
    int a = pick(rng), b = pick(rng);
    if (a == b) b = (a + 1) % 6;
    std::swap(v[a], v[b]);
    CHECK(orientation_det(v) == doctest::Approx(-d0));
  }
}

TEST_CASE("projective distance") {
  const ProjectivePoint p(vec({1, 0, 0, 0, 1, 0})), q(vec({-2, 0, 0, 0, -2, 0}));
  CHECK(projective_distance(p, q) < 1e-15);
  CHECK(projective_distance(ProjectivePoint(basis(0)), ProjectivePoint(basis(1))) == doctest::Approx(1.0));
  CHECK(projective_distance(ProjectivePoint(basis(0)), ProjectivePoint(vec({1, 1, 0, 0, 0, 0}))) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(ProjectivePoint(PseudoVector(Vec6::Zero())), Error);

  std::mt19937 rng(9);
  std::uniform_real_distribution<double> s(0.1, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec6 a = random_vec(rng), b = random_vec(rng);
    const double d = projective_distance(ProjectivePoint(PseudoVector(a)), ProjectivePoint(PseudoVector(b)));
    CHECK(d == doctest::Approx(projective_distance(ProjectivePoint(PseudoVector(b)), ProjectivePoint(PseudoVector(a)))));
    CHECK(d == doctest::Approx(projective_distance(ProjectivePoint(PseudoVector(a * s(rng))),
                                                   ProjectivePoint(PseudoVector(b * -s(rng))))));
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
  }
}
