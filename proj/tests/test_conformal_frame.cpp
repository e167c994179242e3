#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lorentz_iso/conformal_frame.hpp"

using namespace lorentz_iso;
using std::numbers::pi;

namespace {

JetPoint torus_point(double u, double v, TorusCoordinates c = TorusCoordinates::adapted, int order = 5) {
  return homogeneous_torus(2.0, c).at(u, v, order);
}

/// Chart of an affine map into R^4_1 pushed through the flat embedding.
JetPoint flat_point(const Eigen::Matrix<double, 4, 2>& m, int order = 3) {
  const RJet U = RJet::variable_u(0.3, order), V = RJet::variable_v(0.2, order);
  std::array<RJet, 4> x;
  for (int k = 0; k < 4; ++k) x[k] = U * m(k, 0) + V * m(k, 1);
  return JetPoint{embed_flat(x)};
}

double proj_dist(const Vec6& a, const Vec6& b) { return projective_distance(a, b); }

}  // namespace

TEST_CASE("canonical lift of the torus is the identity rescaling") {
  const auto lift = canonical_lift(torus_point(0.4, 1.1, TorusCoordinates::angular));
  CHECK(std::abs(lift.scale_log) < 1e-14);
  CHECK(lift.conformality_residual < 1e-14);
  CHECK(lift.jet.order() == 4);
}

TEST_CASE("canonical lift removes constant and varying scale factors") {
  const JetPoint p = torus_point(0.4, 1.1);
  JetPoint q = p;
  const RJet f = exp(RJet::variable_u(0.4, 5) * 0.3 - RJet::variable_v(1.1, 5) * 0.2 + 1.5);
  for (auto& c : q.y) c = f * c;
  const auto a = canonical_lift(p), b = canonical_lift(q);
  for (int k = 0; k < 6; ++k)
    for (int c = 0; c < a.jet.y[k].size(); ++c) CHECK(a.jet.y[k][c] == doctest::Approx(b.jet.y[k][c]).epsilon(1e-12));
  const RJetVec yz = d_u(b.jet.y), yv = d_v(b.jet.y);
  CHECK((inner(yz, yz) + inner(yv, yv)).value() / 4 == doctest::Approx(0.5));
}

TEST_CASE("canonical lift rejects bad input") {
  Eigen::Matrix<double, 4, 2> lorentzian;
  lorentzian << 1, 0, 0, 0, 0, 0, 0, 1;
  CHECK_THROWS_WITH_AS(canonical_lift(flat_point(lorentzian)), doctest::Contains("causality"), Error);
  Eigen::Matrix<double, 4, 2> stretched;
  stretched << 2, 0, 0, 1, 0, 0, 0, 0;
  CHECK_THROWS_WITH_AS(canonical_lift(flat_point(stretched)), doctest::Contains("conformality"), Error);
  JetPoint zero;
  for (auto& c : zero.y) c = RJet(0.0, 3);
  CHECK_THROWS_AS(canonical_lift(zero), Error);
}

TEST_CASE("moving frame normalization on the torus") {
  const auto lift = canonical_lift(torus_point(0.0, 0.0));
  const MovingFrame f = moving_frame(lift);
  CHECK(inner(f.N, f.Y) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(inner(f.N, f.N)) < 1e-12);
  CHECK(f.gram_residual < 1e-10);
  const std::array<Vec6, 6> v = {f.Y, f.Yu(), f.Yv(), f.N, f.R, f.L};
  CHECK(orientation_det(v) > 0.0);

  FrameOptions rev;
  rev.reversed_orientation = true;
  const MovingFrame g = moving_frame(lift, rev);
  CHECK(proj_dist(g.L, f.R) < 1e-12);
  CHECK(proj_dist(g.R, f.L) < 1e-12);
}

TEST_CASE("frame Gram matrix has the normal form at random points") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> d(0, 6);
  const auto chart = homogeneous_torus(2.0);
  const auto rot = rotational_surface(ProfileCurve::polynomial({0, 1}, {0, 0, 0.5}, {}), 1.0, 2.0, 8, 8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = analyze_point(chart.at(d(rng), d(rng), 5));
    CHECK(a.frame.gram_residual < 1e-10);
    const auto b = analyze_point(rot.at(d(rng) / 6 * rot.grid().u1, d(rng), 5));
    CHECK(b.frame.gram_residual < 1e-10);
  }
}

TEST_CASE("torus invariants in the adapted chart") {
  // Reference values from a symbolic computation of the t = 2 torus.
  const auto a = analyze_point(torus_point(0.7, 2.3));
  CHECK(a.inv.gauge == GaugeKind::lambda2_half);
  CHECK(std::abs(a.inv.s - cplx(0, -1.0 / 6)) < 1e-12);
  CHECK(std::abs(a.inv.lambda2 - 0.5) < 1e-12);
  CHECK(std::abs(a.inv.lambda1 + 1.0 / 3) < 1e-12);
  CHECK(a.inv.beta == doctest::Approx(-1.0 / 3).epsilon(1e-12));
  CHECK(a.inv.beta_direct == doctest::Approx(a.inv.beta).epsilon(1e-10));
  CHECK(a.inv.has_alpha);
  CHECK(a.inv.has_alpha_z);
  // Codazzi with constant invariants forces Im(conj(alpha)^2) = -Im(conj(s))/2.
  CHECK(std::imag(std::conj(a.inv.alpha) * std::conj(a.inv.alpha)) == doctest::Approx(-1.0 / 12).epsilon(1e-10));
}

TEST_CASE("torus invariants in the angular chart") {
  const auto a = analyze_point(torus_point(0.7, 2.3, TorusCoordinates::angular), GaugePolicy::raw);
  CHECK(std::abs(a.inv.s - 1.0 / 6) < 1e-12);
  CHECK(a.inv.beta == doctest::Approx(-1.0 / 3).epsilon(1e-12));
  // lambda1 lambda2 is gauge invariant. The Hopf differential is imaginary here,
  // so the product has the opposite sign to the adapted chart.
  CHECK(std::abs(a.inv.lambda1 * a.inv.lambda2 - 1.0 / 6) < 1e-12);
}

TEST_CASE("Hopf components are real across the adapted torus grid") {
  const auto chart = homogeneous_torus(2.0, TorusCoordinates::adapted, 12, 12);
  const auto an = analyze_chart(chart);
  double im = 0.0;
  for (const auto& r : an.inv) im = std::max({im, std::abs(r.lambda1.imag()), std::abs(r.lambda2.imag())});
  CHECK(im < 1e-9);
  for (const auto& r : an.inv) CHECK(r.beta == doctest::Approx(r.beta_direct).epsilon(1e-10));
  CHECK(an.max_gram < 1e-10);
  CHECK(an.min_lambda_sum == doctest::Approx(5.0 / 6));
}

TEST_CASE("gauge transform covariance") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> d(-0.5, 0.5);
  const double u = 0.9, v = 0.4;
  const auto base = analyze_point(torus_point(u, v, TorusCoordinates::adapted, 6));
  for (int trial = 0; trial < 10; ++trial) {
    const RJet U = RJet::variable_u(u, 3), V = RJet::variable_v(v, 3);
    const RJet g = U * d(rng) + V * V * d(rng) + sin(U * V) * d(rng) + d(rng);
    const auto [frame, predicted] = gauge_transform(base.frame, base.inv, g);
    const auto recomputed = invariants(frame);
    CHECK(std::abs(recomputed.lambda1 - predicted.lambda1) < 1e-10);
    CHECK(std::abs(recomputed.lambda2 - predicted.lambda2) < 1e-10);
    CHECK(std::abs(recomputed.alpha - predicted.alpha) < 1e-10);
    CHECK(std::abs(recomputed.gamma1 - predicted.gamma1) < 1e-10);
    CHECK(std::abs(recomputed.gamma2 - predicted.gamma2) < 1e-10);
    CHECK(std::abs(recomputed.s - base.inv.s) < 1e-10);
    CHECK(recomputed.beta == doctest::Approx(base.inv.beta).epsilon(1e-10));
    CHECK(proj_dist(frame.L, base.frame.L) < 1e-12);
    CHECK(proj_dist(frame.R, base.frame.R) < 1e-12);
    CHECK(frame.gram_residual < 1e-10);
  }
}

TEST_CASE("gauge transforms compose additively") {
  const auto base = analyze_point(torus_point(0.2, 0.1));
  const RJet U = RJet::variable_u(0.2, 2), V = RJet::variable_v(0.1, 2);
  const RJet g1 = U * 0.3 + 0.1, g2 = V * U * -0.2 + 0.05;
  const auto [f1, r1] = gauge_transform(base.frame, base.inv, g1);
  const auto [f12, r12] = gauge_transform(f1, r1, g2);
  const auto [f, r] = gauge_transform(base.frame, base.inv, g1 + g2);
  CHECK((f12.L - f.L).norm() < 1e-13);
  CHECK(std::abs(r12.alpha - r.alpha) < 1e-13);
  CHECK(std::abs(r12.lambda1 - r.lambda1) < 1e-13);
  const auto [f0, r0] = gauge_transform(base.frame, base.inv, RJet(0.0, 2));
  CHECK((f0.L - base.frame.L).norm() == 0.0);
  CHECK(r0.lambda2 == base.inv.lambda2);
}

TEST_CASE("lambda2 gauge normalizes lambda2 to one half") {
  const auto raw = analyze_point(torus_point(1.0, 0.5), GaugePolicy::raw);
  const auto fixed = invariants(raw.frame, GaugePolicy::lambda2_half);
  CHECK(std::abs(fixed.lambda2 - 0.5) < 1e-12);
  const auto l1 = invariants(raw.frame, GaugePolicy::lambda1_half);
  CHECK(std::abs(l1.lambda1 - 0.5) < 1e-12);
  CHECK(l1.gauge == GaugeKind::lambda1_half);
}

TEST_CASE("structure and compatibility residuals vanish on analytic charts") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> d(0, 6);
  const auto torus = homogeneous_torus(2.0);
  const auto rot = rotational_surface(ProfileCurve::polynomial({0, 1}, {0, 0, 0.5}, {}), 1.0, 2.0, 8, 8);
  for (int trial = 0; trial < 10; ++trial) {
    for (const auto* chart : {&torus, &rot}) {
      const double u = d(rng) / 6 * chart->grid().u1;
      const auto a = analyze_point(chart->at(u, d(rng), 5));
      const auto s = structure_residuals(a.frame);
      CHECK(s.yzz < 1e-10);
      CHECK(s.yzzbar < 1e-10);
      CHECK(s.nz < 1e-9);
      CHECK(s.lz < 1e-9);
      CHECK(s.rz < 1e-9);
      const auto c = compatibility_residuals(a.frame);
      CHECK(c.gauss < 1e-8);
      CHECK(c.codazzi1 < 1e-8);
      CHECK(c.codazzi2 < 1e-8);
      CHECK(c.ricci < 1e-8);
    }
  }
}

TEST_CASE("connection matrices reproduce frame derivatives") {
  const auto chart = homogeneous_torus(2.0);
  const auto rot = rotational_surface(ProfileCurve::polynomial({0, 1}, {0, 0, 0.5}, {}), 1.0, 2.0, 8, 8);
  for (const auto* c : {&chart, &rot}) {
    const double u = 0.3 * c->grid().u1, v = 1.3;
    const auto a = analyze_point(c->at(u, v, 6));
    const auto& J = *a.frame.jets;
    const Connection A = connection_matrices(a.inv);
    const Mat6x6 F = frame_matrix(a.frame);
    Mat6x6 Fu, Fv;
    Fu << partial(J.Y, 1, 0), partial(J.Yu, 1, 0), partial(J.Yv, 1, 0), partial(J.N, 1, 0), partial(J.L, 1, 0),
        partial(J.R, 1, 0);
    Fv << partial(J.Y, 0, 1), partial(J.Yu, 0, 1), partial(J.Yv, 0, 1), partial(J.N, 0, 1), partial(J.L, 0, 1),
        partial(J.R, 0, 1);
    CHECK((F * A.Au - Fu).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((F * A.Av - Fv).cwiseAbs().maxCoeff() < 1e-9);
  }
}
