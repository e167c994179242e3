#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lorentz_iso/detail/lattice.hpp"
#include "lorentz_iso/integrability.hpp"
#include "lorentz_iso/transforms.hpp"

using namespace lorentz_iso;
using detail::Block;
using detail::JetMatrix6;

namespace {

/// Generator of a rotation in the (a, b) coordinate plane.
Mat6 rotation_generator(int a, int b) {
  Mat6 m = Mat6::Zero();
  m(a, b) = 1.0;
  m(b, a) = -1.0;
  return m;
}

/// x exp(t G) for the generator above, written out.
Block rotate(const Block& x, int a, int b, double t) {
  Mat6 r = Mat6::Identity();
  r(a, a) = r(b, b) = std::cos(t);
  r(a, b) = std::sin(t);
  r(b, a) = -std::sin(t);
  return x * r;
}

JetMatrix6 constant_jets(const Mat6& m, int order) {
  JetMatrix6 out;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) out[r][c] = RJet(m(r, c), order);
  return out;
}

SurfaceChart rotational_example(int n = 16) {
  return rotational_surface(ProfileCurve::polynomial({0, 1}, {0, 0, 0.5}, {0}), 1.0, 2.0, n, n);
}

SurfaceChart torus(int n = 16) { return homogeneous_torus(2.0, TorusCoordinates::adapted, n, n); }

template <class F>
double grid_max(const GridSpec& g, F&& f) {
  double m = 0.0;
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) m = std::max(m, f(i, j));
  return m;
}

const DarbouxState& rotational_darboux(double theta) {
  static const DarbouxState plus = darboux_transform(rotational_example(), 1.0);
  static const DarbouxState minus = darboux_transform(rotational_example(), -1.0);
  return theta > 0 ? plus : minus;
}

}  // namespace

TEST_CASE("transfer matches the exponential of a constant generator") {
  const Mat6 g = rotation_generator(1, 4);
  const std::vector<Mat6> a{g, Mat6::Zero(), Mat6::Zero()};
  Block x = Block::Random(3, 6);
  for (double h : {0.1, -0.37, 1.3}) {
    const Block got = detail::transfer(x, a, h);
    CHECK((got - rotate(x, 1, 4, h)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("node Taylor coefficients of a commuting constant connection") {
  const Mat6 au = rotation_generator(0, 2), av = rotation_generator(3, 5);
  const Block x = Block::Random(2, 6);
  const int order = 5;
  const auto c = detail::node_taylor(x, constant_jets(au, order), constant_jets(av, order), order);
  Mat6 pu = Mat6::Identity();
  double fi = 1.0;
  for (int i = 0; i <= order; ++i) {
    Mat6 pv = Mat6::Identity();
    double fj = 1.0;
    for (int j = 0; i + j <= order; ++j) {
      const Block want = x * pu * pv / (fi * fj);
      CHECK((c[jet_detail::index(i, j)] - want).cwiseAbs().maxCoeff() < 1e-14);
      pv = pv * av;
      fj *= j + 1;
    }
    pu = pu * au;
    fi *= i + 1;
  }
}

TEST_CASE("lattice integration: exact for commuting, path dependent otherwise") {
  GridSpec g;
  g.u1 = g.v1 = 2.0;
  g.nu = g.nv = 9;
  const Block x0 = Mat6::Identity();
  const auto commuting = [&](int, int, int order) {
    return std::pair{constant_jets(rotation_generator(0, 2), order), constant_jets(rotation_generator(3, 5), order)};
  };
  const auto sol = detail::integrate_lattice(g, {4, 4}, x0, commuting, 4);
  CHECK(sol.path_residual < 1e-13);
  double err = 0.0;
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) {
      const Block want = rotate(rotate(x0, 0, 2, g.u(i) - g.u(4)), 3, 5, g.v(j) - g.v(4));
      err = std::max(err, (sol.values.at(i, j) - want).cwiseAbs().maxCoeff());
    }
  CHECK(err < 1e-12);

  const auto clashing = [&](int, int, int order) {
    return std::pair{constant_jets(rotation_generator(0, 1), order), constant_jets(rotation_generator(1, 2), order)};
  };
  CHECK(detail::integrate_lattice(g, {0, 0}, x0, clashing, 4).path_residual > 1e-2);
  CHECK_THROWS_AS(detail::integrate_lattice(g, {9, 0}, x0, clashing, 4), Error);
}

TEST_CASE("polar surfaces of the torus are isothermic") {
  for (PolarSide side : {PolarSide::left, PolarSide::right}) {
    const PolarResult p = polar(torus(), side);
    CHECK(p.degenerate_count == 0);
    const auto cert = isothermic_check(analyze_chart(p.surface), 1e-6);
    CHECK(cert.is_isothermic);
    CHECK(cert.max_im_kappa < 1e-9);
  }
}

TEST_CASE("L_z = alpha L + conj(alpha) Y + Y_zbar in the lambda2 = 1/2 gauge") {
  for (const SurfaceChart& chart : {torus(8), rotational_example(8)}) {
    const double worst = grid_max(chart.grid(), [&](int i, int j) {
      const PointAnalysis a = analyze_point(chart.node(i, j, 5));
      const MovingFrame& f = a.frame;
      const CVec6 lz = value(d_z(f.jets->L));
      return (lz - (a.inv.alpha * f.L.cast<cplx>() + std::conj(a.inv.alpha) * f.Y.cast<cplx>() + f.Yzbar)).norm();
    });
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("closed-form polar invariants agree with the polar chart") {
  for (const SurfaceChart& chart : {torus(8), rotational_example(8)}) {
    const PolarResult p = polar(chart, PolarSide::left);
    REQUIRE(p.closed_form_invariants);
    AnalysisOptions o;
    o.gauge = GaugePolicy::lambda1_half;
    const ChartAnalysis direct = analyze_chart(p.surface, p.analysis_options(o));
    double worst = 0.0, reality = 0.0, shift = 0.0;
    for (std::size_t k = 0; k < direct.grid.size(); ++k) {
      const InvariantRecord &d = direct.inv[k], &c = (*p.closed_form_invariants)[k], &s = p.source.inv[k];
      worst = std::max({worst, std::abs(d.s - c.s), std::abs(d.lambda1 - c.lambda1), std::abs(d.lambda2 - c.lambda2),
                        std::abs(d.alpha - c.alpha)});
      reality = std::max(reality, std::abs(c.lambda2.imag()));
      shift = std::max(shift, std::abs(c.s - s.s + 4.0 * s.alpha_z));
    }
    CHECK(worst < 1e-6);
    CHECK(reality < 1e-7);
    CHECK(shift < 1e-14);
  }
}

TEST_CASE("left and right polar are mutually inverse; two-step polar") {
  const SurfaceChart src = rotational_example(8);
  const SurfaceChart left = polar_chart(src, PolarSide::left), right = polar_chart(src, PolarSide::right);
  const SurfaceChart rl = polar_chart(left, PolarSide::right), lr = polar_chart(right, PolarSide::left);
  const SurfaceChart ll = polar_chart(left, PolarSide::left), two = two_step_polar(src);
  double dual = 0.0, step = 0.0, null = 0.0, pairing = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const Vec6 y = value(src.node(i, j, 0).y);
      const Vec6 yhat = value(two.node(i, j, 0).y);
      const Vec6 y_lift = analyze_point(src.node(i, j, 5)).frame.Y;
      dual = std::max({dual, projective_distance(value(rl.node(i, j, 0).y), y),
                       projective_distance(value(lr.node(i, j, 0).y), y)});
      step = std::max(step, projective_distance(value(ll.node(i, j, 0).y), yhat));
      null = std::max(null, std::abs(inner(yhat, yhat)));
      pairing = std::max(pairing, std::abs(inner(yhat, y_lift) + 1.0));
    }
  CHECK(dual < 1e-6);
  CHECK(step < 1e-6);
  CHECK(null < 1e-7);
  CHECK(pairing < 1e-7);
}

TEST_CASE("polar degeneracy of the null graph surface") {
  const SurfaceChart ng = null_graph_surface(8, 8);
  const bool left_ok = [&] {
    try {
      polar(ng, PolarSide::left);
      return true;
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::degenerate_transform);
      return false;
    }
  }();
  const bool right_ok = [&] {
    try {
      polar(ng, PolarSide::right);
      return true;
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::degenerate_transform);
      return false;
    }
  }();
  CHECK(left_ok != right_ok);
  CHECK_THROWS_AS(polar_lift(ng.node(3, 3, 5), left_ok ? PolarSide::right : PolarSide::left), Error);
}

TEST_CASE("spectral transform") {
  const SurfaceChart src = rotational_example();
  const ChartAnalysis a0 = analyze_chart(src);

  SUBCASE("c = 0 reproduces the surface") {
    const SpectralResult r = spectral_transform(src, 0.0);
    CHECK(r.path_residual < 1e-10);
    CHECK(r.gram_drift < 1e-10);
    const double d = grid_max(src.grid(), [&](int i, int j) {
      return projective_distance(r.frames.at(i, j).col(0), value(src.node(i, j, 0).y));
    });
    CHECK(d < 1e-8);
  }

  SUBCASE("invariants shift by c") {
    for (double c : {1.0, -2.0}) {
      const SpectralResult r = spectral_transform(src, c);
      CHECK(r.path_residual < 1e-6);
      CHECK(r.gram_drift < 1e-8);
      const ChartAnalysis a = analyze_chart(r.surface);
      double ds = 0.0, dl = 0.0;
      for (std::size_t k = 0; k < a.grid.size(); ++k) {
        ds = std::max(ds, std::abs(a.inv[k].s - a0.inv[k].s - c));
        dl = std::max({dl, std::abs(a.inv[k].lambda1 - a0.inv[k].lambda1),
                       std::abs(a.inv[k].lambda2 - a0.inv[k].lambda2), std::abs(a.inv[k].alpha - a0.inv[k].alpha)});
      }
      CHECK(ds < 1e-5);
      CHECK(dl < 1e-6);
      CHECK(isothermic_check(a, 1e-6).is_isothermic);
    }
  }

  SUBCASE("left polar commutes with the spectral shift") {
    const double c = 1.0;
    const SpectralResult r = spectral_transform(src, c);
    AnalysisOptions o;
    o.gauge = GaugePolicy::lambda1_half;
    const ChartAnalysis l0 = analyze_chart(polar_chart(src, PolarSide::left), o);
    const ChartAnalysis lc = analyze_chart(polar_chart(r.surface, PolarSide::left), o);
    double ds = 0.0, dh = 0.0;
    for (std::size_t k = 0; k < l0.grid.size(); ++k) {
      ds = std::max(ds, std::abs(lc.inv[k].s - l0.inv[k].s - c));
      dh = std::max({dh, std::abs(lc.inv[k].lambda1 - l0.inv[k].lambda1),
                     std::abs(lc.inv[k].lambda2 - l0.inv[k].lambda2), std::abs(lc.inv[k].alpha - l0.inv[k].alpha)});
    }
    CHECK(ds < 1e-5);
    CHECK(dh < 1e-6);
  }

  SUBCASE("local chart: same invariants, conditioned where the frame grows") {
    const SpectralResult r = spectral_transform(torus(16), -2.0);
    CHECK(r.frame_scale > 1e3);
    CHECK(r.gram_drift < 1e-12);
    CHECK(r.gram_drift_abs > r.gram_drift);
    const ChartAnalysis a = analyze_chart(r.local), t = analyze_chart(torus(16));
    double ds = 0.0;
    for (std::size_t k = 0; k < a.grid.size(); ++k) ds = std::max(ds, std::abs(a.inv[k].s - t.inv[k].s + 2.0));
    CHECK(ds < 1e-10);
    // at the base node the conformal motion is the identity
    CHECK((r.local.node(0, 0, 0).value() - r.surface.node(0, 0, 0).value()).norm() < 1e-14);
    const Vec6 far = r.local.node(15, 15, 0).value();
    CHECK(projective_distance(far, r.frames[0].col(0)) < 1e-14);
  }

  SUBCASE("projection onto the canonical Gram matrix") {
    const Mat6x6 G = frame_gram_normal_form();
    auto gram_error = [&](const Mat6x6& F) { return (F.transpose() * metric62() * F - G).cwiseAbs().maxCoeff(); };
    const Mat6x6 F0 = spectral_transform(src, 0.0).frames[0];
    Mat6x6 E;
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) E(r, c) = std::sin(1.0 + 7.0 * r + 3.0 * c);
    const Mat6x6 bent = F0 + 1e-4 * E;
    CHECK(gram_error(bent) > 1e-6);
    const Mat6x6 fixed = project_to_gram(bent);
    CHECK(gram_error(fixed) < 1e-12);
    CHECK((fixed - bent).cwiseAbs().maxCoeff() < 1e-3);
    CHECK((project_to_gram(F0) - F0).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(project_to_gram(Mat6x6::Identity()), Error);

    SpectralOptions o;
    o.base_frame = bent;
    CHECK_THROWS_AS(spectral_transform(src, 1.0, o), Error);
    o.integration.repair_gram = true;
    const SpectralResult r = spectral_transform(src, 1.0, o);
    double worst = 0.0;
    for (std::size_t k = 0; k < r.frames.size(); ++k) {
      const double scale = r.frames[k].cwiseAbs().maxCoeff();
      worst = std::max(worst, gram_error(r.frames[k]) / (scale * scale));
    }
    CHECK(worst < 1e-13);
  }

  SUBCASE("errors") {
    SpectralOptions o;
    o.base_frame = Mat6x6::Identity();
    CHECK_THROWS_AS(spectral_transform(src, 1.0, o), Error);
    o = {};
    o.integration.series_order = 20;
    CHECK_THROWS_AS(spectral_transform(src, 1.0, o), Error);
    try {
      spectral_transform(torus(8).rotated(std::numbers::pi / 4), 1.0);
      FAIL("non-isothermic input integrated");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::non_integrable);
    }
  }
}

TEST_CASE("Darboux transform") {
  const SurfaceChart src = rotational_example();
  for (double theta : {1.0, -1.0}) {
    CAPTURE(theta);
    const DarbouxState& d = rotational_darboux(theta);
    CHECK(d.nullity_drift < 1e-8);
    CHECK(d.normalization_drift < 1e-8);
    CHECK(d.path_residual < 1e-6);
    CHECK(d.min_immersion > 0.0);
    CHECK(d.singular_count < 16 * 16 / 10);
    CHECK(projective_distance(d.Ystar.at(0, 0), d.init) < 1e-12);

    const auto frames = darboux_frame(src, d);
    double structure = 0.0, null_pair = 0.0, span = 0.0, envelope = 0.0, pairing = 0.0, dtheta = 0.0;
    std::size_t singular = 0;
    for (const auto& p : frames) {
      if (p.pair_singular) continue;
      for (double x : p.structure) structure = std::max(structure, x);
      for (double x : p.null_pair) null_pair = std::max(null_pair, x);
      span = std::max(span, p.span_residual);
      envelope = std::max(envelope, p.envelope_angle);
      CHECK(p.sphere.signature() == std::pair{3, 1});
      if (p.lift_singular) {
        ++singular;
        continue;
      }
      pairing = std::max(pairing, p.lift_pairing);
      dtheta = std::max(dtheta, p.dtheta_residual);
    }
    CHECK(structure < 1e-8);
    CHECK(null_pair < 1e-8);
    CHECK(span < 1e-6);
    CHECK(envelope < 1e-6);
    CHECK(pairing < 1e-8);
    CHECK(dtheta < 1e-5);
    // f2 vanishes at the base when Y*(base) = N(base).
    CHECK(singular >= 1);
    CHECK(frames.at(0, 0).lift_singular);

    const ChartAnalysis a = analyze_chart(d.surface, d.analysis_options());
    CHECK(isothermic_check(a, 1e-5).is_isothermic);

    PolarOptions po;
    po.analysis = d.analysis_options();
    const PolarResult pl = polar(d.surface, PolarSide::left, po);
    double lstar = 0.0;
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j)
        if (!pl.degenerate_mask.at(i, j) && !d.singular_mask.at(i, j))
          lstar = std::max(lstar, projective_distance(value(pl.surface.node(i, j, 0).y), frames.at(i, j).Lstar));
    CHECK(lstar < 1e-6);
  }
}

TEST_CASE("Darboux parameter and initial value errors") {
  const SurfaceChart src = rotational_example(8);
  const auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::consistency;
  };
  CHECK(kind_of([&] { darboux_transform(src, 0.0); }) == ErrorKind::parameter);
  DarbouxOptions o;
  o.init = Vec6(1, 0, 0, 0, 0, 0);
  CHECK(kind_of([&] { darboux_transform(src, 1.0, o); }) == ErrorKind::initial_condition);
  const Vec6 n = analyze_point(src.node(0, 0, 5)).frame.N;
  o.init = 2.0 * n;
  CHECK(kind_of([&] { darboux_transform(src, 1.0, o); }) == ErrorKind::initial_condition);
}

TEST_CASE("Darboux transform of the torus masks the singular locus") {
  const DarbouxState d = darboux_transform(torus(32), 1.0);
  CHECK(d.singular_count > 0);
  CHECK(d.singular_count < 32 * 32 / 10);
  CHECK(d.nullity_drift < 1e-8);
  bool warned = false;
  for (const auto& w : d.warnings) warned |= w.find("lift_singularity") != std::string::npos;
  CHECK(warned);
  for (std::size_t k = 0; k < d.pairing.size(); ++k) CHECK((d.pairing[k] < 2e-2) == bool(d.singular_mask[k]));
  CHECK(isothermic_check(analyze_chart(d.surface, d.analysis_options()), 1e-5).is_isothermic);
}
