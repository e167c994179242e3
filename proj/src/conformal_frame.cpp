#include "lorentz_iso/conformal_frame.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lorentz_iso/detail/null_pair.hpp"

namespace lorentz_iso {

namespace {

constexpr cplx kI{0.0, 1.0};

using JetMat4 = std::array<std::array<RJet, 4>, 4>;
using JetVec4 = std::array<RJet, 4>;

/// Solves g x = rhs on jets: invert the value matrix once, then each
/// residual correction fixes one more Taylor degree.
JetVec4 solve_jet4(const JetMat4& g, const JetVec4& rhs, const char* what) {
  Eigen::Matrix4d g0;
  int order = rhs[0].order();
  for (int i = 0; i < 4; ++i) {
    order = std::min(order, rhs[i].order());
    for (int j = 0; j < 4; ++j) {
      g0(i, j) = g[i][j].value();
      order = std::min(order, g[i][j].order());
    }
  }
  Eigen::FullPivLU<Eigen::Matrix4d> lu(g0);
  const double scale = std::max(1.0, g0.cwiseAbs().maxCoeff());
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-14 * std::pow(scale, 4))
    throw Error(ErrorKind::frame, std::string("degenerate Gram matrix for ") + what);
  const Eigen::Matrix4d inv = lu.inverse();
  auto apply_inv = [&](const JetVec4& r) {
    JetVec4 out;
    for (int i = 0; i < 4; ++i) {
      out[i] = RJet(order);
      for (int j = 0; j < 4; ++j) out[i] += r[j].truncated(order) * inv(i, j);
    }
    return out;
  };
  JetVec4 x = apply_inv(rhs);
  for (int pass = 0; pass < order; ++pass) {
    JetVec4 r;
    for (int i = 0; i < 4; ++i) {
      r[i] = rhs[i].truncated(order);
      for (int j = 0; j < 4; ++j) r[i] -= g[i][j] * x[j];
    }
    const JetVec4 dx = apply_inv(r);
    for (int i = 0; i < 4; ++i) x[i] += dx[i];
  }
  return x;
}

JetMat4 gram4(const std::array<RJetVec, 4>& b) {
  JetMat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      g[i][j] = inner(b[i], b[j]);
      g[j][i] = g[i][j];
    }
  return g;
}

RJetVec combine(const std::array<RJetVec, 4>& b, const JetVec4& c) {
  RJetVec out = c[0] * b[0];
  for (int i = 1; i < 4; ++i) out = out + c[i] * b[i];
  return out;
}

CJetVec to_complex(const RJetVec& x) {
  CJetVec out;
  for (int k = 0; k < 6; ++k) out[k] = CJet(x[k]);
  return out;
}

double cnorm(const CVec6& v) { return v.norm(); }

void fill_values(MovingFrame& f) {
  const FrameJets& j = *f.jets;
  f.Y = value(j.Y);
  f.N = value(j.N);
  f.L = value(j.L);
  f.R = value(j.R);
  f.Yz = value(j.Yz);
  f.Yzbar = f.Yz.conjugate();
}

double gram_deviation(const MovingFrame& f) {
  const Mat6x6 F = frame_matrix(f);
  const Mat6x6 G = F.transpose() * metric62() * F;
  return (G - frame_gram_normal_form()).cwiseAbs().maxCoeff();
}

}  // namespace

// ---------------------------------------------------------------------------

CanonicalLift canonical_lift(const JetPoint& jet, double conformality_tol) {
  const int K = jet.order();
  if (K < 1) throw Error(ErrorKind::jet_order, "canonical lift needs first derivatives");
  const Vec6 y0 = jet.value();
  const double n2 = y0.squaredNorm();
  if (!(n2 > 0.0)) throw Error(ErrorKind::degenerate_input, "zero lift");
  if (std::abs(inner(y0, y0)) > 1e-8 * n2) throw Error(ErrorKind::degenerate_input, "lift is not null");

  const RJetVec yu = d_u(jet.y), yv = d_v(jet.y);
  const RJet E = inner(yu, yu), G = inner(yv, yv), F = inner(yu, yv);
  const double e = E.value(), g = G.value(), f = F.value();
  if (!(e + g > 0.0) || !(e * g - f * f > 0.0)) throw Error(ErrorKind::causality, "immersion is not spacelike");
  const double conf = std::abs(cplx(e - g, -2.0 * f)) / (e + g);
  if (conf > conformality_tol) throw Error(ErrorKind::conformality, "coordinate is not conformal");

  // <(rY)_z, (rY)_zbar> = r^2 (E + G) / 4 because Y is null.
  const RJet rho = sqrt(recip(E + G) * 2.0);
  CanonicalLift out;
  out.jet.lower_accuracy = jet.lower_accuracy;
  for (int k = 0; k < 6; ++k) out.jet.y[k] = rho * jet.y[k].truncated(K - 1);
  out.scale_log = std::log(rho.value());
  out.conformality_residual = conf;
  return out;
}

// ---------------------------------------------------------------------------

MovingFrame moving_frame(const CanonicalLift& lift, const FrameOptions& options) {
  const int n = lift.jet.order();
  if (n < 2) throw Error(ErrorKind::jet_order, "moving frame needs second derivatives of the lift");
  auto jets = std::make_shared<FrameJets>();
  FrameJets& J = *jets;
  J.Y = lift.jet.y;
  J.Yu = d_u(J.Y);
  J.Yv = d_v(J.Y);
  J.Yz = 0.5 * (to_complex(J.Yu) - kI * to_complex(J.Yv));
  J.Yzz = d_z(J.Yz);
  J.W = 0.25 * (d_u(J.Yu) + d_v(J.Yv));
  const int m = n - 2;

  // N = sum c_i b_i with <N,Y> = -1, <N,Y_u> = <N,Y_v> = 0, <N,W> = t and
  // <N,N> = 0, which is quadratic in t.
  const std::array<RJetVec, 4> b = {truncated(J.Y, m), truncated(J.Yu, m), truncated(J.Yv, m), J.W};
  const JetMat4 g = gram4(b);
  const JetVec4 e1 = {RJet(1.0, m), RJet(0.0, m), RJet(0.0, m), RJet(0.0, m)};
  const JetVec4 e4 = {RJet(0.0, m), RJet(0.0, m), RJet(0.0, m), RJet(1.0, m)};
  const JetVec4 x = solve_jet4(g, e1, "span{Y, Y_u, Y_v, Y_zzbar}");
  const JetVec4 y = solve_jet4(g, e4, "span{Y, Y_u, Y_v, Y_zzbar}");
  const RJet qa = y[3], qb = x[3], qc = x[0];
  const RJet disc = qb * qb - qa * qc;
  if (!(disc.value() > 0.0) || qb.value() == 0.0) throw Error(ErrorKind::frame, "no null normal in V");
  const RJet t = qc / (qb + (qb.value() > 0 ? 1.0 : -1.0) * sqrt(disc));
  JetVec4 coeff;
  for (int i = 0; i < 4; ++i) coeff[i] = t * y[i] - x[i];
  J.N = combine(b, coeff);

  // Orthogonal complement of V: project two standard basis vectors.
  const std::array<RJetVec, 4> c = {b[0], b[1], b[2], J.N};
  std::array<Vec6, 4> cv;
  for (int i = 0; i < 4; ++i) cv[i] = value(c[i]);
  Eigen::Matrix4d h0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) h0(i, j) = inner(cv[i], cv[j]);
  const Eigen::Matrix4d h0inv = h0.inverse();
  std::array<Vec6, 6> proj;
  for (int k = 0; k < 6; ++k) {
    Eigen::Vector4d r;
    for (int i = 0; i < 4; ++i) r[i] = kMetric62[k] * cv[i][k];
    const Eigen::Vector4d z = h0inv * r;
    proj[k] = Vec6::Unit(k);
    for (int i = 0; i < 4; ++i) proj[k] -= z[i] * cv[i];
  }
  // Any well-conditioned pair spans the complement; take the largest area.
  int bk = -1, bl = -1;
  double best = 0.0;
  for (int k = 0; k < 6; ++k)
    for (int l = k + 1; l < 6; ++l) {
      const double d = proj[k].dot(proj[l]);
      const double area = proj[k].squaredNorm() * proj[l].squaredNorm() - d * d;
      if (area > best) {
        best = area;
        bk = k;
        bl = l;
      }
    }
  if (bk < 0) throw Error(ErrorKind::frame, "normal plane is degenerate");
  {
    const double a = inner(proj[bk], proj[bk]), bb = inner(proj[bk], proj[bl]), cc = inner(proj[bl], proj[bl]);
    if (!(a * cc - bb * bb < -1e-12 * best)) throw Error(ErrorKind::frame, "normal plane is not Lorentzian");
  }

  const JetMat4 h = gram4(c);
  auto project = [&](int k) {
    JetVec4 r;
    for (int i = 0; i < 4; ++i) r[i] = c[i][k] * kMetric62[k];
    const JetVec4 z = solve_jet4(h, r, "span{Y, Y_u, Y_v, N}");
    RJetVec out = constant_jet(Vec6::Unit(k), m) - combine(c, z);
    return out;
  };
  const RJetVec p1 = project(bk), p2 = project(bl);
  auto [L, R] = detail::null_pair(p1, p2, [](const RJetVec& a, const RJetVec& bv) { return inner(a, bv); }, 0.0);
  const double det = orientation_det(std::array<Vec6, 6>{value(J.Y), value(J.Yu), value(J.Yv), value(J.N),
                                                         value(R), value(L)});
  if ((det < 0.0) != options.reversed_orientation) std::swap(L, R);
  J.L = L;
  J.R = R;

  MovingFrame f;
  f.jets = jets;
  fill_values(f);
  f.gram_residual = gram_deviation(f);
  return f;
}

// ---------------------------------------------------------------------------

InvariantJets invariant_jets(const MovingFrame& frame) {
  if (!frame.jets) throw Error(ErrorKind::consistency, "frame carries no jet data");
  const FrameJets& J = *frame.jets;
  InvariantJets out;
  out.s = 2.0 * inner(J.Yzz, J.N);
  out.lambda1 = -1.0 * inner(J.Yzz, J.R);
  out.lambda2 = -1.0 * inner(J.Yzz, J.L);
  out.beta = real(out.lambda1 * conj(out.lambda2)) * 2.0;
  if (J.L[0].order() >= 1) {
    out.alpha = -1.0 * inner(d_z(J.L), J.R);
    out.gamma1 = d_zbar(out.lambda1) + out.lambda1 * conj(out.alpha);
    out.gamma2 = d_zbar(out.lambda2) - out.lambda2 * conj(out.alpha);
  }
  return out;
}

InvariantRecord invariants(const MovingFrame& frame) {
  const InvariantJets ij = invariant_jets(frame);
  const FrameJets& J = *frame.jets;
  InvariantRecord r;
  r.gauge = frame.gauge;
  r.s = ij.s.value();
  r.lambda1 = ij.lambda1.value();
  r.lambda2 = ij.lambda2.value();
  r.beta = ij.beta.value();
  const RJet ww = inner(J.W, J.W);
  r.beta_direct = -ww.value();
  const CVec6 kappa = value(J.Yzz) + (r.s / 2.0) * value(J.Y).cast<cplx>();
  r.kappa_norm = cnorm(kappa);
  r.kappa_l_part = std::abs(r.lambda1) * frame.L.norm();
  r.kappa_r_part = std::abs(r.lambda2) * frame.R.norm();
  if (J.L[0].order() >= 1) {
    r.alpha = ij.alpha.value();
    r.gamma1 = ij.gamma1.value();
    r.gamma2 = ij.gamma2.value();
    r.has_alpha = true;
    if (ij.alpha.order() >= 1) {
      r.alpha_z = d_z(ij.alpha).value();
      r.alpha_zbar = d_zbar(ij.alpha).value();
      r.has_alpha_z = true;
    }
  }
  return r;
}

MovingFrame fix_gauge(const MovingFrame& frame, GaugePolicy policy) {
  if (policy == GaugePolicy::raw) {
    MovingFrame f = frame;
    f.gauge = GaugeKind::raw;
    return f;
  }
  if (!frame.jets) throw Error(ErrorKind::consistency, "frame carries no jet data");
  const FrameJets& J = *frame.jets;
  const CJet l1 = -1.0 * inner(J.Yzz, J.R), l2 = -1.0 * inner(J.Yzz, J.L);
  const double part1 = std::abs(l1.value()) * frame.L.norm(), part2 = std::abs(l2.value()) * frame.R.norm();
  const double total = part1 + part2;
  const bool ok1 = part1 > 1e-8 * total && part1 > 1e-13, ok2 = part2 > 1e-8 * total && part2 > 1e-13;
  GaugeKind kind = GaugeKind::raw;
  if (policy == GaugePolicy::lambda2_half)
    kind = ok2 ? GaugeKind::lambda2_half : ok1 ? GaugeKind::lambda1_half : GaugeKind::raw;
  else
    kind = ok1 ? GaugeKind::lambda1_half : ok2 ? GaugeKind::lambda2_half : GaugeKind::raw;
  MovingFrame f = frame;
  f.gauge = kind;
  if (kind == GaugeKind::raw) return f;

  // rho lambda2 = 1/2 (or lambda1 / rho = 1/2) up to a phase; the sign keeps
  // real Hopf components positive.
  const CJet& lam = kind == GaugeKind::lambda2_half ? l2 : l1;
  const cplx v = lam.value();
  const double sgn = (std::abs(v.real()) >= std::abs(v.imag()) ? v.real() : v.imag()) >= 0.0 ? 1.0 : -1.0;
  const RJet mod2 = abs(lam) * 2.0;
  const RJet rho = kind == GaugeKind::lambda2_half ? recip(mod2) * sgn : mod2 * sgn;
  auto jets = std::make_shared<FrameJets>(J);
  jets->L = rho * J.L;
  jets->R = recip(rho) * J.R;
  f.jets = jets;
  fill_values(f);
  f.gram_residual = gram_deviation(f);
  return f;
}

InvariantRecord invariants(const MovingFrame& frame, GaugePolicy policy) {
  return invariants(fix_gauge(frame, policy));
}

std::pair<MovingFrame, InvariantRecord> gauge_transform(const MovingFrame& frame, const InvariantRecord& inv,
                                                        const RJet& g) {
  const RJet e = exp(g), einv = recip(e);
  const double ev = e.value(), eiv = einv.value();
  MovingFrame f = frame;
  if (frame.jets) {
    auto jets = std::make_shared<FrameJets>(*frame.jets);
    jets->L = e * frame.jets->L;
    jets->R = einv * frame.jets->R;
    f.jets = jets;
    fill_values(f);
  } else {
    f.L = ev * frame.L;
    f.R = eiv * frame.R;
  }
  f.gram_residual = gram_deviation(f);

  InvariantRecord r = inv;
  r.lambda1 = eiv * inv.lambda1;
  r.lambda2 = ev * inv.lambda2;
  r.gamma1 = eiv * inv.gamma1;
  r.gamma2 = ev * inv.gamma2;
  if (g.order() >= 1) {
    r.alpha = inv.alpha + d_z(g).value();
  } else {
    r.alpha = {kNaN, kNaN};
    r.has_alpha = false;
  }
  if (g.order() >= 2 && inv.has_alpha_z) {
    r.alpha_z = inv.alpha_z + d_z(d_z(g)).value();
    r.alpha_zbar = inv.alpha_zbar + d_zbar(d_z(g)).value();
  } else {
    r.alpha_z = r.alpha_zbar = {kNaN, kNaN};
    r.has_alpha_z = false;
  }
  return {f, r};
}

// ---------------------------------------------------------------------------

StructureResiduals structure_residuals(const MovingFrame& frame) { return structure_residuals(frame, invariants(frame)); }

StructureResiduals structure_residuals(const MovingFrame& frame, const InvariantRecord& inv) {
  if (!frame.jets) throw Error(ErrorKind::consistency, "frame carries no jet data");
  if (frame.gauge != inv.gauge) throw Error(ErrorKind::consistency, "frame and invariants use different gauges");
  const FrameJets& J = *frame.jets;
  StructureResiduals out;
  const CVec6 Y = value(J.Y).cast<cplx>(), L = value(J.L).cast<cplx>(), R = value(J.R).cast<cplx>(),
              N = value(J.N).cast<cplx>();
  const CVec6 Yz = value(J.Yz), Yzb = Yz.conjugate();
  const cplx s = inv.s, l1 = inv.lambda1, l2 = inv.lambda2;
  const double beta = inv.beta;
  out.yzz = (value(J.Yzz) - (-s / 2.0 * Y + l1 * L + l2 * R)).norm();
  out.yzzbar = (value(J.W).cast<cplx>() - beta * Y - 0.5 * N).norm();
  if (J.N[0].order() >= 1 && inv.has_alpha) {
    const cplx a = inv.alpha, g1 = inv.gamma1, g2 = inv.gamma2;
    out.nz = (value(d_z(J.N)) - (2.0 * beta * Yz - s * Yzb + 2.0 * g1 * L + 2.0 * g2 * R)).norm();
    out.lz = (value(d_z(J.L)) - (a * L - 2.0 * g2 * Y + 2.0 * l2 * Yzb)).norm();
    out.rz = (value(d_z(J.R)) - (-a * R - 2.0 * g1 * Y + 2.0 * l1 * Yzb)).norm();
  }
  return out;
}

CompatibilityResiduals compatibility_residuals(const MovingFrame& frame) {
  const InvariantJets ij = invariant_jets(frame);
  CompatibilityResiduals out;
  const cplx l1 = ij.lambda1.value(), l2 = ij.lambda2.value();
  out.normal_curvature = std::abs(2.0 * (l1 * std::conj(l2) - l2 * std::conj(l1)));
  if (ij.alpha.order() < 1) return out;
  const cplx a = ij.alpha.value(), g1 = ij.gamma1.value(), g2 = ij.gamma2.value(), s = ij.s.value();
  out.gauss = std::abs(d_zbar(ij.s).value() + 2.0 * d_z(ij.beta).value() + 4.0 * l1 * std::conj(g2) +
                       4.0 * l2 * std::conj(g1));
  out.codazzi1 = std::abs((d_zbar(ij.gamma1).value() + g1 * std::conj(a) + std::conj(s) / 2.0 * l1).imag());
  out.codazzi2 = std::abs((d_zbar(ij.gamma2).value() - g2 * std::conj(a) + std::conj(s) / 2.0 * l2).imag());
  out.ricci = std::abs(d_zbar(ij.alpha).value() - std::conj(d_z(ij.alpha).value()) -
                       2.0 * (l1 * std::conj(l2) - l2 * std::conj(l1)));
  return out;
}

// ---------------------------------------------------------------------------

PointAnalysis analyze_point(const JetPoint& jet, GaugePolicy policy, const FrameOptions& options) {
  PointAnalysis out;
  out.lift = canonical_lift(jet, options.conformality_tol);
  out.frame = fix_gauge(moving_frame(out.lift, options), policy);
  out.inv = invariants(out.frame);
  return out;
}

FrameOptions frame_options_for(const SurfaceChart& chart, FrameOptions options) {
  if (chart.kind() == ChartKind::sampled)
    options.conformality_tol = std::max(options.conformality_tol, options.sampled_conformality_tol);
  return options;
}

ChartAnalysis analyze_chart(const SurfaceChart& chart, const AnalysisOptions& options) {
  const GridSpec& g = chart.grid();
  ChartAnalysis out;
  out.grid = g;
  out.policy = options.gauge;
  out.order = options.order;
  out.frames = Grid<MovingFrame>(g);
  out.inv = Grid<InvariantRecord>(g);
  out.structure = Grid<StructureResiduals>(g);
  out.compatibility = Grid<CompatibilityResiduals>(g);
  out.umbilic = Grid<char>(g, 0);
  out.lower_accuracy = Grid<char>(g, 0);
  out.skipped = Grid<char>(g, 0);
  if (options.skip) {
    if (!(options.skip->spec() == g)) throw Error(ErrorKind::consistency, "skip mask grid differs from chart grid");
    out.skipped = *options.skip;
  }
  const FrameOptions frame_options = frame_options_for(chart, options.frame);
  std::vector<double> conf(g.size(), 0.0);
  parallel_for(g.size(), [&](std::size_t k) {
    if (out.skipped[k]) return;
    const int i = static_cast<int>(k / g.nv), j = static_cast<int>(k % g.nv);
    const JetPoint jp = chart.node(i, j, options.order);
    PointAnalysis pa = analyze_point(jp, options.gauge, frame_options);
    if (options.residuals) {
      out.structure[k] = structure_residuals(pa.frame);
      out.compatibility[k] = compatibility_residuals(pa.frame);
    }
    pa.frame.jets.reset();
    out.frames[k] = pa.frame;
    out.inv[k] = pa.inv;
    out.lower_accuracy[k] = jp.lower_accuracy;
    conf[k] = pa.lift.conformality_residual;
  });
  std::vector<double> kn;
  kn.reserve(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (out.skipped[k]) continue;
    kn.push_back(out.inv[k].kappa_norm);
    out.max_conformality = std::max(out.max_conformality, conf[k]);
    out.max_gram = std::max(out.max_gram, out.frames[k].gram_residual);
  }
  if (kn.empty()) throw Error(ErrorKind::degenerate_surface, "every grid node was excluded");
  std::nth_element(kn.begin(), kn.begin() + kn.size() / 2, kn.end());
  const double median = kn[kn.size() / 2];
  double min_sum = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (out.skipped[k]) continue;
    out.umbilic[k] = out.inv[k].kappa_norm < options.umbilic_tol * median || median == 0.0;
    if (!out.umbilic[k])
      min_sum = std::min(min_sum, std::abs(out.inv[k].lambda1) + std::abs(out.inv[k].lambda2));
  }
  out.min_lambda_sum = std::isfinite(min_sum) ? min_sum : kNaN;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

/// Fills A_u, A_v from real and imaginary parts of the invariants; S is
/// double or RJet.
template <class S, class M>
void fill_connection(M& Au, M& Av, const S& rs, const S& is, const S& rl1, const S& il1, const S& rl2,
                     const S& il2, const S& ra, const S& ia, const S& beta, const S& rg1, const S& ig1,
                     const S& rg2, const S& ig2, const S& one) {
  // Columns: 0 Y, 1 Y_u, 2 Y_v, 3 N, 4 L, 5 R.
  Au[1][0] = one;
  Au[0][1] = beta * 2.0 - rs;
  Au[3][1] = one;
  Au[4][1] = rl1 * 2.0;
  Au[5][1] = rl2 * 2.0;
  Au[0][2] = is;
  Au[4][2] = il1 * -2.0;
  Au[5][2] = il2 * -2.0;
  Au[1][3] = beta * 2.0 - rs;
  Au[2][3] = is;
  Au[4][3] = rg1 * 4.0;
  Au[5][3] = rg2 * 4.0;
  Au[4][4] = ra * 2.0;
  Au[0][4] = rg2 * -4.0;
  Au[1][4] = rl2 * 2.0;
  Au[2][4] = il2 * -2.0;
  Au[5][5] = ra * -2.0;
  Au[0][5] = rg1 * -4.0;
  Au[1][5] = rl1 * 2.0;
  Au[2][5] = il1 * -2.0;

  Av[2][0] = one;
  Av[0][1] = is;
  Av[4][1] = il1 * -2.0;
  Av[5][1] = il2 * -2.0;
  Av[0][2] = beta * 2.0 + rs;
  Av[3][2] = one;
  Av[4][2] = rl1 * -2.0;
  Av[5][2] = rl2 * -2.0;
  Av[1][3] = is;
  Av[2][3] = beta * 2.0 + rs;
  Av[4][3] = ig1 * -4.0;
  Av[5][3] = ig2 * -4.0;
  Av[4][4] = ia * -2.0;
  Av[0][4] = ig2 * 4.0;
  Av[1][4] = il2 * -2.0;
  Av[2][4] = rl2 * -2.0;
  Av[5][5] = ia * 2.0;
  Av[0][5] = ig1 * 4.0;
  Av[1][5] = il1 * -2.0;
  Av[2][5] = rl1 * -2.0;
}

struct MatRef {
  Mat6x6& m;
  struct Row {
    Mat6x6& m;
    int i;
    double& operator[](int j) { return m(i, j); }
  };
  Row operator[](int i) { return {m, i}; }
};

}  // namespace

Connection connection_matrices(const InvariantRecord& inv) {
  if (!inv.has_alpha) throw Error(ErrorKind::consistency, "connection needs alpha and gamma");
  Connection c;
  c.Au.setZero();
  c.Av.setZero();
  MatRef au{c.Au}, av{c.Av};
  fill_connection<double>(au, av, inv.s.real(), inv.s.imag(), inv.lambda1.real(), inv.lambda1.imag(),
                          inv.lambda2.real(), inv.lambda2.imag(), inv.alpha.real(), inv.alpha.imag(), inv.beta,
                          inv.gamma1.real(), inv.gamma1.imag(), inv.gamma2.real(), inv.gamma2.imag(), 1.0);
  return c;
}

ConnectionJets connection_jets(const InvariantJets& inv) {
  const int o = inv.gamma1.order();
  ConnectionJets c;
  for (auto& row : c.Au)
    for (auto& x : row) x = RJet(o);
  for (auto& row : c.Av)
    for (auto& x : row) x = RJet(o);
  auto t = [o](const RJet& x) { return x.truncated(o); };
  fill_connection<RJet>(c.Au, c.Av, t(real(inv.s)), t(imag(inv.s)), t(real(inv.lambda1)), t(imag(inv.lambda1)),
                        t(real(inv.lambda2)), t(imag(inv.lambda2)), t(real(inv.alpha)), t(imag(inv.alpha)),
                        t(inv.beta), t(real(inv.gamma1)), t(imag(inv.gamma1)), t(real(inv.gamma2)),
                        t(imag(inv.gamma2)), RJet(1.0, o));
  return c;
}

Mat6x6 frame_matrix(const MovingFrame& f) {
  Mat6x6 F;
  F << f.Y, f.Yu(), f.Yv(), f.N, f.L, f.R;
  return F;
}

Mat6x6 frame_gram_normal_form() {
  Mat6x6 G = Mat6x6::Zero();
  G(0, 3) = G(3, 0) = -1.0;
  G(1, 1) = G(2, 2) = 1.0;
  G(4, 5) = G(5, 4) = -1.0;
  return G;
}

}  // namespace lorentz_iso
