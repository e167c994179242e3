#include "lorentz_iso/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

#include <unsupported/Eigen/MatrixFunctions>

#include "lorentz_iso/detail/lattice.hpp"

namespace lorentz_iso {

namespace {

constexpr cplx kI{0.0, 1.0};

using detail::Block;
using detail::JetMatrix6;

bool finite(double x) { return std::isfinite(x); }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

/// Charts computed from sampled data stay sampled (for tolerances).
ChartKind derived_kind(const SurfaceChart& src) {
  return src.kind() == ChartKind::sampled ? ChartKind::sampled : ChartKind::derived;
}

/// Chart whose jets are fn(source jet of order k + cost) truncated to k.
SurfaceChart derive_chart(const SurfaceChart& src, std::string name, int cost,
                          std::function<RJetVec(const JetPoint&)> fn) {
  const int max_order = src.max_order() - cost;
  if (max_order < 0) throw Error(ErrorKind::jet_order, "source chart carries too few jet orders for " + name);
  const ChartKind kind = derived_kind(src);
  auto wrap = [fn = std::move(fn)](const JetPoint& p, int order) {
    JetPoint out{truncated(fn(p), order)};
    out.lower_accuracy = p.lower_accuracy;
    return out;
  };
  if (src.is_continuous())
    return SurfaceChart::continuous(
        std::move(name), src.grid(), max_order,
        [src, wrap, cost](double u, double v, int order) { return wrap(src.at(u, v, order + cost), order); }, kind);
  return SurfaceChart::nodal(
      std::move(name), src.grid(), max_order,
      [src, wrap, cost](int i, int j, int order) { return wrap(src.node(i, j, order + cost), order); }, kind);
}

MovingFrame gauged_frame(const JetPoint& jet, GaugePolicy policy, const FrameOptions& o) {
  return fix_gauge(moving_frame(canonical_lift(jet, o.conformality_tol), o), policy);
}

RJetVec jet_column(const std::vector<Block>& taylor, int col, int order) {
  RJetVec out;
  for (int r = 0; r < 6; ++r) {
    out[r] = RJet(order);
    for (int q = 0; q < jet_detail::count(order); ++q) out[r][q] = taylor[q](col == -1 ? 0 : r, col == -1 ? r : col);
  }
  return out;
}

Mat6x6 gram_of(const Mat6x6& F) { return F.transpose() * metric62() * F; }

/// Darboux connection B^T for X = W^T: A_u[r][c] = theta J_r (Y_c Yu_r - Yu_c Y_r),
/// A_v[r][c] = -theta J_r (Y_c Yv_r - Yv_c Y_r).
std::pair<JetMatrix6, JetMatrix6> darboux_connection(const RJetVec& Y, double theta) {
  const RJetVec Yu = d_u(Y), Yv = d_v(Y);
  std::pair<JetMatrix6, JetMatrix6> out;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) {
      const double jr = kMetric62[r];
      out.first[r][c] = (Y[c] * Yu[r] - Yu[c] * Y[r]) * (theta * jr);
      out.second[r][c] = (Y[c] * Yv[r] - Yv[c] * Y[r]) * (-theta * jr);
    }
  return out;
}

}  // namespace

std::string_view to_string(PolarSide side) { return side == PolarSide::left ? "left" : "right"; }

// ---------------------------------------------------------------------------
// Polar transforms.

RJetVec polar_lift(const JetPoint& source, PolarSide side, const FrameOptions& options) {
  const bool left = side == PolarSide::left;
  const MovingFrame f = gauged_frame(source, left ? GaugePolicy::lambda2_half : GaugePolicy::lambda1_half, options);
  if (f.gauge != (left ? GaugeKind::lambda2_half : GaugeKind::lambda1_half))
    throw Error(ErrorKind::degenerate_transform,
                left ? "left polar degenerates where lambda2 = 0" : "right polar degenerates where lambda1 = 0");
  return left ? f.jets->L : f.jets->R;
}

SurfaceChart polar_chart(const SurfaceChart& source, PolarSide side, const FrameOptions& options) {
  return derive_chart(source, source.name() + "." + std::string(to_string(side)) + "_polar", 3,
                      [side, fo = frame_options_for(source, options)](const JetPoint& p) {
                        return polar_lift(p, side, fo);
                      });
}

AnalysisOptions PolarResult::analysis_options(const AnalysisOptions& base) const {
  AnalysisOptions o = base;
  if (degenerate_count > 0) o.skip = std::make_shared<Grid<char>>(degenerate_mask);
  return o;
}

PolarResult polar(const SurfaceChart& source, PolarSide side, const PolarOptions& options) {
  const bool left = side == PolarSide::left;
  AnalysisOptions ao = options.analysis;
  ao.residuals = false;
  ao.gauge = left ? GaugePolicy::lambda2_half : GaugePolicy::lambda1_half;
  PolarResult out{polar_chart(source, side, ao.frame), side, Grid<char>(source.grid(), 0), 0, std::nullopt,
                  analyze_chart(source, ao)};
  const ChartAnalysis& a = out.source;
  std::vector<double> sizes;
  for (std::size_t k = 0; k < a.grid.size(); ++k)
    if (!a.skipped[k] && finite(a.inv[k].kappa_l_part)) sizes.push_back(a.inv[k].kappa_l_part + a.inv[k].kappa_r_part);
  const double med = median(sizes);
  const GaugeKind want = left ? GaugeKind::lambda2_half : GaugeKind::lambda1_half;
  for (std::size_t k = 0; k < a.grid.size(); ++k) {
    const InvariantRecord& r = a.inv[k];
    const double part = left ? r.kappa_r_part : r.kappa_l_part;
    const bool bad = a.skipped[k] || !finite(part) || !(part > options.degeneracy_tol * med) || r.gauge != want;
    out.degenerate_mask[k] = bad;
    out.degenerate_count += bad;
  }
  if (out.degenerate_count == a.grid.size())
    throw Error(ErrorKind::degenerate_transform, std::string(to_string(side)) + " polar is degenerate at every node");
  if (left) {
    Grid<InvariantRecord> cf = polar_invariants_closed_form(a);
    for (std::size_t k = 0; k < cf.size(); ++k)
      if (out.degenerate_mask[k]) cf[k] = InvariantRecord{};
    out.closed_form_invariants = std::move(cf);
  }
  return out;
}

InvariantRecord polar_invariants_closed_form(const InvariantRecord& src) {
  InvariantRecord r;
  if (src.gauge != GaugeKind::lambda2_half || !src.has_alpha_z) return r;
  r.gauge = GaugeKind::lambda1_half;
  r.s = src.s - 4.0 * src.alpha_z;
  r.lambda1 = 0.5;
  // conj(alpha)_z = conj(alpha_zbar)
  r.lambda2 = std::conj(src.alpha_zbar) + src.lambda1;
  r.beta = 2.0 * std::real(r.lambda1 * std::conj(r.lambda2));
  r.alpha = src.alpha;
  r.has_alpha = true;
  return r;
}

Grid<InvariantRecord> polar_invariants_closed_form(const ChartAnalysis& source) {
  Grid<InvariantRecord> out(source.grid);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = polar_invariants_closed_form(source.inv[k]);
  return out;
}

RJetVec two_step_lift(const JetPoint& source, const FrameOptions& options) {
  const MovingFrame f = gauged_frame(source, GaugePolicy::lambda2_half, options);
  if (f.gauge != GaugeKind::lambda2_half)
    throw Error(ErrorKind::degenerate_transform, "two-step polar needs a non-degenerate left polar");
  const FrameJets& J = *f.jets;
  const InvariantJets ij = invariant_jets(f);
  if (ij.alpha.order() < 1) throw Error(ErrorKind::jet_order, "two-step polar needs alpha_z");
  const CJet& a = ij.alpha;
  const CJet coef = d_z(a) - a * a - ij.s * 0.5;
  const CJetVec yhat = J.N + (a * 2.0) * conj(J.Yz) + (conj(a) * 2.0) * J.Yz +
                       CJet(real(a * conj(a)) * 2.0) * J.Y - (coef * 2.0) * J.L;
  return real(yhat);
}

SurfaceChart two_step_polar(const SurfaceChart& source, const FrameOptions& options) {
  return derive_chart(source, source.name() + ".two_step_polar", 5,
                      [fo = frame_options_for(source, options)](const JetPoint& p) { return two_step_lift(p, fo); });
}

// ---------------------------------------------------------------------------
// Spectral transform.

namespace {

struct SpectralData {
  SurfaceChart source;
  double c;
  FrameOptions frame;
  GaugeKind gauge;
  Grid<Mat6x6> frames;
  Mat6x6 base_frame;

  std::pair<JetMatrix6, JetMatrix6> connection(int i, int j, int order) const {
    const MovingFrame f = gauged_frame(source.node(i, j, order + 4), GaugePolicy::lambda2_half, frame);
    if (f.gauge != gauge) throw Error(ErrorKind::degenerate_transform, "gauge changes across the grid");
    InvariantJets ij = invariant_jets(f);
    ij.s = ij.s + cplx(c);
    const ConnectionJets cj = connection_jets(ij);
    return {cj.Au, cj.Av};
  }

  /// Local: the solution through the base frame at this node, i.e. Y^c
  /// moved by the conformal motion F0 F(p)^{-1}.
  JetPoint node(int i, int j, int order, bool local) const {
    const Block x = local ? base_frame : frames.at(i, j);
    if (order == 0) return JetPoint{constant_jet(x.col(0), 0)};
    const auto [au, av] = connection(i, j, order - 1);
    return JetPoint{jet_column(detail::node_taylor(x, au, av, order), 0, order)};
  }
};

}  // namespace

Mat6x6 project_to_gram(const Mat6x6& F) {
  const Mat6x6 G = frame_gram_normal_form();
  const Mat6x6 S = G.inverse() * gram_of(F);
  if (!S.allFinite() || (S - Mat6x6::Identity()).cwiseAbs().maxCoeff() > 0.5)
    throw Error(ErrorKind::initial_condition, "frame is too far from the canonical Gram matrix to project");
  const Mat6x6 root = S.sqrt();
  return F * root.inverse();
}

SpectralResult spectral_transform(const SurfaceChart& source, double c, const SpectralOptions& options) {
  if (!std::isfinite(c)) throw Error(ErrorKind::parameter, "spectral parameter must be finite");
  const IntegrationOptions& io = options.integration;
  const int p = io.series_order;
  if (p < 1 || p + 4 > source.max_order())
    throw Error(ErrorKind::jet_order, "series order needs source jets of order series_order + 4");
  const GridSpec& g = source.grid();
  const MovingFrame fb = gauged_frame(source.node(io.base.i, io.base.j, std::min(source.max_order(), 5)),
                                      GaugePolicy::lambda2_half, frame_options_for(source, options.frame));
  const Mat6x6 G = frame_gram_normal_form();
  Mat6x6 F0 = options.base_frame.value_or(frame_matrix(fb));
  // A sampled source frame carries O(h^2) Gram error; it is the default
  // initial value, so it is projected rather than rejected.
  if (io.repair_gram || (!options.base_frame && source.kind() == ChartKind::sampled)) F0 = project_to_gram(F0);
  if ((gram_of(F0) - G).cwiseAbs().maxCoeff() > 1e-8)
    throw Error(ErrorKind::initial_condition, "base frame does not have the canonical Gram matrix");

  auto data = std::make_shared<SpectralData>(SpectralData{source, c, frame_options_for(source, options.frame), fb.gauge, Grid<Mat6x6>(g), F0});
  const detail::LatticeSolution sol = detail::integrate_lattice(
      g, io.base, F0, [&](int i, int j, int order) { return data->connection(i, j, order); }, p);
  if (!(sol.path_residual <= io.max_path_residual))
    throw Error(ErrorKind::non_integrable, "spectral frame is path dependent (residual " +
                                               std::to_string(sol.path_residual) + "); input not isothermic?");
  SpectralResult out;
  out.c = c;
  out.path_residual = sol.path_residual;
  out.frames = Grid<Mat6x6>(g);
  out.frame_grid = Grid<MovingFrame>(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Mat6x6 F = io.repair_gram ? project_to_gram(sol.values[k]) : Mat6x6(sol.values[k]);
    out.frames[k] = F;
    const double drift = (gram_of(sol.values[k]) - G).cwiseAbs().maxCoeff();
    const double scale = F.cwiseAbs().maxCoeff();
    out.gram_drift_abs = std::max(out.gram_drift_abs, drift);
    out.gram_drift = std::max(out.gram_drift, drift / std::max(1.0, scale * scale));
    out.frame_scale = std::max(out.frame_scale, scale);
    MovingFrame& m = out.frame_grid[k];
    m.Y = F.col(0);
    m.Yz = 0.5 * (F.col(1).cast<cplx>() - kI * F.col(2).cast<cplx>());
    m.Yzbar = m.Yz.conjugate();
    m.N = F.col(3);
    m.L = F.col(4);
    m.R = F.col(5);
    m.gauge = fb.gauge;
    m.gram_residual = drift;
  }
  data->frames = out.frames;
  out.surface = SurfaceChart::nodal(source.name() + ".spectral", g, source.max_order() - 3,
                                    [data](int i, int j, int order) { return data->node(i, j, order, false); },
                                    derived_kind(source));
  out.local = SurfaceChart::nodal(source.name() + ".spectral.local", g, source.max_order() - 3,
                                  [data](int i, int j, int order) { return data->node(i, j, order, true); },
                                  derived_kind(source));
  return out;
}

// ---------------------------------------------------------------------------
// Darboux transform.

namespace {

struct DarbouxData {
  SurfaceChart source;
  double theta;
  FrameOptions frame;
  Grid<Vec6> W;

  RJetVec lift(int i, int j, int order) const {
    return canonical_lift(source.node(i, j, order + 1), frame.conformality_tol).jet.y;
  }

  std::pair<JetMatrix6, JetMatrix6> connection(int i, int j, int order) const {
    return darboux_connection(lift(i, j, order + 1), theta);
  }

  /// W as a jet of the given order; projectively [W] = [Y*].
  RJetVec flow_jet(int i, int j, int order) const {
    if (order == 0) return constant_jet(W.at(i, j), 0);
    const auto [au, av] = connection(i, j, order - 1);
    const Block x = W.at(i, j).transpose();
    return jet_column(detail::node_taylor(x, au, av, order), -1, order);
  }

  /// Y* = -W / <Y, W>.
  RJetVec ystar_jet(int i, int j, int order) const {
    const RJetVec w = flow_jet(i, j, order);
    const RJet rho = inner(lift(i, j, order), w) * -1.0;
    if (!(std::abs(rho.value()) > 1e-12 * W.at(i, j).norm()))
      throw Error(ErrorKind::lift_singularity, "<Y, Y*> normalisation breaks down");
    return recip(rho) * w;
  }
};

}  // namespace

DarbouxState darboux_transform(const SurfaceChart& source, double theta, const DarbouxOptions& options) {
  if (!(theta != 0.0) || !std::isfinite(theta)) throw Error(ErrorKind::parameter, "theta must be a non-zero real");
  const IntegrationOptions& io = options.integration;
  const int p = io.series_order;
  if (p < 1 || p + 2 > source.max_order())
    throw Error(ErrorKind::jet_order, "series order needs source jets of order series_order + 2");
  const GridSpec& g = source.grid();
  if (io.base.i < 0 || io.base.j < 0 || io.base.i >= g.nu || io.base.j >= g.nv)
    throw Error(ErrorKind::parameter, "base point outside the grid");

  const auto analysis_at = [&](int i, int j) {
    return analyze_point(source.node(i, j, std::min(source.max_order(), 5)), GaugePolicy::lambda2_half,
                         frame_options_for(source, options.frame));
  };
  const PointAnalysis pb = analysis_at(io.base.i, io.base.j);
  const Vec6 init = options.init.value_or(pb.frame.N);
  const double scale = init.squaredNorm();
  if (std::abs(inner(init, init)) > options.init_tol * scale)
    throw Error(ErrorKind::initial_condition, "initial value is not null");
  if (std::abs(inner(pb.frame.Y, init) + 1.0) > options.init_tol * std::max(1.0, std::sqrt(scale) * pb.frame.Y.norm()))
    throw Error(ErrorKind::initial_condition, "initial value violates <Y, Y*> = -1");

  auto data = std::make_shared<DarbouxData>(DarbouxData{source, theta, frame_options_for(source, options.frame), Grid<Vec6>(g)});
  const Block x0 = init.transpose();
  const detail::LatticeSolution sol = detail::integrate_lattice(
      g, io.base, x0, [&](int i, int j, int order) { return data->connection(i, j, order); }, p);
  if (!(sol.path_residual <= io.max_path_residual))
    throw Error(ErrorKind::non_integrable, "Darboux flow is path dependent (residual " +
                                               std::to_string(sol.path_residual) + "); input not isothermic?");
  for (std::size_t k = 0; k < g.size(); ++k) data->W[k] = sol.values[k].transpose();

  DarbouxState st;
  st.theta = theta;
  st.base = io.base;
  st.init = init;
  st.path_residual = sol.path_residual;
  st.Ystar = Grid<Vec6>(g);
  st.mu = Grid<cplx>(g);
  st.f1 = Grid<double>(g);
  st.f2 = Grid<double>(g);
  st.pairing = Grid<double>(g);
  st.singular_mask = Grid<char>(g, 0);
  Grid<double> nullity(g), normalization(g), immersion(g);
  parallel_for(g.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k / g.nv), j = static_cast<int>(k % g.nv);
    const PointAnalysis pa = analysis_at(i, j);
    const Vec6& W = data->W[k];
    const double rho = -inner(pa.frame.Y, W);
    if (!(std::abs(rho) > 1e-12 * pa.frame.Y.norm() * W.norm()))
      throw Error(ErrorKind::lift_singularity, "<Y, Y*> normalisation breaks down");
    const Vec6 ys = W / rho;
    st.Ystar[k] = ys;
    st.mu[k] = 2.0 * inner(pa.frame.Yz, ys);
    st.f1[k] = -0.5 * inner(ys, pa.frame.R);
    st.f2[k] = -0.5 * inner(ys, pa.frame.L);
    nullity[k] = std::abs(inner(W, W)) / W.squaredNorm();
    normalization[k] = std::abs(inner(pa.frame.Y, ys) + 1.0);
    const RJetVec w1 = data->flow_jet(i, j, 1);
    const CVec6 wz = 0.5 * (partial(w1, 1, 0).cast<cplx>() - kI * partial(w1, 0, 1).cast<cplx>());
    immersion[k] = std::real(inner(wz, CVec6(wz.conjugate()))) / W.squaredNorm();
    st.pairing[k] = std::abs(rho) / (pa.frame.Y.norm() * W.norm());
    st.singular_mask[k] = !(st.pairing[k] >= options.singular_tol);
  });
  st.singular_count = std::count(st.singular_mask.begin(), st.singular_mask.end(), char(1));
  st.nullity_drift = *std::max_element(nullity.begin(), nullity.end());
  st.normalization_drift = *std::max_element(normalization.begin(), normalization.end());
  st.min_immersion = *std::min_element(immersion.begin(), immersion.end());
  const auto bad = std::count_if(immersion.begin(), immersion.end(),
                                 [&](double x) { return !(x > options.immersion_tol); });
  if (bad > 0)
    st.warnings.push_back("degenerate_transform: Y* fails to be immersed at " + std::to_string(bad) + " nodes");
  if (st.singular_count > 0)
    st.warnings.push_back("lift_singularity: Y* is near the light cone of Y at " + std::to_string(st.singular_count) +
                          " nodes");
  if (st.singular_count == g.size())
    throw Error(ErrorKind::lift_singularity, "Y* is near the light cone of Y at every node");
  st.surface = SurfaceChart::nodal(source.name() + ".darboux", g, source.max_order() - 1,
                                   [data](int i, int j, int order) { return JetPoint{data->flow_jet(i, j, order)}; },
                                   derived_kind(source));
  st.flow = data;
  return st;
}

AnalysisOptions DarbouxState::analysis_options(const AnalysisOptions& base) const {
  AnalysisOptions o = base;
  if (singular_count > 0) o.skip = std::make_shared<Grid<char>>(singular_mask);
  return o;
}

std::pair<int, int> RoundTwoSphere::signature() const {
  Eigen::Matrix4d gm;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) gm(a, b) = inner(basis[a], basis[b]);
  const Eigen::Vector4d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(gm).eigenvalues();
  const double tol = 1e-12 * ev.cwiseAbs().maxCoeff();
  int pos = 0, neg = 0;
  for (int k = 0; k < 4; ++k) {
    pos += ev[k] > tol;
    neg += ev[k] < -tol;
  }
  return {pos, neg};
}

DarbouxFramePoint darboux_frame_point(const SurfaceChart& source, const DarbouxState& state, int i, int j,
                                      const FrameOptions& options) {
  const int q = 3;
  const MovingFrame f =
      gauged_frame(source.node(i, j, q + 3), GaugePolicy::lambda2_half, frame_options_for(source, options));
  const FrameJets& J = *f.jets;
  const InvariantJets ij = invariant_jets(f);
  const double th = state.theta;
  const RJetVec Y = truncated(J.Y, q), L = J.L, R = J.R;
  const CJetVec Yz = truncated(J.Yz, q), Yzb = conj(Yz);
  const RJetVec Ys = std::static_pointer_cast<const DarbouxData>(state.flow)->ystar_jet(i, j, q);
  const CJet mu = inner(Yz, Ys) * 2.0;
  const RJet f1 = inner(Ys, R) * -0.5, f2 = inner(Ys, L) * -0.5;
  const CJetVec P = Yz + (mu * 0.5) * Y, Pb = conj(P);
  const RJetVec xi = L - (f2 * 2.0) * Y, eta = R - (f1 * 2.0) * Y;
  const CJet &l1 = ij.lambda1, &l2 = ij.lambda2;
  const CJetVec Ls = xi - (l2 * (2.0 / th)) * Ys, Rs = eta - (l1 * (2.0 / th)) * Ys;
  const CJetVec Ns = Y + (mu * (1.0 / th)) * P + (conj(mu) * (1.0 / th)) * Pb +
                     CJet(real(mu * conj(mu)) * (0.5 / (th * th))) * Ys + (l1 * (2.0 / th)) * xi +
                     (l2 * (2.0 / th)) * eta - (l1 * l2 * (4.0 / th)) * Ys;

  DarbouxFramePoint out;
  out.pair_singular = state.singular_mask.at(i, j);
  out.Y = value(Y);
  out.Ystar = value(Ys);
  out.xi = value(xi);
  out.eta = value(eta);
  out.P = value(P);
  out.mu = mu.value();
  out.f1 = f1.value();
  out.f2 = f2.value();
  out.lambda1 = l1.value();
  out.lambda2 = l2.value();
  out.Lstar = value(Ls).real();
  out.Rstar = value(Rs).real();
  out.Nstar = value(Ns).real();

  const cplx m = mu.value();
  const CJetVec Pz = d_z(P), Pbz = d_z(Pb);
  const CVec6 y = out.Y.cast<cplx>(), ys = out.Ystar.cast<cplx>(), x = out.xi.cast<cplx>(), e = out.eta.cast<cplx>();
  const CVec6 p = out.P, pb = p.conjugate();
  const cplx a1 = out.lambda1, a2 = out.lambda2;
  const double g1 = out.f1, g2 = out.f2;
  const auto rel = [](const CVec6& lhs, const CVec6& rhs) { return (lhs - rhs).norm() / std::max(1.0, lhs.norm()); };
  out.structure[0] = rel(value(d_z(Y)), -m / 2.0 * y + p);
  out.structure[1] = rel(value(d_z(Ys)), m / 2.0 * ys + th * pb);
  out.structure[2] = rel(value(Pz), m / 2.0 * p + th / 2.0 * y + a1 * x + a2 * e);
  out.structure[3] = rel(value(Pbz), -m / 2.0 * pb + 0.5 * ys - g1 * x - g2 * e);
  // xi and eta carry the normal connection: D_z xi = alpha xi, D_z eta = -alpha eta.
  const cplx al = ij.alpha.value();
  out.structure[4] = rel(value(d_z(xi)), al * x - 2.0 * g2 * p + 2.0 * a2 * pb);
  out.structure[5] = rel(value(d_z(eta)), -al * e - 2.0 * g1 * p + 2.0 * a1 * pb);
  out.null_pair = {std::abs(inner(out.xi, out.xi)), std::abs(inner(out.eta, out.eta)),
                   std::abs(inner(out.xi, out.eta) + 1.0)};

  const Vec6 Yu = partial(Y, 1, 0), Yv = partial(Y, 0, 1), Ysu = partial(Ys, 1, 0), Ysv = partial(Ys, 0, 1);
  out.sphere.basis = {out.Y, out.Ystar, Yu, Yv};

  // Y*_z against Span_C{Y*, Y, Y_zbar}.
  const CVec6 ysz = value(d_z(Ys));
  Eigen::Matrix<cplx, 6, 3> span;
  span << ys, y, value(Yzb);
  const Eigen::Matrix<cplx, 3, 1> coef = span.colPivHouseholderQr().solve(ysz);
  out.span_residual = (span * coef - ysz).norm() / std::max(ysz.norm(), 1e-300);

  Eigen::Matrix<double, 6, 4> A, B;
  A << out.Y, out.Ystar, Yu, Yv;
  B << out.Y, out.Ystar, Ysu, Ysv;
  const Eigen::Matrix<double, 6, 4> qa = A.householderQr().householderQ() * Eigen::Matrix<double, 6, 4>::Identity();
  const Eigen::Matrix<double, 6, 4> qb = B.householderQr().householderQ() * Eigen::Matrix<double, 6, 4>::Identity();
  const Eigen::Matrix<double, 6, 4> off = qb - qa * (qa.transpose() * qb);
  out.envelope_angle = Eigen::JacobiSVD<Eigen::Matrix<double, 6, 4>>(off).singularValues().maxCoeff();

  out.lift_singular = !(std::abs(out.f2) > 1e-8 * out.Ystar.norm() * value(L).norm());
  if (out.lift_singular) {
    out.lift_pairing = out.dtheta_residual = kNaN;
    return out;
  }
  const CJetVec ell = recip(l2 * 2.0) * L;
  const CJetVec ells = (CJet(recip(f2)) * (-th / 2.0)) * Ls;
  out.lift_pairing = std::abs(inner(ell, ells).value() + 1.0);
  const CJetVec ez = d_z(ell), ezb = d_zbar(ell), esz = d_z(ells);
  const CVec6 e0 = value(ell), es0 = value(ells);
  const CVec6 rhs = inner(value(ez), es0) * es0 + th * (value(ezb) + inner(value(ezb), es0) * e0);
  out.dtheta_residual = (value(esz) - rhs).norm() / (value(esz).norm() + std::abs(th) * value(ezb).norm());
  return out;
}

Grid<DarbouxFramePoint> darboux_frame(const SurfaceChart& source, const DarbouxState& state,
                                      const FrameOptions& options) {
  return map_grid<DarbouxFramePoint>(source.grid(), [&](int i, int j) {
    return darboux_frame_point(source, state, i, j, options);
  });
}

}  // namespace lorentz_iso
