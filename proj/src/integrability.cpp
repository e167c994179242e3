#include "lorentz_iso/integrability.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lorentz_iso/detail/grid_diff.hpp"

namespace lorentz_iso {

namespace {

constexpr cplx kI{0.0, 1.0};

bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool record_ok(const InvariantRecord& r) {
  return finite(r.s) && finite(r.lambda1) && finite(r.lambda2) && std::isfinite(r.beta);
}

bool connection_ok(const InvariantRecord& r) {
  return record_ok(r) && r.has_alpha && finite(r.alpha) && finite(r.gamma1) && finite(r.gamma2);
}

}  // namespace

ResidualField make_residual_field(std::string name, Grid<double> values, double tolerance) {
  ResidualField f;
  f.name = std::move(name);
  f.tolerance = tolerance;
  double sum = 0.0, sq = 0.0;
  for (double x : values) {
    if (!std::isfinite(x)) continue;
    ++f.evaluated;
    f.max = std::max(f.max, x);
    sum += x;
    sq += x * x;
  }
  if (f.evaluated > 0) {
    f.mean = sum / static_cast<double>(f.evaluated);
    f.l2 = std::sqrt(sq / static_cast<double>(f.evaluated));
  }
  f.pass = f.evaluated > 0 && f.max < tolerance;
  f.values = std::move(values);
  return f;
}

std::vector<ResidualField> structure_residuals(const ChartAnalysis& a, double tolerance, DerivativeRoute route) {
  const GridSpec& g = a.grid;
  std::array<Grid<double>, 5> r;
  for (auto& x : r) x = Grid<double>(g, kNaN);

  if (route == DerivativeRoute::jets) {
    bool any = false;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const StructureResiduals& s = a.structure[k];
      r[0][k] = s.yzz, r[1][k] = s.yzzbar, r[2][k] = s.nz, r[3][k] = s.lz, r[4][k] = s.rz;
      any = any || std::isfinite(s.yzz);
    }
    if (!any) throw Error(ErrorKind::consistency, "chart analysis was computed without pointwise residuals");
  } else {
    const detail::GridDiff diff(g);
    auto field = [&](Vec6 MovingFrame::*m) {
      return [&a, m](int i, int j) -> Vec6 { return a.frames.at(i, j).*m; };
    };
    const auto fY = field(&MovingFrame::Y), fN = field(&MovingFrame::N), fL = field(&MovingFrame::L),
               fR = field(&MovingFrame::R);
    auto dz = [&](int i, int j, const auto& f) -> CVec6 {
      return 0.5 * (diff.partial(i, j, 1, 0, f).template cast<cplx>() -
                    kI * diff.partial(i, j, 0, 1, f).template cast<cplx>());
    };
    // Nodes whose difference footprint reaches a one-sided jet window are
    // skipped: the jet error changes character there and spoils the h^2 rate.
    auto near_lower = [&](int i, int j) {
      if (a.lower_accuracy.size() != g.size()) return false;
      for (const auto& tu : detail::axis_stencil(g.nu, g.periodic_u, g.hu(), i, 2))
        for (const auto& tv : detail::axis_stencil(g.nv, g.periodic_v, g.hv(), j, 2))
          if (a.lower_accuracy.at(tu.index, tv.index)) return true;
      return false;
    };
    parallel_for(g.size(), [&](std::size_t k) {
      const int i = static_cast<int>(k / g.nv), j = static_cast<int>(k % g.nv);
      const InvariantRecord& inv = a.inv[k];
      if (!record_ok(inv) || near_lower(i, j)) return;
      const MovingFrame& f = a.frames[k];
      const CVec6 Y = f.Y.cast<cplx>(), L = f.L.cast<cplx>(), R = f.R.cast<cplx>();
      const Vec6 Yuu = diff.partial(i, j, 2, 0, fY), Yvv = diff.partial(i, j, 0, 2, fY),
                 Yuv = diff.partial(i, j, 1, 1, fY);
      const CVec6 Yz = dz(i, j, fY), Yzb = Yz.conjugate();
      const CVec6 Yzz = 0.25 * ((Yuu - Yvv).cast<cplx>() - 2.0 * kI * Yuv.cast<cplx>());
      const Vec6 Yzzb = 0.25 * (Yuu + Yvv);
      const cplx s = inv.s, l1 = inv.lambda1, l2 = inv.lambda2;
      const double beta = inv.beta;
      r[0][k] = (Yzz - (-s / 2.0 * Y + l1 * L + l2 * R)).norm();
      r[1][k] = (Yzzb - beta * f.Y - 0.5 * f.N).norm();
      if (!connection_ok(inv)) return;
      const cplx al = inv.alpha, g1 = inv.gamma1, g2 = inv.gamma2;
      r[2][k] = (dz(i, j, fN) - (2.0 * beta * Yz - s * Yzb + 2.0 * g1 * L + 2.0 * g2 * R)).norm();
      r[3][k] = (dz(i, j, fL) - (al * L - 2.0 * g2 * Y + 2.0 * l2 * Yzb)).norm();
      r[4][k] = (dz(i, j, fR) - (-al * R - 2.0 * g1 * Y + 2.0 * l1 * Yzb)).norm();
    });
  }
  const char* names[5] = {"yzz", "yzzbar", "nz", "lz", "rz"};
  std::vector<ResidualField> out;
  for (int e = 0; e < 5; ++e) out.push_back(make_residual_field(names[e], std::move(r[e]), tolerance));
  return out;
}

std::vector<ResidualField> structure_residuals(const SurfaceChart& chart, const Grid<MovingFrame>& frames,
                                               const Grid<InvariantRecord>& inv, const AnalysisOptions& options,
                                               double tolerance) {
  const GridSpec& g = chart.grid();
  if (!(frames.spec() == g) || !(inv.spec() == g))
    throw Error(ErrorKind::consistency, "frame and invariant grids differ from the chart grid");
  std::array<Grid<double>, 5> r;
  for (auto& x : r) x = Grid<double>(g, kNaN);
  parallel_for(g.size(), [&](std::size_t k) {
    if (!record_ok(inv[k])) return;
    if (frames[k].gauge != inv[k].gauge)
      throw Error(ErrorKind::consistency, "frames and invariants were computed with different gauges");
    const int i = static_cast<int>(k / g.nv), j = static_cast<int>(k % g.nv);
    const PointAnalysis pa = analyze_point(chart.node(i, j, options.order), options.gauge, options.frame);
    if (pa.frame.gauge != inv[k].gauge)
      throw Error(ErrorKind::consistency, "invariants do not match the gauge policy of the analysis options");
    const StructureResiduals s = structure_residuals(pa.frame, inv[k]);
    r[0][k] = s.yzz, r[1][k] = s.yzzbar, r[2][k] = s.nz, r[3][k] = s.lz, r[4][k] = s.rz;
  });
  const char* names[5] = {"yzz", "yzzbar", "nz", "lz", "rz"};
  std::vector<ResidualField> out;
  for (int e = 0; e < 5; ++e) out.push_back(make_residual_field(names[e], std::move(r[e]), tolerance));
  return out;
}

std::vector<ResidualField> integrability_residuals(const Grid<InvariantRecord>& inv, double tolerance) {
  const GridSpec& g = inv.spec();
  const detail::GridDiff diff(g);
  std::array<Grid<double>, 4> r;
  for (auto& x : r) x = Grid<double>(g, kNaN);
  auto member = [&inv](cplx InvariantRecord::*m) { return [&inv, m](int i, int j) { return inv.at(i, j).*m; }; };
  const auto fs = member(&InvariantRecord::s), fa = member(&InvariantRecord::alpha),
             fg1 = member(&InvariantRecord::gamma1), fg2 = member(&InvariantRecord::gamma2);
  const auto fb = [&inv](int i, int j) { return cplx(inv.at(i, j).beta); };
  auto dzbar = [&](int i, int j, const auto& f) {
    return 0.5 * (diff.partial(i, j, 1, 0, f) + kI * diff.partial(i, j, 0, 1, f));
  };
  auto dz = [&](int i, int j, const auto& f) {
    return 0.5 * (diff.partial(i, j, 1, 0, f) - kI * diff.partial(i, j, 0, 1, f));
  };
  parallel_for(g.size(), [&](std::size_t k) {
    const InvariantRecord& x = inv[k];
    if (!connection_ok(x)) return;
    const int i = static_cast<int>(k / g.nv), j = static_cast<int>(k % g.nv);
    const cplx l1 = x.lambda1, l2 = x.lambda2, g1 = x.gamma1, g2 = x.gamma2, ab = std::conj(x.alpha),
               sb = std::conj(x.s);
    r[0][k] = std::abs(dzbar(i, j, fs) + 2.0 * dz(i, j, fb) + 4.0 * l1 * std::conj(g2) + 4.0 * l2 * std::conj(g1));
    r[1][k] = std::abs(std::imag(dzbar(i, j, fg1) + g1 * ab + sb / 2.0 * l1));
    r[2][k] = std::abs(std::imag(dzbar(i, j, fg2) - g2 * ab + sb / 2.0 * l2));
    const cplx azb = dzbar(i, j, fa);
    r[3][k] = std::abs(azb - std::conj(azb) - 2.0 * (l1 * std::conj(l2) - l2 * std::conj(l1)));
  });
  const char* names[4] = {"gauss", "codazzi1", "codazzi2", "ricci"};
  std::vector<ResidualField> out;
  for (int e = 0; e < 4; ++e) out.push_back(make_residual_field(names[e], std::move(r[e]), tolerance));
  return out;
}

std::vector<ResidualField> integrability_residuals(const ChartAnalysis& a, double tolerance) {
  std::array<Grid<double>, 4> r;
  for (auto& x : r) x = Grid<double>(a.grid, kNaN);
  bool any = false;
  for (std::size_t k = 0; k < a.grid.size(); ++k) {
    const CompatibilityResiduals& c = a.compatibility[k];
    r[0][k] = c.gauss, r[1][k] = c.codazzi1, r[2][k] = c.codazzi2, r[3][k] = c.ricci;
    any = any || std::isfinite(c.gauss);
  }
  if (!any)
    throw Error(ErrorKind::jet_order, "chart analysis carries no compatibility residuals (order too low or disabled)");
  const char* names[4] = {"gauss", "codazzi1", "codazzi2", "ricci"};
  std::vector<ResidualField> out;
  for (int e = 0; e < 4; ++e) out.push_back(make_residual_field(names[e], std::move(r[e]), tolerance));
  return out;
}

ResidualField ricci_right_side(const Grid<InvariantRecord>& inv, double tolerance) {
  Grid<double> r(inv.spec(), kNaN);
  for (std::size_t k = 0; k < inv.size(); ++k) {
    const InvariantRecord& x = inv[k];
    if (!record_ok(x)) continue;
    r[k] = std::abs(2.0 * (x.lambda1 * std::conj(x.lambda2) - x.lambda2 * std::conj(x.lambda1)));
  }
  return make_residual_field("ricci_right_side", std::move(r), tolerance);
}

IsothermicCertificate isothermic_check(const Grid<InvariantRecord>& inv, const Grid<char>& umbilic, double tolerance) {
  if (!(inv.spec() == umbilic.spec())) throw Error(ErrorKind::consistency, "umbilic mask grid differs");
  IsothermicCertificate c;
  c.tolerance = tolerance;
  const GridSpec& g = inv.spec();
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) {
      const InvariantRecord& x = inv.at(i, j);
      if (!record_ok(x)) continue;
      if (umbilic.at(i, j)) {
        c.umbilic_points.push_back({i, j});
        continue;
      }
      ++c.evaluated;
      c.max_im_kappa = std::max({c.max_im_kappa, std::abs(x.lambda1.imag()) / std::max(1.0, std::abs(x.lambda1)),
                                 std::abs(x.lambda2.imag()) / std::max(1.0, std::abs(x.lambda2))});
    }
  if (c.evaluated == 0) throw Error(ErrorKind::degenerate_surface, "no non-umbilic node to certify");
  c.is_isothermic = c.max_im_kappa < tolerance;
  return c;
}

IsothermicCertificate isothermic_check(const ChartAnalysis& a, double tolerance) {
  return isothermic_check(a.inv, a.umbilic, tolerance);
}

Grid<InvariantRecord> random_invariants(const GridSpec& grid, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, amplitude);
  auto c = [&] {
    const double re = n(rng);
    return cplx(re, n(rng));
  };
  Grid<InvariantRecord> out(grid);
  for (auto& x : out) {
    x.s = c(), x.lambda1 = c(), x.lambda2 = c(), x.alpha = c();
    x.beta = n(rng);
    x.gamma1 = c(), x.gamma2 = c(), x.alpha_z = c(), x.alpha_zbar = c();
    x.beta_direct = x.beta;
    x.kappa_norm = std::abs(x.lambda1) + std::abs(x.lambda2);
    x.has_alpha = x.has_alpha_z = true;
  }
  return out;
}

}  // namespace lorentz_iso
