#include "lorentz_iso/surface_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lorentz_iso {

namespace {

/// f(a du + b dv, c du + d dv) for a jet f in (du, dv).
RJet substitute_linear(const RJet& f, double a, double b, double c, double d) {
  const int K = f.order();
  RJet x(K), y(K);
  if (K >= 1) {
    x.coeff(1, 0) = a;
    x.coeff(0, 1) = b;
    y.coeff(1, 0) = c;
    y.coeff(0, 1) = d;
  }
  std::vector<RJet> xp(K + 1, RJet(1.0, K)), yp(K + 1, RJet(1.0, K));
  for (int k = 1; k <= K; ++k) {
    xp[k] = xp[k - 1] * x;
    yp[k] = yp[k - 1] * y;
  }
  RJet out(K);
  for (int deg = 0; deg <= K; ++deg)
    for (int j = 0; j <= deg; ++j) {
      const double cij = f.coeff(deg - j, j);
      if (cij != 0.0) out += (xp[deg - j] * yp[j]) * cij;
    }
  return out;
}

void check_order(int order, int max_order) {
  if (order < 0 || order > max_order) throw Error(ErrorKind::jet_order, "requested jet order exceeds chart order");
}

}  // namespace

SurfaceChart SurfaceChart::continuous(std::string name, GridSpec grid, int max_order, PointEvaluator eval,
                                      ChartKind kind) {
  grid.validate();
  SurfaceChart c;
  c.name_ = std::move(name);
  c.grid_ = grid;
  c.max_order_ = max_order;
  c.kind_ = kind;
  c.point_eval_ = std::move(eval);
  return c;
}

SurfaceChart SurfaceChart::nodal(std::string name, GridSpec grid, int max_order, NodeEvaluator eval,
                                 ChartKind kind) {
  grid.validate();
  SurfaceChart c;
  c.name_ = std::move(name);
  c.grid_ = grid;
  c.max_order_ = max_order;
  c.kind_ = kind;
  c.node_eval_ = std::move(eval);
  return c;
}

JetPoint SurfaceChart::at(double u, double v, int order) const {
  if (!point_eval_) throw Error(ErrorKind::parameter, "chart '" + name_ + "' is only defined at grid nodes");
  check_order(order, max_order_);
  return point_eval_(u, v, order);
}

JetPoint SurfaceChart::node(int i, int j, int order) const {
  if (i < 0 || j < 0 || i >= grid_.nu || j >= grid_.nv) throw Error(ErrorKind::parameter, "grid node out of range");
  check_order(order, max_order_);
  if (node_eval_) return node_eval_(i, j, order);
  return point_eval_(grid_.u(i), grid_.v(j), order);
}

SurfaceChart SurfaceChart::with_grid(const GridSpec& grid) const {
  if (!point_eval_) throw Error(ErrorKind::parameter, "cannot regrid a nodal chart");
  grid.validate();
  SurfaceChart c(*this);
  c.grid_ = grid;
  return c;
}

SurfaceChart SurfaceChart::renamed(std::string name) const {
  SurfaceChart c(*this);
  c.name_ = std::move(name);
  return c;
}

SurfaceChart SurfaceChart::rotated(double angle) const {
  if (!point_eval_) throw Error(ErrorKind::parameter, "cannot rotate a nodal chart");
  const double cs = std::cos(angle), sn = std::sin(angle);
  const double u0 = grid_.u0, v0 = grid_.v0;
  auto base = point_eval_;
  GridSpec g = grid_;
  g.periodic_u = g.periodic_v = false;
  std::ostringstream name;
  name << name_ << "@rot" << angle;
  return continuous(
      name.str(), g, max_order_,
      [=](double u, double v, int order) {
        const double du = u - u0, dv = v - v0;
        JetPoint p = base(u0 + cs * du - sn * dv, v0 + sn * du + cs * dv, order);
        for (auto& comp : p.y) comp = substitute_linear(comp, cs, -sn, sn, cs);
        return p;
      },
      kind_);
}

Grid<Vec6> sample_values(const SurfaceChart& chart) {
  return map_grid<Vec6>(chart.grid(), [&](int i, int j) { return chart.node(i, j, 0).value(); });
}

// ---------------------------------------------------------------------------

PseudoVector embed_space_form(const SpaceFormPoint& p, double tol) {
  const auto& x = p.coords;
  Vec6 out;
  switch (p.curvature) {
    case 0: {
      if (x.size() != 4) throw Error(ErrorKind::invalid_point, "R^4_1 point needs 4 coordinates");
      const double q = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - x[3] * x[3];
      out << (-1.0 + q) / 2.0, x[0], x[1], x[2], x[3], (1.0 + q) / 2.0;
      break;
    }
    case 1: {
      if (x.size() != 5) throw Error(ErrorKind::invalid_point, "S^4_1 point needs 5 coordinates");
      const double q = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] - x[4] * x[4];
      if (std::abs(q - 1.0) > tol) throw Error(ErrorKind::invalid_point, "<x,x> != 1 for a point of S^4_1");
      out << x[0], x[1], x[2], x[3], x[4], 1.0;
      break;
    }
    case -1: {
      if (x.size() != 5) throw Error(ErrorKind::invalid_point, "H^4_1 point needs 5 coordinates");
      const double q = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - x[3] * x[3] - x[4] * x[4];
      if (std::abs(q + 1.0) > tol) throw Error(ErrorKind::invalid_point, "<x,x> != -1 for a point of H^4_1");
      out << 1.0, x[0], x[1], x[2], x[3], x[4];
      break;
    }
    default:
      throw Error(ErrorKind::invalid_point, "curvature must be 0, +1 or -1");
  }
  return PseudoVector(out);
}

RJetVec embed_flat(const std::array<RJet, 4>& x) {
  const RJet q = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - x[3] * x[3];
  return {(q - 1.0) * 0.5, x[0], x[1], x[2], x[3], (q + 1.0) * 0.5};
}

// ---------------------------------------------------------------------------

namespace {

/// Denominator q of a rational approximation p/q of t, or 0 if none with q <= 1000.
int rational_denominator(double t) {
  double x = t;
  long h0 = 1, h1 = 0, k0 = 0, k1 = 1;
  for (int it = 0; it < 20; ++it) {
    const double a = std::floor(x);
    const long h = static_cast<long>(a) * h0 + h1, k = static_cast<long>(a) * k0 + k1;
    h1 = h0;
    h0 = h;
    k1 = k0;
    k0 = k;
    if (k > 1000) return 0;
    if (std::abs(t - static_cast<double>(h) / static_cast<double>(k)) < 1e-12 * std::max(1.0, std::abs(t)))
      return static_cast<int>(k);
    const double frac = x - a;
    if (frac < 1e-15) return 0;
    x = 1.0 / frac;
  }
  return 0;
}

}  // namespace

SurfaceChart homogeneous_torus(double t, TorusCoordinates coords, int nu, int nv) {
  if (!(t * t > 1.0)) throw Error(ErrorKind::parameter, "homogeneous torus needs t^2 > 1");
  const double root = std::sqrt(t * t - 1.0);
  const int q = rational_denominator(std::abs(t));
  const double theta_side = 2.0 * std::numbers::pi * root * std::max(q, 1);
  GridSpec grid;
  grid.u0 = 0.0;
  grid.u1 = theta_side;
  grid.v0 = 0.0;
  grid.v1 = 2.0 * std::numbers::pi;
  grid.nu = nu;
  grid.nv = nv;
  const bool adapted = coords == TorusCoordinates::adapted;
  grid.periodic_u = !adapted && q > 0;
  grid.periodic_v = !adapted;

  std::ostringstream name;
  name << "torus:t=" << t << (adapted ? "" : ",coords=angular");
  return SurfaceChart::continuous(name.str(), grid, kMaxJetOrder, [=](double u, double v, int order) {
    const RJet U = RJet::variable_u(u, order), V = RJet::variable_v(v, order);
    RJet theta = U, phi = V;
    if (adapted) {
      theta = (U + V) * (1.0 / std::numbers::sqrt2);
      phi = (V - U) * (1.0 / std::numbers::sqrt2);
    }
    const RJet psi = theta * (1.0 / root);
    const RJet tp = psi * t;
    const RJet ct = cos(tp), st = sin(tp), cp = cos(phi), sp = sin(phi);
    return JetPoint{{ct * cp, ct * sp, st * cp, st * sp, cos(psi), sin(psi)}};
  });
}

// ---------------------------------------------------------------------------

ProfileCurve ProfileCurve::polynomial(std::vector<double> f, std::vector<double> g, std::vector<double> h) {
  auto poly = [](std::vector<double> c) {
    if (c.empty()) c.push_back(0.0);
    return [c](const RJet& x) {
      RJet acc(c.back(), x.order());
      for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) acc = acc * x + c[k];
      return acc;
    };
  };
  auto deriv = [](const std::vector<double>& c) {
    std::vector<double> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<double>(k));
    return d;
  };
  auto describe = [](const std::vector<double>& c) {
    std::ostringstream os;
    for (std::size_t k = 0; k < c.size(); ++k) os << (k ? " " : "") << c[k];
    return os.str();
  };
  ProfileCurve p;
  p.f = poly(f);
  p.g = poly(g);
  p.h = poly(h);
  p.fp = poly(deriv(f));
  p.gp = poly(deriv(g));
  p.hp = poly(deriv(h));
  p.description = "f=[" + describe(f) + "] g=[" + describe(g) + "] h=[" + describe(h) + "]";
  return p;
}

namespace {

double scalar(const std::function<RJet(const RJet&)>& fn, double u) { return fn(RJet(u, 0)).value(); }

/// d(ut)/du = sqrt(f'^2 + g'^2 - h'^2) / |f|.
double conformal_speed(const ProfileCurve& p, double u) {
  const double fp = scalar(p.fp, u), gp = scalar(p.gp, u), hp = scalar(p.hp, u);
  return std::sqrt(fp * fp + gp * gp - hp * hp) / std::abs(scalar(p.f, u));
}

void validate_profile(const ProfileCurve& p, double u_begin, double u_end) {
  if (!(u_end > u_begin)) throw Error(ErrorKind::invalid_profile, "empty profile interval");
  constexpr int kSamples = 513;
  for (int k = 0; k < kSamples; ++k) {
    const double u = u_begin + (u_end - u_begin) * k / (kSamples - 1);
    const double f = scalar(p.f, u), fp = scalar(p.fp, u), gp = scalar(p.gp, u), hp = scalar(p.hp, u);
    std::ostringstream at;
    at << " at u=" << u;
    if (std::abs(f) < 1e-12) throw Error(ErrorKind::invalid_profile, "f vanishes" + at.str());
    if (std::abs(fp) < 1e-12) throw Error(ErrorKind::invalid_profile, "f' vanishes" + at.str());
    if (std::abs(gp - hp) < 1e-12) throw Error(ErrorKind::invalid_profile, "g' = h'" + at.str());
    if (!(fp * fp + gp * gp - hp * hp > 1e-12)) throw Error(ErrorKind::invalid_profile, "profile not spacelike" + at.str());
  }
}

double integrate_speed(const ProfileCurve& p, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
      [&](double s) { return conformal_speed(p, s); }, a, b, 8, 1e-11);
}

/// Inverse of ut(u) on [u_begin, u_end] via a sample table and Newton steps.
class ConformalReparam {
 public:
  ConformalReparam(ProfileCurve profile, double u_begin, double u_end)
      : p_(std::move(profile)), u_begin_(u_begin) {
    constexpr int kTable = 257;
    us_.resize(kTable);
    ts_.resize(kTable);
    for (int k = 0; k < kTable; ++k) {
      us_[k] = u_begin + (u_end - u_begin) * k / (kTable - 1);
      ts_[k] = k == 0 ? 0.0 : ts_[k - 1] + integrate_speed(p_, us_[k - 1], us_[k]);
    }
  }

  double total() const { return ts_.back(); }

  double u_of(double target) const {
    auto it = std::upper_bound(ts_.begin(), ts_.end(), target);
    std::size_t k = it == ts_.begin() ? 0 : static_cast<std::size_t>(it - ts_.begin()) - 1;
    k = std::min(k, ts_.size() - 2);
    double u = us_[k] + (us_[k + 1] - us_[k]) * (target - ts_[k]) / (ts_[k + 1] - ts_[k]);
    for (int iter = 0; iter < 50; ++iter) {
      const double f = ts_[k] + local_integral(us_[k], u) - target;
      const double step = f / conformal_speed(p_, u);
      u -= step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(u))) break;
    }
    return u;
  }

  const ProfileCurve& profile() const { return p_; }

 private:
  // Fixed Gauss rule on a sub-interval of one table cell; the integrand is
  // smooth there so this is accurate to round-off.
  double local_integral(double a, double b) const {
    return boost::math::quadrature::gauss<double, 30>::integrate([&](double s) { return conformal_speed(p_, s); },
                                                                 a, b);
  }

  ProfileCurve p_;
  double u_begin_;
  std::vector<double> us_, ts_;
};

/// |f| with the sign of f at the base value folded in.
RJet abs_jet(const RJet& x) { return x.value() < 0 ? -x : x; }

}  // namespace

double rotational_parameter(const ProfileCurve& profile, double u_begin, double u) {
  return integrate_speed(profile, u_begin, u);
}

SurfaceChart rotational_surface(const ProfileCurve& profile, double u_begin, double u_end, int nu, int nv) {
  validate_profile(profile, u_begin, u_end);
  auto reparam = std::make_shared<ConformalReparam>(profile, u_begin, u_end);
  GridSpec grid;
  grid.u0 = 0.0;
  grid.u1 = reparam->total();
  grid.v0 = 0.0;
  grid.v1 = 2.0 * std::numbers::pi;
  grid.nu = nu;
  grid.nv = nv;
  grid.periodic_v = true;
  std::ostringstream name;
  name << "rotational:" << profile.description << " u=[" << u_begin << "," << u_end << "]";
  return SurfaceChart::continuous(name.str(), grid, kMaxJetOrder, [reparam](double ut, double v, int order) {
    const ProfileCurve& p = reparam->profile();
    const double u0 = reparam->u_of(ut);
    // u(ut) solves du/dut = |f| / sqrt(f'^2 + g'^2 - h'^2); Picard iteration on
    // jets gains one correct order per pass.
    RJet U(u0, order);
    for (int pass = 0; pass < order; ++pass) {
      const RJet fp = p.fp(U), gp = p.gp(U), hp = p.hp(U);
      const RJet rate = abs_jet(p.f(U)) / sqrt(fp * fp + gp * gp - hp * hp);
      RJet next(u0, order);
      for (int k = 0; k < order; ++k) next.coeff(k + 1, 0) = rate.coeff(k, 0) / (k + 1);
      U = next;
    }
    const RJet V = RJet::variable_v(v, order);
    const RJet f = p.f(U), g = p.g(U), h = p.h(U);
    return JetPoint{embed_flat({f * cos(V), f * sin(V), g, h})};
  });
}

SurfaceChart null_graph_surface(int nu, int nv) {
  GridSpec grid{-1.0, 1.0, -1.0, 1.0, nu, nv, false, false};
  return SurfaceChart::continuous("null-graph", grid, kMaxJetOrder, [](double u, double v, int order) {
    const RJet U = RJet::variable_u(u, order), V = RJet::variable_v(v, order);
    const RJet phi = (U * U - V * V) * 0.5;
    return JetPoint{embed_flat({U, V, phi, phi})};
  });
}

// ---------------------------------------------------------------------------

namespace {

/// Fornberg weights of the m-th derivative at z from the nodes x.
std::vector<double> fornberg_weights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[j][m];
  return w;
}

/// Second-order stencils on unit spacing for the k-th derivative: the
/// central one (k + 1 nodes for even k, k + 2 for odd k) and, for a node d
/// steps from the left end, a one-sided window of k + 2 nodes starting there.
struct StencilTable {
  std::vector<double> central;
  std::vector<std::vector<double>> left;

  int half() const { return static_cast<int>(central.size()) / 2; }
};

const StencilTable& stencil_table(int k) {
  static const std::array<StencilTable, kMaxJetOrder + 1> tables = [] {
    std::array<StencilTable, kMaxJetOrder + 1> t;
    for (int k = 0; k <= kMaxJetOrder; ++k) {
      const int half = (k + 1) / 2;
      std::vector<double> x;
      for (int o = -half; o <= half; ++o) x.push_back(o);
      t[k].central = fornberg_weights(0.0, x, k);
      const int width = k + 2;
      std::vector<double> xs(width);
      for (int o = 0; o < width; ++o) xs[o] = o;
      for (int d = 0; d < half; ++d) t[k].left.push_back(fornberg_weights(d, xs, k));
    }
    return t;
  }();
  return tables[k];
}

struct AxisStencil {
  std::vector<int> nodes;
  std::vector<double> weights;
  bool shifted = false;
};

AxisStencil axis_stencil(int k, int center, int n, bool periodic, double h) {
  const StencilTable& t = stencil_table(k);
  const int half = t.half();
  if (n < std::max(2 * half + 1, periodic ? 0 : k + 2))
    throw Error(ErrorKind::stencil, "grid too small for the finite-difference stencil");
  AxisStencil s;
  const double scale = std::pow(h, -k);
  if (periodic || (center >= half && center <= n - 1 - half)) {
    for (int o = -half; o <= half; ++o) {
      s.nodes.push_back(periodic ? ((center + o) % n + n) % n : center + o);
      s.weights.push_back(t.central[o + half] * scale);
    }
    return s;
  }
  // One-sided window; the right end mirrors the left with sign (-1)^k.
  s.shifted = true;
  const bool left = center < half;
  const int d = left ? center : n - 1 - center;
  const auto& w = t.left[d];
  const double sign = left || k % 2 == 0 ? 1.0 : -1.0;
  for (int o = 0; o < static_cast<int>(w.size()); ++o) {
    s.nodes.push_back(left ? o : n - 1 - o);
    s.weights.push_back(sign * w[o] * scale);
  }
  return s;
}

}  // namespace

SurfaceChart jets_from_samples(const Grid<Vec6>& values, int order, std::string name) {
  const GridSpec& g = values.spec();
  if (order < 0 || order > kMaxJetOrder)
    throw Error(ErrorKind::stencil, "sampled jets support orders 0.." + std::to_string(kMaxJetOrder));
  // Validate stencil sizes up front.
  axis_stencil(order, 0, g.nu, g.periodic_u, g.hu());
  axis_stencil(order, 0, g.nv, g.periodic_v, g.hv());
  auto data = std::make_shared<Grid<Vec6>>(values);
  return SurfaceChart::nodal(
      std::move(name), g, order,
      [data, order](int i, int j, int requested) {
        const GridSpec& gs = data->spec();
        JetPoint p;
        for (auto& c : p.y) c = RJet(requested);
        for (int deg = 0; deg <= requested; ++deg)
          for (int b = 0; b <= deg; ++b) {
            const int a = deg - b;
            const AxisStencil su = axis_stencil(a, i, gs.nu, gs.periodic_u, gs.hu());
            const AxisStencil sv = axis_stencil(b, j, gs.nv, gs.periodic_v, gs.hv());
            p.lower_accuracy = p.lower_accuracy || su.shifted || sv.shifted;
            Vec6 d = Vec6::Zero();
            for (std::size_t x = 0; x < su.nodes.size(); ++x)
              for (std::size_t y = 0; y < sv.nodes.size(); ++y)
                d += su.weights[x] * sv.weights[y] * data->at(su.nodes[x], sv.nodes[y]);
            const double norm = jet_detail::factorial(a) * jet_detail::factorial(b);
            for (int k = 0; k < 6; ++k) p.y[k].coeff(a, b) = d[k] / norm;
          }
        (void)order;
        return p;
      },
      ChartKind::sampled);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t k = 0;
  while (k < s.size() && (s[k] == ' ' || s[k] == '\t')) ++k;
  return s.substr(k);
}

std::vector<double> unique_sorted(std::vector<double> xs, double tol) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (double x : xs)
    if (out.empty() || std::abs(x - out.back()) > tol) out.push_back(x);
  return out;
}

double uniform_step(const std::vector<double>& xs, const std::string& axis) {
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t k = 1; k < xs.size(); ++k)
    if (std::abs((xs[k] - xs[k - 1]) - h) > 1e-8 * std::max(1.0, std::abs(h)))
      throw Error(ErrorKind::input, "non-uniform " + axis + " spacing in chart CSV");
  return h;
}

}  // namespace

SurfaceChart load_chart_csv(const std::string& path, const CsvChartOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::input, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::input, path + ": empty file");
  const std::vector<std::string> expected = {"u", "v", "x1", "x2", "x3", "x4", "x5", "x6"};
  auto header = split_csv(trim(line));
  for (auto& h : header) h = trim(h);
  if (header != expected) throw Error(ErrorKind::input, path + ":1: header must be u,v,x1,x2,x3,x4,x5,x6");

  struct Row {
    double u, v;
    Vec6 x;
  };
  std::vector<Row> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    const std::string where = path + ":" + std::to_string(lineno) + ": ";
    if (cells.size() != 8) throw Error(ErrorKind::input, where + "expected 8 columns");
    double vals[8];
    for (int k = 0; k < 8; ++k) {
      try {
        std::size_t used = 0;
        vals[k] = std::stod(trim(cells[k]), &used);
        if (used != trim(cells[k]).size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw Error(ErrorKind::input, where + "malformed number '" + cells[k] + "'");
      }
    }
    Row r{vals[0], vals[1], Vec6()};
    for (int k = 0; k < 6; ++k) r.x[k] = vals[2 + k];
    const double n2 = r.x.squaredNorm();
    if (!(n2 > 0.0)) throw Error(ErrorKind::input, where + "zero vector is not a point of the light cone");
    if (std::abs(inner(r.x, r.x)) > options.null_tolerance * std::max(1.0, n2))
      throw Error(ErrorKind::input, where + "row is not a null vector of R^6_2");
    rows.push_back(r);
  }
  if (rows.empty()) throw Error(ErrorKind::input, path + ": no data rows");

  std::vector<double> us, vs;
  for (const auto& r : rows) {
    us.push_back(r.u);
    vs.push_back(r.v);
  }
  const auto ux = unique_sorted(us, 1e-12), vx = unique_sorted(vs, 1e-12);
  if (ux.size() < 2 || vx.size() < 2) throw Error(ErrorKind::input, path + ": need at least a 2x2 grid");
  if (ux.size() * vx.size() != rows.size()) throw Error(ErrorKind::input, path + ": rows do not form a full grid");
  const double hu = uniform_step(ux, "u"), hv = uniform_step(vx, "v");

  GridSpec g;
  g.nu = static_cast<int>(ux.size());
  g.nv = static_cast<int>(vx.size());
  g.u0 = ux.front();
  g.v0 = vx.front();
  g.periodic_u = options.periodic_u;
  g.periodic_v = options.periodic_v;
  g.u1 = options.periodic_u ? ux.back() + hu : ux.back();
  g.v1 = options.periodic_v ? vx.back() + hv : vx.back();

  Grid<Vec6> values(g, Vec6::Zero());
  Grid<char> seen(g, 0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int i = static_cast<int>(std::lround((rows[k].u - g.u0) / hu));
    const int j = static_cast<int>(std::lround((rows[k].v - g.v0) / hv));
    if (seen.at(i, j)) throw Error(ErrorKind::input, path + ": duplicate grid node (" + std::to_string(i) + "," +
                                                         std::to_string(j) + ")");
    seen.at(i, j) = 1;
    values.at(i, j) = rows[k].x;
  }
  return jets_from_samples(values, options.order, "csv:" + path);
}

void write_chart_csv(const std::string& path, const Grid<Vec6>& values, const std::vector<std::string>& extra_names,
                     const std::vector<Grid<double>>& extra_columns) {
  if (extra_names.size() != extra_columns.size()) throw Error(ErrorKind::parameter, "extra column name mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::input, "cannot write " + path);
  out << "u,v,x1,x2,x3,x4,x5,x6";
  for (const auto& n : extra_names) out << ',' << n;
  out << '\n';
  out << std::setprecision(17);
  const GridSpec& g = values.spec();
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) {
      out << g.u(i) << ',' << g.v(j);
      for (int k = 0; k < 6; ++k) out << ',' << values.at(i, j)[k];
      for (const auto& col : extra_columns) out << ',' << col.at(i, j);
      out << '\n';
    }
}

}  // namespace lorentz_iso
