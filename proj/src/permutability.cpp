#include "lorentz_iso/permutability.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace lorentz_iso {

namespace {

using json = nlohmann::json;

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"source_isothermic", 1e-6},     {"left_polar_isothermic", 1e-6}, {"right_polar_isothermic", 1e-6},
      {"kappa_L_reality", 1e-7},       {"duality_right_of_left", 1e-6}, {"duality_left_of_right", 1e-6},
      {"two_step_polar", 1e-6},        {"schwarzian_shift", 1e-5},      {"hopf_shift", 1e-6},
      {"connection_shift", 1e-6},      {"spectral_identity", 1e-8},     {"polar_schwarzian_shift", 1e-5},
      {"polar_hopf", 1e-6},            {"polar_connection", 1e-6},      {"spectral_path", 1e-6},
      {"spectral_gram_drift", 1e-8},   {"darboux_nullity", 1e-8},       {"darboux_normalization", 1e-8},
      {"darboux_path", 1e-6},          {"pair_structure", 1e-8},        {"null_pair", 1e-8},
      {"span_condition", 1e-6},        {"envelope_angle", 1e-6},        {"sphere_signature", 0.5},
      {"darboux_isothermic", 1e-5},    {"lstar_agreement", 1e-6},       {"lift_pairing", 1e-8},
      {"dtheta_relation", 1e-5},
  };
  return t;
}

double nan_if(bool masked, double x) { return masked ? kNaN : x; }

/// Gauge-invariant reality measure, as in isothermic_check.
double reality(const InvariantRecord& r) {
  return std::max(std::abs(r.lambda1.imag()) / std::max(1.0, std::abs(r.lambda1)),
                  std::abs(r.lambda2.imag()) / std::max(1.0, std::abs(r.lambda2)));
}

ResidualField scalar_field(std::string name, double value, double tol) {
  GridSpec g;
  g.nu = g.nv = 1;
  return make_residual_field(std::move(name), Grid<double>(g, value), tol);
}

std::string grid_label(const GridSpec& g) { return std::to_string(g.nu) + "x" + std::to_string(g.nv); }

class Harness {
 public:
  Harness(std::string id, const SurfaceChart& chart, const VerifyOptions& options)
      : chart_(chart), options_(options), start_(std::chrono::steady_clock::now()) {
    report_.theorem_id = std::move(id);
    report_.surface_id = chart.name();
    report_.parameters["grid"] = grid_label(chart.grid());
    report_.parameters["jet_order"] = static_cast<long long>(options.analysis.order);
    report_.parameters["chart_kind"] = std::string(chart.kind() == ChartKind::sampled   ? "sampled"
                                                   : chart.kind() == ChartKind::derived ? "derived"
                                                                                        : "analytic");
  }

  VerificationReport& report() { return report_; }

  double tol(const std::string& name) const { return check_tolerance(options_, chart_, name); }

  void add(std::string name, Grid<double> values) {
    const double t = tol(name);
    report_.parameters["tol." + name] = t;
    report_.checks.push_back(make_residual_field(std::move(name), std::move(values), t));
  }

  void add_scalar(std::string name, double value) {
    const double t = tol(name);
    report_.parameters["tol." + name] = t;
    report_.checks.push_back(scalar_field(std::move(name), value, t));
  }

  void note(std::string text) { report_.notes.push_back(std::move(text)); }

  void hypothesis(const std::string& text) {
    report_.hypothesis_failure = true;
    note("hypothesis failure: " + text);
  }

  /// Runs fn; geometric hypothesis failures become notes, input errors propagate.
  template <class F>
  bool guarded(const std::string& what, F&& fn) {
    try {
      fn();
      return true;
    } catch (const Error& e) {
      if (!is_hypothesis_failure(e.kind())) throw;
      hypothesis(what + ": " + e.what());
      return false;
    }
  }

  VerificationReport finish() {
    report_.runtime_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
    return std::move(report_);
  }

 private:
  const SurfaceChart& chart_;
  const VerifyOptions& options_;
  std::chrono::steady_clock::time_point start_;
  VerificationReport report_;
};

/// Per-node projective distance between two charts' values; nodes where
/// either chart throws a hypothesis failure are masked and counted.
Grid<double> projective_field(const SurfaceChart& a, const SurfaceChart& b, std::size_t& masked) {
  const GridSpec& g = a.grid();
  Grid<double> out(g, kNaN);
  Grid<char> bad(g, 0);
  parallel_for(g.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k / g.nv), j = static_cast<int>(k % g.nv);
    try {
      out[k] = projective_distance(a.node(i, j, 0).value(), b.node(i, j, 0).value());
    } catch (const Error& e) {
      if (!is_hypothesis_failure(e.kind())) throw;
      bad[k] = 1;
    }
  });
  masked = std::count(bad.begin(), bad.end(), char(1));
  return out;
}

void duality_checks(Harness& h, const SurfaceChart& surface, const FrameOptions& frame, bool two_step) {
  const SurfaceChart left = polar_chart(surface, PolarSide::left, frame);
  const SurfaceChart right = polar_chart(surface, PolarSide::right, frame);
  const auto add = [&](const std::string& name, const SurfaceChart& a, const SurfaceChart& b) {
    std::size_t masked = 0;
    Grid<double> v = projective_field(a, b, masked);
    if (masked == v.size()) {
      h.hypothesis(name + ": degenerate at every node");
      return;
    }
    if (masked > 0) h.note(name + ": " + std::to_string(masked) + " degenerate nodes masked");
    h.add(name, std::move(v));
  };
  add("duality_right_of_left", polar_chart(left, PolarSide::right, frame), surface);
  add("duality_left_of_right", polar_chart(right, PolarSide::left, frame), surface);
  if (two_step) add("two_step_polar", polar_chart(left, PolarSide::left, frame), two_step_polar(surface, frame));
}

bool source_precondition(Harness& h, const ChartAnalysis& a) {
  Grid<double> v(a.grid, kNaN);
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!a.umbilic[k] && !a.skipped[k]) v[k] = reality(a.inv[k]);
  h.add("source_isothermic", std::move(v));
  if (!h.report().checks.back().pass) {
    h.hypothesis("input is not isothermic in its coordinate (Hopf differential not real)");
    return false;
  }
  return true;
}

}  // namespace

bool VerificationReport::passed() const {
  if (hypothesis_failure || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const ResidualField& f) { return f.pass; });
}

double check_tolerance(const VerifyOptions& options, const SurfaceChart& chart, const std::string& check) {
  double t;
  if (auto it = options.tolerances.find(check); it != options.tolerances.end())
    t = it->second;
  else if (auto d = default_tolerances().find(check); d != default_tolerances().end())
    t = d->second;
  else
    throw Error(ErrorKind::parameter, "unknown check " + check);
  if (!(t > 0.0)) throw Error(ErrorKind::parameter, "tolerance of " + check + " must be positive");
  if (chart.kind() == ChartKind::sampled) {
    const double h = std::max(chart.grid().hu(), chart.grid().hv()) / options.sampled_h0;
    t = std::max(t, options.sampled_tol0 * h * h);
  }
  return t;
}

VerificationReport verify_polar_isothermic(const SurfaceChart& surface, const VerifyOptions& options) {
  Harness h("polar-isothermic", surface, options);
  ChartAnalysis src;
  if (!h.guarded("source analysis", [&] { src = analyze_chart(surface, options.analysis); }) ||
      !source_precondition(h, src))
    return h.finish();

  for (PolarSide side : {PolarSide::left, PolarSide::right}) {
    const std::string name = std::string(to_string(side)) + "_polar";
    h.guarded(name, [&] {
      PolarOptions po;
      po.analysis = options.analysis;
      const PolarResult p = polar(surface, side, po);
      if (p.degenerate_count > 0) h.note(name + ": " + std::to_string(p.degenerate_count) + " degenerate nodes masked");
      h.report().parameters[name + ".masked"] = static_cast<long long>(p.degenerate_count);
      AnalysisOptions ao = p.analysis_options(options.analysis);
      ao.gauge = side == PolarSide::left ? GaugePolicy::lambda1_half : GaugePolicy::lambda2_half;
      const ChartAnalysis pa = analyze_chart(p.surface, ao);
      Grid<double> v(pa.grid, kNaN);
      for (std::size_t k = 0; k < v.size(); ++k)
        if (!pa.skipped[k] && !pa.umbilic[k]) v[k] = reality(pa.inv[k]);
      h.add(name + "_isothermic", std::move(v));
      if (p.closed_form_invariants) {
        Grid<double> kl(pa.grid, kNaN);
        for (std::size_t k = 0; k < kl.size(); ++k)
          kl[k] = nan_if(p.degenerate_mask[k], std::abs((*p.closed_form_invariants)[k].lambda2.imag()));
        h.add("kappa_L_reality", std::move(kl));
      }
    });
  }
  h.guarded("duality", [&] { duality_checks(h, surface, options.analysis.frame, false); });
  return h.finish();
}

VerificationReport verify_duality(const SurfaceChart& surface, const VerifyOptions& options) {
  Harness h("duality", surface, options);
  h.guarded("duality", [&] { duality_checks(h, surface, options.analysis.frame, true); });
  return h.finish();
}

VerificationReport verify_spectral_commutes(const SurfaceChart& surface, double c, const VerifyOptions& options) {
  Harness h("spectral-commutes", surface, options);
  h.report().parameters["c"] = c;
  h.report().parameters["series_order"] = static_cast<long long>(options.spectral.series_order);
  h.report().parameters["base"] =
      std::to_string(options.spectral.base.i) + "," + std::to_string(options.spectral.base.j);

  SpectralOptions so;
  so.integration = options.spectral;
  so.frame = options.analysis.frame;
  // On sampled data the path residual is a discretization error; the
  // spectral_path check judges it against the grid-scaled tolerance.
  if (surface.kind() == ChartKind::sampled) so.integration.max_path_residual = std::numeric_limits<double>::infinity();
  SpectralResult sp;
  if (!h.guarded("spectral transform", [&] { sp = spectral_transform(surface, c, so); })) return h.finish();
  h.add_scalar("spectral_path", sp.path_residual);
  h.add_scalar("spectral_gram_drift", sp.gram_drift);
  h.report().parameters["gram_drift_abs"] = sp.gram_drift_abs;
  h.report().parameters["frame_scale"] = sp.frame_scale;

  // s, lambda and alpha need jets of order 4; alpha_z, for the closed form of Y only, needs 5.
  PolarOptions po, poc;
  po.analysis = options.analysis;
  po.analysis.residuals = false;
  poc = po;
  poc.analysis.order = std::min(po.analysis.order, 4);
  std::optional<PolarResult> p0, pc;
  if (!h.guarded("left polar of Y", [&] { p0 = polar(surface, PolarSide::left, po); }) ||
      !h.guarded("left polar of Y^c", [&] { pc = polar(sp.local, PolarSide::left, poc); }))
    return h.finish();

  const ChartAnalysis &a0 = p0->source, &ac = pc->source;
  const GridSpec& g = a0.grid;
  Grid<double> ds(g), dl(g), da(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const InvariantRecord &x = a0.inv[k], &y = ac.inv[k];
    ds[k] = std::abs(y.s - x.s - c);
    dl[k] = std::max(std::abs(y.lambda1 - x.lambda1), std::abs(y.lambda2 - x.lambda2));
    da[k] = std::abs(y.alpha - x.alpha);
  }
  h.add("schwarzian_shift", std::move(ds));
  h.add("hopf_shift", std::move(dl));
  h.add("connection_shift", std::move(da));
  if (c == 0.0) {
    Grid<double> id(g);
    for (int i = 0; i < g.nu; ++i)
      for (int j = 0; j < g.nv; ++j)
        id.at(i, j) = projective_distance(sp.frames.at(i, j).col(0), surface.node(i, j, 0).value());
    h.add("spectral_identity", std::move(id));
  }

  h.guarded("polar invariants", [&] {
    AnalysisOptions lo = poc.analysis;
    lo.gauge = GaugePolicy::lambda1_half;
    AnalysisOptions lo0 = p0->analysis_options(lo), loc = pc->analysis_options(lo);
    const ChartAnalysis l0 = analyze_chart(p0->surface, lo0), lc = analyze_chart(pc->surface, loc);
    const Grid<InvariantRecord>& cf = *p0->closed_form_invariants;
    Grid<double> ps(g, kNaN), ph(g, kNaN), pa(g, kNaN);
    std::size_t masked = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (p0->degenerate_mask[k] || pc->degenerate_mask[k]) {
        ++masked;
        continue;
      }
      const InvariantRecord &x = l0.inv[k], &y = lc.inv[k], &f = cf[k];
      ps[k] = std::abs(y.s - x.s - c);
      ph[k] = std::max({std::abs(x.lambda1 - f.lambda1), std::abs(x.lambda2 - f.lambda2),
                        std::abs(y.lambda1 - f.lambda1), std::abs(y.lambda2 - f.lambda2)});
      pa[k] = std::max(std::abs(x.alpha - a0.inv[k].alpha), std::abs(y.alpha - a0.inv[k].alpha));
    }
    if (masked > 0) h.note("polar comparison: " + std::to_string(masked) + " degenerate nodes masked");
    h.add("polar_schwarzian_shift", std::move(ps));
    h.add("polar_hopf", std::move(ph));
    h.add("polar_connection", std::move(pa));
  });
  return h.finish();
}

VerificationReport verify_darboux_commutes(const SurfaceChart& surface, double theta, const VerifyOptions& options) {
  Harness h("darboux-commutes", surface, options);
  auto& params = h.report().parameters;
  params["theta"] = theta;
  params["series_order"] = static_cast<long long>(options.darboux.series_order);
  params["base"] = std::to_string(options.darboux.base.i) + "," + std::to_string(options.darboux.base.j);
  params["singular_tol"] = options.singular_tol;
  params["init"] = std::string(options.darboux_init ? "custom" : "N(base)");

  DarbouxOptions dopt;
  dopt.integration = options.darboux;
  dopt.init = options.darboux_init;
  dopt.singular_tol = options.singular_tol;
  dopt.frame = options.analysis.frame;
  if (surface.kind() == ChartKind::sampled) dopt.integration.max_path_residual = std::numeric_limits<double>::infinity();
  DarbouxState d;
  if (!h.guarded("Darboux transform", [&] { d = darboux_transform(surface, theta, dopt); })) return h.finish();
  params["singular_nodes"] = static_cast<long long>(d.singular_count);
  for (const auto& w : d.warnings) h.note(w);
  h.add_scalar("darboux_nullity", d.nullity_drift);
  h.add_scalar("darboux_normalization", d.normalization_drift);
  h.add_scalar("darboux_path", d.path_residual);

  Grid<DarbouxFramePoint> frames;
  if (!h.guarded("pair frame", [&] { frames = darboux_frame(surface, d, options.analysis.frame); }))
    return h.finish();
  const GridSpec& g = surface.grid();
  Grid<double> st(g, kNaN), np(g, kNaN), sp(g, kNaN), en(g, kNaN), sg(g, kNaN), lp(g, kNaN), dt(g, kNaN);
  std::size_t lift_singular = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const DarbouxFramePoint& p = frames[k];
    if (p.pair_singular) continue;
    st[k] = *std::max_element(p.structure.begin(), p.structure.end());
    np[k] = *std::max_element(p.null_pair.begin(), p.null_pair.end());
    sp[k] = p.span_residual;
    en[k] = p.envelope_angle;
    sg[k] = p.sphere.signature() == std::pair{3, 1} ? 0.0 : 1.0;
    if (p.lift_singular) {
      ++lift_singular;
      continue;
    }
    lp[k] = p.lift_pairing;
    dt[k] = p.dtheta_residual;
  }
  params["lift_singular_nodes"] = static_cast<long long>(lift_singular);
  if (lift_singular > 0)
    h.note("lift_singularity: f2 vanishes at " + std::to_string(lift_singular) +
           " nodes; the lift of L* is undefined there and they are excluded");
  h.add("pair_structure", std::move(st));
  h.add("null_pair", std::move(np));
  h.add("span_condition", std::move(sp));
  h.add("envelope_angle", std::move(en));
  h.add("sphere_signature", std::move(sg));

  h.guarded("Y* analysis", [&] {
    const ChartAnalysis a = analyze_chart(d.surface, d.analysis_options(options.analysis));
    Grid<double> v(g, kNaN);
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!a.skipped[k] && !a.umbilic[k]) v[k] = reality(a.inv[k]);
    h.add("darboux_isothermic", std::move(v));
  });
  h.guarded("left polar of Y*", [&] {
    PolarOptions po;
    po.analysis = d.analysis_options(options.analysis);
    const PolarResult pl = polar(d.surface, PolarSide::left, po);
    params["polar_masked_nodes"] = static_cast<long long>(pl.degenerate_count);
    Grid<double> v(g, kNaN);
    parallel_for(g.size(), [&](std::size_t k) {
      if (pl.degenerate_mask[k]) return;
      const int i = static_cast<int>(k / g.nv), j = static_cast<int>(k % g.nv);
      v[k] = projective_distance(pl.surface.node(i, j, 0).value(), frames[k].Lstar);
    });
    h.add("lstar_agreement", std::move(v));
  });
  if (lift_singular == g.size()) {
    h.hypothesis("f2 vanishes at every node");
  } else {
    h.add("lift_pairing", std::move(lp));
    h.add("dtheta_relation", std::move(dt));
  }
  return h.finish();
}

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids{"polar-isothermic", "spectral-commutes", "darboux-commutes", "duality"};
  return ids;
}

VerificationReport run_verification(const std::string& id, const SurfaceChart& surface, double parameter,
                                    const VerifyOptions& options) {
  if (id == "polar-isothermic") return verify_polar_isothermic(surface, options);
  if (id == "spectral-commutes") return verify_spectral_commutes(surface, parameter, options);
  if (id == "darboux-commutes") return verify_darboux_commutes(surface, parameter, options);
  if (id == "duality") return verify_duality(surface, options);
  throw Error(ErrorKind::parameter, "unknown theorem id '" + id + "'");
}

// ---------------------------------------------------------------------------
// Serialization.

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", x);
  return buf;
}

void write_json(std::ostringstream& out, const json& j, int indent) {
  const std::string pad(indent + 2, ' '), close(indent, ' ');
  switch (j.type()) {
    case json::value_t::number_float: {
      const double x = j.get<double>();
      out << (std::isfinite(x) ? format_double(x) : "null");
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        out << pad;
        write_json(out, j[k], indent + 2);
        out << (k + 1 < j.size() ? ",\n" : "\n");
      }
      out << close << "]";
      return;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      std::size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        out << pad << json(it.key()).dump() << ": ";
        write_json(out, it.value(), indent + 2);
        out << (k + 1 < j.size() ? ",\n" : "\n");
      }
      out << close << "}";
      return;
    }
    default:
      out << j.dump();
  }
}

json to_json(const VerificationReport& r, bool reproducible) {
  json params = json::object();
  for (const auto& [k, v] : r.parameters) std::visit([&, &key = k](const auto& x) { params[key] = x; }, v);
  json checks = json::array();
  for (const auto& f : r.checks)
    checks.push_back({{"name", f.name},
                      {"max", f.max},
                      {"mean", f.mean},
                      {"l2", f.l2},
                      {"evaluated", f.evaluated},
                      {"tolerance", f.tolerance},
                      {"pass", f.pass}});
  return {{"schema_version", kReportSchemaVersion},
          {"theorem_id", r.theorem_id},
          {"surface", r.surface_id},
          {"parameters", params},
          {"checks", checks},
          {"notes", r.notes},
          {"hypothesis_failure", r.hypothesis_failure},
          {"verdict", r.passed() ? "pass" : "fail"},
          {"runtime_ms", reproducible ? 0LL : r.runtime_ms}};
}

std::string dump(const json& j) {
  std::ostringstream out;
  write_json(out, j, 0);
  out << "\n";
  return out.str();
}

}  // namespace

std::string report_json(const VerificationReport& report, bool reproducible) {
  return dump(to_json(report, reproducible));
}

std::string reports_json(const std::vector<VerificationReport>& reports, bool reproducible) {
  json list = json::array();
  bool pass = !reports.empty();
  for (const auto& r : reports) {
    list.push_back(to_json(r, reproducible));
    pass = pass && r.passed();
  }
  return dump({{"schema_version", kReportSchemaVersion}, {"reports", list}, {"verdict", pass ? "pass" : "fail"}});
}

std::string report_summary(const VerificationReport& r) {
  std::ostringstream out;
  out << r.theorem_id << " on " << r.surface_id << ": " << (r.passed() ? "PASS" : "FAIL");
  if (r.hypothesis_failure) out << " (hypothesis failure)";
  out << "\n";
  for (const auto& f : r.checks) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-4s %-24s max %.3e  mean %.3e  tol %.1e  (%zu nodes)\n",
                  f.pass ? "ok" : "FAIL", f.name.c_str(), f.max, f.mean, f.tolerance, f.evaluated);
    out << line;
  }
  for (const auto& n : r.notes) out << "  note: " << n << "\n";
  return out.str();
}

}  // namespace lorentz_iso
