#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lorentz_iso/integrability.hpp"

namespace lorentz_iso::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double x = std::stod(text, &used);
    if (used == text.size()) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::input, "bad number '" + text + "' for " + what);
}

/// "key=value" with the expected key, or a bare value.
double keyed_value(const std::string& text, const std::string& key) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) return parse_double(text, key);
  if (text.substr(0, eq) != key) throw Error(ErrorKind::input, "expected " + key + "=<value>, got '" + text + "'");
  return parse_double(text.substr(eq + 1), key);
}

std::vector<double> coefficient_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& c : split(text, '/')) out.push_back(parse_double(c, what));
  if (out.empty()) throw Error(ErrorKind::input, "empty coefficient list for " + what);
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void write_invariants_csv(const fs::path& path, const ChartAnalysis& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::input, "cannot write " + path.string());
  out << "u,v,s_re,s_im,lambda1_re,lambda1_im,lambda2_re,lambda2_im,alpha_re,alpha_im,beta,umbilic,skipped\n";
  const GridSpec& g = a.grid;
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) {
      const InvariantRecord& r = a.inv.at(i, j);
      out << fmt(g.u(i)) << ',' << fmt(g.v(j));
      for (cplx c : {r.s, r.lambda1, r.lambda2, r.alpha}) out << ',' << fmt(c.real()) << ',' << fmt(c.imag());
      out << ',' << fmt(r.beta) << ',' << int(a.umbilic.at(i, j)) << ',' << int(a.skipped.at(i, j)) << '\n';
    }
}

/// Node values of a chart; nodes where evaluation hits a hypothesis failure are NaN.
Grid<Vec6> node_values(const SurfaceChart& chart, std::size_t& failed) {
  const GridSpec& g = chart.grid();
  Grid<Vec6> out(g, Vec6::Constant(kNaN));
  Grid<char> bad(g, 0);
  parallel_for(g.size(), [&](std::size_t k) {
    try {
      out[k] = chart.node(static_cast<int>(k / g.nv), static_cast<int>(k % g.nv), 0).value();
    } catch (const Error& e) {
      if (!is_hypothesis_failure(e.kind())) throw;
      bad[k] = 1;
    }
  });
  failed = std::count(bad.begin(), bad.end(), char(1));
  return out;
}

Grid<double> nullity_column(const Grid<Vec6>& values) {
  Grid<double> out(values.spec());
  for (std::size_t k = 0; k < values.size(); ++k) out[k] = std::abs(inner(values[k], values[k]));
  return out;
}

Grid<double> mask_column(const Grid<char>& mask) {
  Grid<double> out(mask.spec());
  for (std::size_t k = 0; k < mask.size(); ++k) out[k] = mask[k];
  return out;
}

double finite_max(const Grid<double>& g) {
  double m = 0.0;
  for (double x : g)
    if (std::isfinite(x)) m = std::max(m, x);
  return m;
}

AnalysisOptions analysis_options(const RunConfig& c) {
  AnalysisOptions o;
  o.gauge = c.gauge;
  return o;
}

int frame_command(const RunConfig& c, const SurfaceChart& chart, std::ostream& out) {
  const ChartAnalysis a = analyze_chart(chart, analysis_options(c));
  write_invariants_csv(fs::path(c.output) / "invariants.csv", a);
  std::ostringstream s;
  s << "surface " << chart.name() << " on " << a.grid.nu << "x" << a.grid.nv << "\n";
  s << "  max conformality " << fmt_short(a.max_conformality) << ", max Gram " << fmt_short(a.max_gram) << "\n";
  for (const auto& f : structure_residuals(a)) s << "  structure " << f.name << " max " << fmt_short(f.max) << "\n";
  for (const auto& f : integrability_residuals(a))
    s << "  integrability " << f.name << " max " << fmt_short(f.max) << "\n";
  const IsothermicCertificate iso = isothermic_check(a, 1e-6);
  s << "  isothermic in this coordinate: " << (iso.is_isothermic ? "yes" : "no") << " (max relative Im kappa "
    << fmt_short(iso.max_im_kappa) << ", " << iso.umbilic_points.size() << " umbilic nodes)\n";
  out << s.str();
  std::ofstream(fs::path(c.output) / "summary.txt", std::ios::binary) << s.str();
  return kPass;
}

int transform_command(const RunConfig& c, const SurfaceChart& chart, std::ostream& out) {
  const int count = (c.polar ? 1 : 0) + (c.two_step ? 1 : 0) + static_cast<int>(c.spectral_c.size()) +
                    static_cast<int>(c.darboux_theta.size());
  if (count != 1)
    throw Error(ErrorKind::input, "transform needs exactly one of --polar, --two-step, --spectral, --darboux");
  const fs::path dir(c.output);
  AnalysisOptions ao = analysis_options(c);
  write_invariants_csv(dir / "invariants.csv", analyze_chart(chart, ao));

  std::string name;
  Grid<Vec6> values;
  std::vector<std::string> extra_names;
  std::vector<Grid<double>> extra;
  std::optional<SurfaceChart> result;
  std::size_t failed = 0;

  if (c.polar) {
    PolarOptions po;
    po.analysis = ao;
    const PolarResult p = polar(chart, *c.polar, po);
    name = "polar_" + std::string(to_string(*c.polar));
    values = node_values(p.surface, failed);
    extra_names = {"degenerate"};
    extra = {mask_column(p.degenerate_mask)};
    ao = p.analysis_options(ao);
    result = p.surface;
    out << name << ": " << p.degenerate_count << " degenerate nodes\n";
  } else if (c.two_step) {
    name = "two_step";
    result = two_step_polar(chart, ao.frame);
    values = node_values(*result, failed);
  } else if (!c.spectral_c.empty()) {
    SpectralOptions so;
    so.frame = ao.frame;
    const SpectralResult sp = spectral_transform(chart, c.spectral_c[0], so);
    name = "spectral";
    values = node_values(sp.surface, failed);
    result = sp.local;
    out << "spectral c=" << c.spectral_c[0] << ": path residual " << fmt_short(sp.path_residual) << ", Gram drift "
        << fmt_short(sp.gram_drift) << "\n";
  } else {
    DarbouxOptions dopt;
    dopt.init = c.darboux_init;
    dopt.frame = ao.frame;
    const DarbouxState d = darboux_transform(chart, c.darboux_theta[0], dopt);
    name = "darboux";
    values = d.Ystar;
    extra_names = {"pairing", "singular"};
    extra = {d.pairing, mask_column(d.singular_mask)};
    ao = d.analysis_options(ao);
    result = d.surface;
    out << "darboux theta=" << d.theta << ": nullity drift " << fmt_short(d.nullity_drift) << ", path residual "
        << fmt_short(d.path_residual) << ", " << d.singular_count << " singular nodes\n";
    for (const auto& w : d.warnings) out << "  warning: " << w << "\n";
  }
  Grid<double> nullity = nullity_column(values);
  out << name << ": max |<Y,Y>| " << fmt_short(finite_max(nullity)) << "\n";
  extra_names.insert(extra_names.begin(), "nullity");
  extra.insert(extra.begin(), std::move(nullity));
  write_chart_csv((dir / (name + ".csv")).string(), values, extra_names, extra);
  if (failed > 0) out << name << ": " << failed << " nodes could not be evaluated (NaN)\n";
  try {
    write_invariants_csv(dir / (name + "_invariants.csv"), analyze_chart(*result, ao));
  } catch (const Error& e) {
    if (!is_hypothesis_failure(e.kind())) throw;
    out << name << ": invariants not written (" << e.what() << ")\n";
  }
  return kPass;
}

int verify_command(const RunConfig& c, const SurfaceChart& chart, std::ostream& out) {
  if (c.theorems.empty()) throw Error(ErrorKind::input, "verify needs at least one --theorem");
  std::vector<std::string> ids;
  for (const auto& t : c.theorems) {
    if (t == "all") {
      ids.insert(ids.end(), theorem_ids().begin(), theorem_ids().end());
    } else if (std::find(theorem_ids().begin(), theorem_ids().end(), t) == theorem_ids().end()) {
      throw Error(ErrorKind::input, "unknown theorem '" + t + "'");
    } else {
      ids.push_back(t);
    }
  }
  VerifyOptions vo;
  vo.tolerances = c.tolerances;
  vo.darboux_init = c.darboux_init;
  for (const auto& [name, tol] : c.tolerances) check_tolerance(vo, chart, name);
  const std::vector<double> cs = c.spectral_c.empty() ? std::vector<double>{1.0} : c.spectral_c;
  const std::vector<double> thetas = c.darboux_theta.empty() ? std::vector<double>{1.0} : c.darboux_theta;

  std::vector<VerificationReport> reports;
  for (const auto& id : ids) {
    const std::vector<double> params = id == "spectral-commutes"  ? cs
                                       : id == "darboux-commutes" ? thetas
                                                                  : std::vector<double>{0.0};
    for (double p : params) reports.push_back(run_verification(id, chart, p, vo));
  }
  const fs::path dir(c.output);
  std::ofstream(dir / "report.json", std::ios::binary)
      << (reports.size() == 1 ? report_json(reports[0], c.reproducible) : reports_json(reports, c.reproducible));
  std::string summary;
  for (const auto& r : reports) summary += report_summary(r);
  std::ofstream(dir / "summary.txt", std::ios::binary) << summary;
  out << summary;

  bool hypothesis = false, pass = true;
  for (const auto& r : reports) {
    hypothesis = hypothesis || r.hypothesis_failure;
    pass = pass && r.passed();
  }
  return hypothesis ? kHypothesisFailure : pass ? kPass : kCheckFailure;
}

void examples_command(std::ostream& out) {
  out << "torus:t=<t>[,coords=adapted|angular]\n"
         "    homogeneous spacelike torus, t^2 > 1; adapted coordinates are isothermic.\n"
         "    Rational t = p/q closes up on [0, 2 pi sqrt(t^2-1) q) x [0, 2 pi). Default t=2.\n"
         "rotational[:f=<c0/c1/...>,g=<...>,h=<...>,u0=<a>,u1=<b>]\n"
         "    surface of revolution of the polynomial profile (0, f, g, h) in R^4_1, h timelike;\n"
         "    needs f > 0 and f'^2 + g'^2 - h'^2 > 0 on [u0, u1]. Default f=0/1, g=0/0/0.5, h=0, u in [1, 2].\n"
         "null-graph\n"
         "    graph (u, v, phi, phi) with phi = (u^2 - v^2)/2: one Hopf component vanishes, both\n"
         "    polars degenerate. Negative control.\n"
         "csv:<path>\n"
         "    sampled chart, header u,v,x1,...,x6, v varying fastest, rows null in R^6_2.\n"
         "    Use --periodic-u/--periodic-v for closed directions.\n"
         "grid: --grid NUxNV with NU, NV >= 8 (builtins only; default 64x64).\n"
         "theorems: ";
  for (const auto& id : theorem_ids()) out << id << " ";
  out << "all\n";
}

}  // namespace

SurfaceSpec parse_surface_spec(const std::string& text) {
  SurfaceSpec s;
  const auto colon = text.find(':');
  s.kind = text.substr(0, colon);
  if (colon == std::string::npos) return s;
  const std::string rest = text.substr(colon + 1);
  if (s.kind == "csv") {
    if (rest.empty()) throw Error(ErrorKind::input, "csv surface needs a path");
    s.path = rest;
    return s;
  }
  for (const auto& kv : split(rest, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::input, "expected key=value in '" + kv + "'");
    s.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return s;
}

SurfaceChart build_surface(const RunConfig& c) {
  const SurfaceSpec& s = c.surface;
  const auto [nu, nv] = c.grid.value_or(std::pair{64, 64});
  if (nu < 8 || nv < 8) throw Error(ErrorKind::input, "grid must be at least 8x8");
  auto take = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : s.params)
      if (std::none_of(allowed.begin(), allowed.end(), [&, &key = k](const char* a) { return key == a; }))
        throw Error(ErrorKind::input, "unknown parameter '" + k + "' for " + s.kind);
  };
  auto param = [&](const std::string& k, const std::string& fallback) {
    const auto it = s.params.find(k);
    return it == s.params.end() ? fallback : it->second;
  };

  if (s.kind == "torus") {
    take({"t", "coords"});
    const double t = parse_double(param("t", "2"), "t");
    const std::string coords = param("coords", "adapted");
    if (coords != "adapted" && coords != "angular") throw Error(ErrorKind::input, "coords must be adapted or angular");
    if (!(t * t > 1.0)) throw Error(ErrorKind::input, "torus needs t^2 > 1");
    return homogeneous_torus(t, coords == "adapted" ? TorusCoordinates::adapted : TorusCoordinates::angular, nu, nv);
  }
  if (s.kind == "rotational") {
    take({"f", "g", "h", "u0", "u1"});
    const ProfileCurve profile = ProfileCurve::polynomial(
        coefficient_list(param("f", "0/1"), "f"), coefficient_list(param("g", "0/0/0.5"), "g"),
        coefficient_list(param("h", "0"), "h"));
    const double u0 = parse_double(param("u0", "1"), "u0"), u1 = parse_double(param("u1", "2"), "u1");
    if (!(u1 > u0)) throw Error(ErrorKind::input, "rotational needs u0 < u1");
    return rotational_surface(profile, u0, u1, nu, nv);
  }
  if (s.kind == "null-graph") {
    take({});
    return null_graph_surface(nu, nv);
  }
  if (s.kind == "csv") {
    if (c.grid) throw Error(ErrorKind::input, "--grid does not apply to csv input; the file fixes the grid");
    CsvChartOptions o;
    o.periodic_u = c.periodic_u;
    o.periodic_v = c.periodic_v;
    // Transforms differentiate the source five orders past the frame.
    o.order = c.command == "frame" ? kDefaultJetOrder : 10;
    return load_chart_csv(s.path, o);
  }
  throw Error(ErrorKind::input, "unknown surface '" + s.kind + "' (see the examples subcommand)");
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "examples") {
      examples_command(out);
      return kPass;
    }
    const SurfaceChart chart = build_surface(c);
    fs::create_directories(c.output);
    if (c.command == "frame") return frame_command(c, chart, out);
    if (c.command == "transform") return transform_command(c, chart, out);
    if (c.command == "verify") return verify_command(c, chart, out);
    throw Error(ErrorKind::input, "unknown command '" + c.command + "'");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_hypothesis_failure(e.kind()) ? kHypothesisFailure : kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polar, spectral and Darboux transforms of spacelike isothermic surfaces in R^4_1"};
  app.set_config("--config", "", "INI file of option=value lines; flags given on the command line override it");
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string surface = "torus:t=2", grid, gauge = "lambda2", polar, init, output = ".";
  std::vector<std::string> tols, spectral, darboux, theorems;
  RunConfig c;
  app.add_option("--surface", surface, "torus:t=2 | rotational[:...] | null-graph | csv:path")->capture_default_str();
  app.add_option("--grid", grid, "NUxNV, builtins only (default 64x64)");
  app.add_option("--gauge", gauge, "lambda2 | lambda1 | raw, for written invariants")->capture_default_str();
  app.add_option("--tol", tols, "check=value tolerance override, repeatable");
  app.add_option("--polar", polar, "left | right");
  app.add_flag("--two-step", c.two_step, "two-step polar Yhat");
  app.add_option("--spectral", spectral, "c=<value>, repeatable for verify");
  app.add_option("--darboux", darboux, "theta=<value>, repeatable for verify");
  app.add_option("--darboux-init", init, "x1,...,x6: null vector at the base with <Y, init> = -1");
  app.add_option("--theorem", theorems, "polar-isothermic | spectral-commutes | darboux-commutes | duality | all");
  app.add_flag("--periodic-u", c.periodic_u, "csv input is periodic in u");
  app.add_flag("--periodic-v", c.periodic_v, "csv input is periodic in v");
  app.add_option("--out", output, "output directory")->capture_default_str();
  app.add_flag("--reproducible", c.reproducible, "write runtime_ms as 0 so reruns are byte-identical");
  for (const char* name : {"frame", "transform", "verify", "examples"}) app.add_subcommand(name);
  app.get_subcommand("frame")->description("frames and invariants: invariants.csv, summary.txt");
  app.get_subcommand("transform")->description("one transform: <name>.csv and <name>_invariants.csv");
  app.get_subcommand("verify")->description("theorem checks: report.json, summary.txt");
  app.get_subcommand("examples")->description("list builtin surfaces and parameter ranges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInputError;
  }

  try {
    c.command = app.get_subcommands().front()->get_name();
    c.surface = parse_surface_spec(surface);
    c.output = output;
    if (!grid.empty()) {
      const auto x = grid.find('x');
      if (x == std::string::npos) throw Error(ErrorKind::input, "grid must look like 64x64");
      c.grid = {static_cast<int>(parse_double(grid.substr(0, x), "grid")),
                static_cast<int>(parse_double(grid.substr(x + 1), "grid"))};
    }
    if (gauge == "lambda2")
      c.gauge = GaugePolicy::lambda2_half;
    else if (gauge == "lambda1")
      c.gauge = GaugePolicy::lambda1_half;
    else if (gauge == "raw")
      c.gauge = GaugePolicy::raw;
    else
      throw Error(ErrorKind::input, "gauge must be lambda2, lambda1 or raw");
    for (const auto& t : tols) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::input, "--tol expects check=value");
      const double v = parse_double(t.substr(eq + 1), t.substr(0, eq));
      if (!(v > 0.0)) throw Error(ErrorKind::input, "tolerance of " + t.substr(0, eq) + " must be positive");
      c.tolerances[t.substr(0, eq)] = v;
    }
    if (!polar.empty()) {
      if (polar != "left" && polar != "right") throw Error(ErrorKind::input, "--polar must be left or right");
      c.polar = polar == "left" ? PolarSide::left : PolarSide::right;
    }
    for (const auto& s : spectral) c.spectral_c.push_back(keyed_value(s, "c"));
    for (const auto& d : darboux) c.darboux_theta.push_back(keyed_value(d, "theta"));
    if (!init.empty()) {
      const auto parts = split(init, ',');
      if (parts.size() != 6) throw Error(ErrorKind::input, "--darboux-init needs six components");
      Vec6 v;
      for (int k = 0; k < 6; ++k) v[k] = parse_double(parts[k], "darboux-init");
      c.darboux_init = v;
    }
    c.theorems = theorems;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return run(c, out, err);
}

}  // namespace lorentz_iso::cli
