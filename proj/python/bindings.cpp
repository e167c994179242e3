#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lorentz_iso/integrability.hpp"
#include "lorentz_iso/permutability.hpp"

namespace py = pybind11;
using namespace lorentz_iso;

namespace {

template <class E>
E choose(const std::string& text, std::initializer_list<std::pair<const char*, E>> options, const char* what) {
  for (const auto& [name, value] : options)
    if (text == name) return value;
  throw Error(ErrorKind::parameter, std::string("unknown ") + what + " '" + text + "'");
}

GaugePolicy gauge_of(const std::string& s) {
  return choose<GaugePolicy>(
      s, {{"lambda2_half", GaugePolicy::lambda2_half}, {"lambda1_half", GaugePolicy::lambda1_half}, {"raw", GaugePolicy::raw}},
      "gauge");
}

const char* kind_name(ChartKind k) {
  switch (k) {
    case ChartKind::analytic: return "analytic";
    case ChartKind::sampled: return "sampled";
    case ChartKind::derived: return "derived";
  }
  return "";
}

template <class T, class F>
py::array_t<T> grid_array(const GridSpec& g, F&& f) {
  py::array_t<T> out({g.nu, g.nv});
  auto a = out.template mutable_unchecked<2>();
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) a(i, j) = f(g.index(i, j));
  return out;
}

py::array_t<double> values_array(const Grid<Vec6>& v) {
  const GridSpec& g = v.spec();
  py::array_t<double> out({g.nu, g.nv, 6});
  auto a = out.mutable_unchecked<3>();
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j)
      for (int r = 0; r < 6; ++r) a(i, j, r) = v.at(i, j)(r);
  return out;
}

SurfaceChart from_samples(py::array_t<double, py::array::c_style | py::array::forcecast> values,
                          std::tuple<double, double, double, double> domain, std::pair<bool, bool> periodic,
                          int order) {
  if (values.ndim() != 3 || values.shape(2) != 6)
    throw Error(ErrorKind::dimension, "samples must have shape (nu, nv, 6)");
  GridSpec g;
  std::tie(g.u0, g.u1, g.v0, g.v1) = domain;
  g.nu = static_cast<int>(values.shape(0));
  g.nv = static_cast<int>(values.shape(1));
  std::tie(g.periodic_u, g.periodic_v) = periodic;
  g.validate();
  Grid<Vec6> grid(g);
  auto a = values.unchecked<3>();
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j)
      for (int r = 0; r < 6; ++r) grid.at(i, j)(r) = a(i, j, r);
  return jets_from_samples(grid, order);
}

py::dict analysis_dict(const ChartAnalysis& a) {
  const GridSpec& g = a.grid;
  auto field = [&](cplx InvariantRecord::*m) { return grid_array<cplx>(g, [&](std::size_t k) { return a.inv[k].*m; }); };
  py::dict d;
  d["s"] = field(&InvariantRecord::s);
  d["lambda1"] = field(&InvariantRecord::lambda1);
  d["lambda2"] = field(&InvariantRecord::lambda2);
  d["alpha"] = field(&InvariantRecord::alpha);
  d["beta"] = grid_array<double>(g, [&](std::size_t k) { return a.inv[k].beta; });
  d["umbilic"] = grid_array<bool>(g, [&](std::size_t k) { return a.umbilic[k] != 0; });
  d["max_conformality"] = a.max_conformality;
  d["max_gram"] = a.max_gram;
  return d;
}

py::dict maxima(const std::vector<ResidualField>& fs) {
  py::dict d;
  for (const auto& f : fs) d[py::str(f.name)] = f.max;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Isothermic surfaces in the conformal 4-sphere of signature (3,1)";

  static py::handle error_type =
      py::handle(PyErr_NewException("lorentz_iso._core.Error", PyExc_RuntimeError, nullptr)).inc_ref();
  m.attr("Error") = error_type;
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
      inst.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type.ptr(), inst.ptr());
    }
  });

  py::class_<SurfaceChart>(m, "Chart")
      .def_property_readonly("name", &SurfaceChart::name)
      .def_property_readonly("kind", [](const SurfaceChart& c) { return kind_name(c.kind()); })
      .def_property_readonly("max_order", &SurfaceChart::max_order)
      .def_property_readonly("shape", [](const SurfaceChart& c) { return std::make_pair(c.grid().nu, c.grid().nv); })
      .def_property_readonly("domain",
                             [](const SurfaceChart& c) {
                               const GridSpec& g = c.grid();
                               return std::make_tuple(g.u0, g.u1, g.v0, g.v1);
                             })
      .def_property_readonly(
          "periodic", [](const SurfaceChart& c) { return std::make_pair(c.grid().periodic_u, c.grid().periodic_v); })
      .def("values", [](const SurfaceChart& c) { return values_array(sample_values(c)); },
           "Node values as an (nu, nv, 6) array.")
      .def("rotated", &SurfaceChart::rotated, py::arg("angle"))
      .def("__repr__", [](const SurfaceChart& c) {
        return "<Chart " + c.name() + " " + std::to_string(c.grid().nu) + "x" + std::to_string(c.grid().nv) + ">";
      });

  m.def(
      "torus",
      [](double t, const std::string& coords, int nu, int nv) {
        return homogeneous_torus(
            t, choose<TorusCoordinates>(coords, {{"adapted", TorusCoordinates::adapted}, {"angular", TorusCoordinates::angular}},
                                        "torus coordinates"),
            nu, nv);
      },
      py::arg("t") = 2.0, py::arg("coords") = "adapted", py::arg("nu") = 64, py::arg("nv") = 64);
  m.def(
      "rotational",
      [](std::vector<double> f, std::vector<double> g, std::vector<double> h, double u0, double u1, int nu, int nv) {
        return rotational_surface(ProfileCurve::polynomial(std::move(f), std::move(g), std::move(h)), u0, u1, nu, nv);
      },
      py::arg("f") = std::vector<double>{0, 1}, py::arg("g") = std::vector<double>{0, 0, 0.5},
      py::arg("h") = std::vector<double>{0}, py::arg("u0") = 1.0, py::arg("u1") = 2.0, py::arg("nu") = 64,
      py::arg("nv") = 64, "Surface of revolution of the polynomial profile (f, g, h)(u), coefficients low to high.");
  m.def("null_graph", &null_graph_surface, py::arg("nu") = 32, py::arg("nv") = 32);
  m.def("from_samples", &from_samples, py::arg("values"), py::arg("domain"),
        py::arg("periodic") = std::make_pair(false, false), py::arg("order") = kDefaultJetOrder);
  m.def(
      "load_csv",
      [](const std::string& path, bool periodic_u, bool periodic_v, int order) {
        CsvChartOptions o;
        o.periodic_u = periodic_u;
        o.periodic_v = periodic_v;
        o.order = order;
        return load_chart_csv(path, o);
      },
      py::arg("path"), py::arg("periodic_u") = false, py::arg("periodic_v") = false,
      py::arg("order") = kDefaultJetOrder);

  m.def(
      "analyze",
      [](const SurfaceChart& c, const std::string& gauge) {
        AnalysisOptions o;
        o.gauge = gauge_of(gauge);
        return analysis_dict(analyze_chart(c, o));
      },
      py::arg("chart"), py::arg("gauge") = "lambda2_half",
      "Invariants s, lambda1, lambda2, alpha, beta and the umbilic mask per node.");
  m.def(
      "structure_residuals",
      [](const SurfaceChart& c, const std::string& route) {
        const auto r = choose<DerivativeRoute>(
            route, {{"jets", DerivativeRoute::jets}, {"grid_differences", DerivativeRoute::grid_differences}},
            "derivative route");
        return maxima(structure_residuals(analyze_chart(c), 1e-8, r));
      },
      py::arg("chart"), py::arg("route") = "jets");
  m.def("integrability_residuals", [](const SurfaceChart& c) { return maxima(integrability_residuals(analyze_chart(c))); },
        py::arg("chart"));
  m.def(
      "isothermic_check",
      [](const SurfaceChart& c, double tolerance) {
        const IsothermicCertificate cert = isothermic_check(analyze_chart(c), tolerance);
        py::dict d;
        d["is_isothermic"] = cert.is_isothermic;
        d["max_im_kappa"] = cert.max_im_kappa;
        d["evaluated"] = cert.evaluated;
        d["umbilics"] = cert.umbilic_points.size();
        return d;
      },
      py::arg("chart"), py::arg("tolerance") = 1e-6);

  m.def(
      "polar",
      [](const SurfaceChart& c, const std::string& side) {
        return polar_chart(c, choose<PolarSide>(side, {{"left", PolarSide::left}, {"right", PolarSide::right}}, "side"));
      },
      py::arg("chart"), py::arg("side") = "left");
  m.def("two_step_polar", [](const SurfaceChart& c) { return two_step_polar(c); }, py::arg("chart"));
  m.def(
      "spectral",
      [](const SurfaceChart& c, double cval, bool repair_gram) {
        SpectralOptions o;
        o.integration.repair_gram = repair_gram;
        SpectralResult r = spectral_transform(c, cval, o);
        py::dict d;
        d["surface"] = r.surface;
        d["local"] = r.local;
        d["path_residual"] = r.path_residual;
        d["gram_drift"] = r.gram_drift;
        d["gram_drift_abs"] = r.gram_drift_abs;
        d["frame_scale"] = r.frame_scale;
        return d;
      },
      py::arg("chart"), py::arg("c"), py::arg("repair_gram") = false);
  m.def(
      "darboux",
      [](const SurfaceChart& c, double theta, double singular_tol) {
        DarbouxOptions o;
        o.singular_tol = singular_tol;
        DarbouxState s = darboux_transform(c, theta, o);
        py::dict d;
        d["surface"] = s.surface;
        d["ystar"] = values_array(s.Ystar);
        d["singular"] = grid_array<bool>(s.singular_mask.spec(), [&](std::size_t k) { return s.singular_mask[k] != 0; });
        d["singular_count"] = s.singular_count;
        d["path_residual"] = s.path_residual;
        d["nullity_drift"] = s.nullity_drift;
        d["normalization_drift"] = s.normalization_drift;
        return d;
      },
      py::arg("chart"), py::arg("theta"), py::arg("singular_tol") = 2e-2);

  m.def("theorem_ids", &theorem_ids);
  m.def(
      "verify_json",
      [](const std::string& theorem, const SurfaceChart& c, double parameter, std::map<std::string, double> tolerances,
         bool reproducible) {
        VerifyOptions o;
        o.tolerances = std::move(tolerances);
        return report_json(run_verification(theorem, c, parameter, o), reproducible);
      },
      py::arg("theorem"), py::arg("chart"), py::arg("parameter") = 1.0,
      py::arg("tolerances") = std::map<std::string, double>{}, py::arg("reproducible") = false,
      "Runs one verification and returns its report as JSON text.");
}
