#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "hmh/harness.hpp"
#include "hmh/rng.hpp"

namespace py = pybind11;
using namespace hmh;

namespace {

py::object to_python(const std::string& text) {
  return py::module_::import("json").attr("loads")(text);
}

RunConfig config_from(const std::optional<py::dict>& cfg) {
  if (!cfg) return load_default_config();
  const std::string text = py::str(py::module_::import("json").attr("dumps")(*cfg));
  auto c = RunConfig::from_json(nlohmann::json::parse(text));
  c.validate();
  return c;
}

using Term = std::tuple<std::vector<int>, std::vector<int>, std::vector<int>, cplx>;

TwistedSlice make_slice(double lambda, int n, int d, const std::vector<Term>& terms) {
  CoefficientMap m;
  for (const auto& [a, b, k, c] : terms) m[{MultiIndex(a), MultiIndex(b), k}] += c;
  return TwistedSlice(TwistedParameter(lambda), n, d, std::move(m));
}

std::vector<Term> slice_terms(const TwistedSlice& s) {
  std::vector<Term> out;
  for (const auto& [k, c] : s.coefficients())
    out.emplace_back(k.alpha.entries(), k.beta.entries(), k.mK, c);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Harmonic analysis on the Heisenberg motion group";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_RuntimeError);

  m.def("hermite_function", [](int k, cplx x) { return hermite_function(k, x); }, py::arg("k"),
        py::arg("x"));
  m.def("laguerre", &laguerre, py::arg("m"), py::arg("alpha"), py::arg("x"));
  m.def(
      "special_hermite",
      [](std::vector<int> alpha, std::vector<int> beta, double lambda, std::vector<cplx> z,
         std::vector<cplx> w) {
        if (alpha.size() != z.size() || beta.size() != z.size() || w.size() != z.size())
          throw std::invalid_argument("special_hermite: dimension mismatch");
        int M = 0;
        for (int v : alpha) M = std::max(M, v);
        for (int v : beta) M = std::max(M, v);
        return SpecialHermiteTable(TwistedParameter(lambda), z, w, M)
            .value(MultiIndex(alpha), MultiIndex(beta));
      },
      py::arg("alpha"), py::arg("beta"), py::arg("lam"), py::arg("z"), py::arg("w"));
  m.def(
      "laguerre_function",
      [](int mm, double lambda, std::vector<double> x, std::vector<double> u) {
        return laguerre_function(mm, TwistedParameter(lambda), x, u);
      },
      py::arg("m"), py::arg("lam"), py::arg("x"), py::arg("u"));
  m.def(
      "heat_kernel_twisted",
      [](double t, double lambda, std::vector<cplx> x, std::vector<cplx> u) {
        return heat_kernel_twisted(t, TwistedParameter(lambda), x, u);
      },
      py::arg("t"), py::arg("lam"), py::arg("x"), py::arg("u"));
  m.def(
      "heat_kernel_K",
      [](double t, std::vector<double> theta, std::vector<double> H) {
        return heat_kernel_K(t, TorusElement{std::move(theta)}, H);
      },
      py::arg("t"), py::arg("theta"), py::arg("H") = std::vector<double>{});
  m.def("twisted_convolution_constant", &twisted_convolution_constant, py::arg("lam"), py::arg("n"));
  m.def("plancherel_constant", &plancherel_constant, py::arg("n"));

  py::class_<TwistedSlice>(m, "TwistedSlice")
      .def(py::init(&make_slice), py::arg("lam"), py::arg("n"), py::arg("d"), py::arg("terms"),
           "terms: list of (alpha, beta, k_weight, coefficient)")
      .def_property_readonly("lam", [](const TwistedSlice& s) { return s.lambda().value(); })
      .def_property_readonly("n", &TwistedSlice::n)
      .def_property_readonly("d", &TwistedSlice::d)
      .def("terms", &slice_terms)
      .def("norm_squared", &TwistedSlice::norm_squared)
      .def(
          "evaluate",
          [](const TwistedSlice& s, std::vector<cplx> z, std::vector<cplx> w,
             std::vector<cplx> angles) { return s.evaluate(z, w, angles); },
          py::arg("z"), py::arg("w"), py::arg("angles") = std::vector<cplx>{})
      .def("heat", &heat_multiplier_apply, py::arg("t"))
      .def("l2_quadrature", &slice_l2_quadrature, py::arg("nodes") = 48)
      .def(
          "gutzmer_rhs",
          [](const TwistedSlice& s, std::vector<double> y, std::vector<double> v) {
            return gutzmer_rhs(s, y, v);
          },
          py::arg("y"), py::arg("v"))
      .def(
          "bergman_norm",
          [](const TwistedSlice& s, double t, int nodes_2n, int nodes_G) {
            return bergman_norm(s, t, cached_gauss_hermite(nodes_2n), cached_gauss_hermite(nodes_G));
          },
          py::arg("t"), py::arg("nodes_2n") = 16, py::arg("nodes_G") = 40);

  py::class_<SplitMix64>(m, "SplitMix64")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next", &SplitMix64::next)
      .def("uniform", py::overload_cast<>(&SplitMix64::uniform))
      .def("normal", &SplitMix64::normal);

  m.def("default_config", [] { return to_python(RunConfig{}.to_json().dump()); });
  m.def(
      "verify",
      [](const std::string& suite, std::optional<py::dict> config, bool timings) {
        const RunConfig c = config_from(config);
        const Suite s = parse_suite(suite);
        SuiteResult r;
        {
          py::gil_scoped_release release;
          r = run_suite(c, s);
        }
        return to_python(r.to_json(timings).dump());
      },
      py::arg("suite"), py::arg("config") = py::none(), py::arg("timings") = false);
  m.def("library_constants", &library_constants);
  m.def(
      "dump",
      [](const std::string& object, std::optional<py::dict> config, int grid, double extent,
         double lambda, int alpha, int beta, double t) {
        DumpOptions o{object, grid, extent, lambda, alpha, beta, t};
        std::ostringstream out;
        dump_csv(config_from(config), o, out);
        return out.str();
      },
      py::arg("object"), py::arg("config") = py::none(), py::arg("grid") = 41,
      py::arg("extent") = 4.0, py::arg("lam") = 1.0, py::arg("alpha") = 0, py::arg("beta") = 0,
      py::arg("t") = 0.5);
}
