#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "fracdim/boxdim.hpp"
#include "fracdim/error.hpp"
#include "fracdim/experiment.hpp"
#include "fracdim/frac_integral.hpp"
#include "fracdim/oracle.hpp"
#include "fracdim/special.hpp"
#include "fracdim/surfaces.hpp"

namespace py = pybind11;
using namespace fracdim;

namespace {

using release = py::call_guard<py::gil_scoped_release>;

// Holds a Python callable so that C++ copies never touch its refcount;
// the GIL is taken for calls and for the final release.
std::shared_ptr<py::function> hold(py::function fn) {
  return std::shared_ptr<py::function>(new py::function(std::move(fn)), [](py::function* p) {
    py::gil_scoped_acquire gil;
    delete p;
  });
}

Surface surface_from_callable(py::function fn, const Rect& rect, const std::string& label) {
  auto held = hold(std::move(fn));
  return Surface(rect, label, [held](double x, double y) {
    py::gil_scoped_acquire gil;
    return (*held)(x, y).cast<double>();
  });
}

std::function<double(double)> univariate(py::function fn) {
  auto held = hold(std::move(fn));
  return [held](double x) {
    py::gil_scoped_acquire gil;
    return (*held)(x).cast<double>();
  };
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<double> grid_array(const SampledSurface& s) {
  const auto side = static_cast<py::ssize_t>(s.points_per_side());
  py::array_t<double> out({side, side});
  std::copy(s.values.begin(), s.values.end(), out.mutable_data());
  return out;
}

SampledSurface sampled_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> values,
                                  const Rect& rect, std::size_t n, std::size_t oversample, std::string label) {
  const std::size_t side = n * oversample + 1;
  if (values.ndim() != 2 || static_cast<std::size_t>(values.shape(0)) != side ||
      static_cast<std::size_t>(values.shape(1)) != side) {
    throw InvalidArgument("values must have shape (n*oversample+1, n*oversample+1)");
  }
  SampledSurface s;
  s.rect = rect;
  s.n = n;
  s.oversample = oversample;
  s.label = std::move(label);
  s.values.assign(values.data(), values.data() + values.size());
  return s;
}

OperatorSpec make_operator(const std::string& kind, std::pair<double, double> order, std::pair<double, double> rho,
                           std::pair<double, double> lower, int rule_n) {
  OperatorSpec spec;
  if (kind == "katugampola") {
    spec.kind = OperatorKind::Katugampola;
  } else if (kind == "hadamard") {
    spec.kind = OperatorKind::Hadamard;
  } else {
    throw InvalidArgument("kind must be 'katugampola' or 'hadamard'");
  }
  spec.order = {order.first, order.second};
  spec.params = {rho.first, rho.second, lower.first, lower.second};
  spec.rule_n = rule_n;
  spec.validate();
  return spec;
}

py::dict curve_dict(const BoxCountCurve& c) {
  py::dict d;
  d["levels"] = c.levels;
  d["counts"] = c.counts;
  std::vector<double> deltas;
  for (std::size_t i = 0; i < c.levels.size(); ++i) deltas.push_back(c.delta(i));
  d["delta"] = deltas;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fracdim, m) {
  m.doc() = "Fractional integrals of bivariate functions and box dimension of their graphs";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  m.def("gamma", &fracdim::gamma, py::arg("x"));
  m.def(
      "jacobi_rule",
      [](double alpha, int n) {
        const QuadratureRule r = jacobi_rule(alpha, n);
        return py::make_tuple(to_array(r.nodes), to_array(r.weights));
      },
      py::arg("alpha"), py::arg("n"), "Nodes and weights for int_0^1 (1-u)^(alpha-1) g(u) du.");
  m.def(
      "kernel_rule",
      [](double alpha, int n) {
        const QuadratureRule r = kernel_rule(alpha, n);
        return py::make_tuple(to_array(r.nodes), to_array(r.weights));
      },
      py::arg("alpha"), py::arg("n"));

  py::class_<Rect>(m, "Rect")
      .def(py::init([](double a, double b, double c, double d) {
             Rect r{a, b, c, d};
             r.validate();
             return r;
           }),
           py::arg("a") = 0.0, py::arg("b") = 1.0, py::arg("c") = 0.0, py::arg("d") = 1.0)
      .def_readonly("a", &Rect::a)
      .def_readonly("b", &Rect::b)
      .def_readonly("c", &Rect::c)
      .def_readonly("d", &Rect::d)
      .def("__eq__", [](const Rect& l, const Rect& r) { return l == r; })
      .def("__repr__", [](const Rect& r) {
        return "Rect(" + format_real(r.a) + ", " + format_real(r.b) + ", " + format_real(r.c) + ", " +
               format_real(r.d) + ")";
      });

  py::class_<Surface>(m, "Surface")
      .def(py::init([](const std::string& spec, const Rect& rect) { return make_surface(parse_surface_spec(spec), rect); }),
           py::arg("spec"), py::arg("rect") = Rect{}, "Catalog surface from its text form, e.g. 'sine:2,2'.")
      .def_static("from_callable", &surface_from_callable, py::arg("fn"), py::arg("rect") = Rect{},
                  py::arg("label") = "callable")
      .def("__call__", &Surface::operator(), py::arg("x"), py::arg("y"))
      .def_property_readonly("label", &Surface::label)
      .def_property_readonly("rect", &Surface::rect)
      .def_property_readonly("separable", &Surface::separable);
  m.def("linear_combination", &linear_combination, py::arg("lam"), py::arg("f"), py::arg("mu"), py::arg("g"));

  py::class_<OperatorSpec>(m, "OperatorSpec")
      .def(py::init(&make_operator), py::arg("kind") = "katugampola", py::arg("order") = std::pair{0.5, 0.5},
           py::arg("rho") = std::pair{0.0, 0.0}, py::arg("lower") = std::pair{0.0, 0.0},
           py::arg("rule_n") = kDefaultRuleNodes)
      .def_property_readonly("kind", [](const OperatorSpec& s) { return std::string(to_string(s.kind)); })
      .def_property_readonly("order", [](const OperatorSpec& s) { return std::pair{s.order.a1, s.order.a2}; })
      .def_property_readonly("rho", [](const OperatorSpec& s) { return std::pair{s.params.rho1, s.params.rho2}; })
      .def_property_readonly("lower", [](const OperatorSpec& s) { return std::pair{s.params.a, s.params.c}; })
      .def_readonly("rule_n", &OperatorSpec::rule_n);

  m.def("katugampola_point", &katugampola_point, py::arg("f"), py::arg("spec"), py::arg("x"), py::arg("y"), release());
  m.def("hadamard_point", &hadamard_point, py::arg("f"), py::arg("spec"), py::arg("x"), py::arg("y"), release());
  m.def("fractional_integral", &fractional_integral, py::arg("f"), py::arg("spec"), py::arg("x"), py::arg("y"),
        release());
  m.def(
      "hadamard_point_1d",
      [](py::function h, double gamma1, double a, double x, int rule_n) {
        auto fn = univariate(std::move(h));
        py::gil_scoped_release nogil;
        return hadamard_point_1d(fn, gamma1, a, x, rule_n);
      },
      py::arg("h"), py::arg("gamma1"), py::arg("a"), py::arg("x"), py::arg("rule_n") = kDefaultRuleNodes);
  m.def(
      "rho_limit_gap",
      [](const Surface& f, std::pair<double, double> order, std::vector<double> rhos, double a, double c, double x,
         double y, int rule_n) {
        py::gil_scoped_release nogil;
        return rho_limit_gap(f, {order.first, order.second}, rhos, a, c, x, y, rule_n);
      },
      py::arg("f"), py::arg("order"), py::arg("rhos"), py::arg("a"), py::arg("c"), py::arg("x"), py::arg("y"),
      py::arg("rule_n") = kDefaultRuleNodes);

  py::class_<SampledSurface>(m, "SampledSurface")
      .def(py::init(&sampled_from_array), py::arg("values"), py::arg("rect"), py::arg("n"), py::arg("oversample") = 1,
           py::arg("label") = "array")
      .def_readonly("rect", &SampledSurface::rect)
      .def_readonly("n", &SampledSurface::n)
      .def_readonly("oversample", &SampledSurface::oversample)
      .def_readonly("label", &SampledSurface::label)
      .def_property_readonly("values", &grid_array, "Samples as an array indexed [y, x].");

  m.def(
      "sample_surface",
      [](const Surface& f, std::size_t n, std::size_t oversample) {
        py::gil_scoped_release nogil;
        return sample_surface(f, n, oversample);
      },
      py::arg("f"), py::arg("n"), py::arg("oversample") = 4);
  m.def(
      "integrate_grid",
      [](const Surface& f, const OperatorSpec& spec, std::size_t grid_n, std::size_t oversample,
         const std::string& path) {
        GridPath p = GridPath::Auto;
        if (path == "direct") {
          p = GridPath::Direct;
        } else if (path == "separable") {
          p = GridPath::Separable;
        } else if (path != "auto") {
          throw InvalidArgument("path must be 'auto', 'direct' or 'separable'");
        }
        py::gil_scoped_release nogil;
        return integrate_grid(f, spec, grid_n, oversample, p);
      },
      py::arg("f"), py::arg("spec"), py::arg("grid_n"), py::arg("oversample") = 1, py::arg("path") = "auto");
  m.def("range_over_cell", &range_over_cell, py::arg("s"), py::arg("i"), py::arg("j"));

  m.def("box_count", &box_count, py::arg("s"), py::arg("k"));
  m.def(
      "lemma31_bounds",
      [](const SampledSurface& s, int k) {
        const CountBounds b = lemma31_bounds(s, k);
        return py::make_tuple(b.lower, b.upper);
      },
      py::arg("s"), py::arg("k"), "(lower, upper) count bounds at level k.");

  py::class_<BoxCountCurve>(m, "BoxCountCurve")
      .def_readonly("levels", &BoxCountCurve::levels)
      .def_readonly("counts", &BoxCountCurve::counts)
      .def_readonly("label", &BoxCountCurve::label)
      .def("delta", &BoxCountCurve::delta, py::arg("idx"))
      .def("to_dict", &curve_dict);
  m.def("box_count_curve", &box_count_curve, py::arg("s"), py::arg("k_min") = 3, py::arg("k_max") = 7);

  py::class_<DimensionEstimate>(m, "DimensionEstimate")
      .def_readonly("slope", &DimensionEstimate::slope)
      .def_readonly("intercept", &DimensionEstimate::intercept)
      .def_readonly("r_squared", &DimensionEstimate::r_squared)
      .def_readonly("k_min", &DimensionEstimate::k_min)
      .def_readonly("k_max", &DimensionEstimate::k_max)
      .def_property_readonly("reliable", &DimensionEstimate::reliable);
  m.def("estimate_dimension", &estimate_dimension, py::arg("curve"));

  py::class_<OracleResult>(m, "OracleResult")
      .def_readonly("value", &OracleResult::value)
      .def_readonly("error_estimate", &OracleResult::error_estimate)
      .def_readonly("subdivisions", &OracleResult::subdivisions)
      .def_readonly("converged", &OracleResult::converged);
  m.def(
      "direct_singular",
      [](const Surface& f, const OperatorSpec& spec, double x, double y, double tol) {
        OracleOptions options;
        options.tol = tol;
        py::gil_scoped_release nogil;
        return direct_singular(f, spec, x, y, options);
      },
      py::arg("f"), py::arg("spec"), py::arg("x"), py::arg("y"), py::arg("tol") = 1e-10);
}
