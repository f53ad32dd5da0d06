#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bvkit/approx.hpp"
#include "bvkit/atoms.hpp"
#include "bvkit/builtins.hpp"
#include "bvkit/io.hpp"
#include "bvkit/variation.hpp"

namespace py = pybind11;
using namespace bvkit;

namespace {

Exponent exponent_from_py(double r) {
  return std::isinf(r) ? Exponent::infinity() : Exponent::finite(r);
}

double exponent_to_py(const Exponent& e) {
  return e.is_inf() ? std::numeric_limits<double>::infinity() : e.value();
}

GridFunction grid_from_array(int d, int m, py::array_t<double, py::array::c_style> values) {
  auto buf = values.request();
  const double* ptr = static_cast<const double*>(buf.ptr);
  return GridFunction(d, m, std::vector<double>(ptr, ptr + buf.size));
}

py::array_t<double> grid_to_array(const GridFunction& f) {
  auto vals = f.values();
  py::array_t<double> out({static_cast<py::ssize_t>(vals.size())});
  auto view = out.mutable_unchecked<1>();
  for (py::ssize_t i = 0; i < view.shape(0); ++i) {
    view(i) = vals[static_cast<std::size_t>(i)];
  }
  return out;
}

py::dict report_to_dict(const NormReport& report) {
  py::dict out;
  out["value"] = report.value;
  out["kind"] = report.kind;
  py::list cert;
  for (const auto& cube : report.certificate.cubes) {
    py::dict c;
    c["level"] = cube.level;
    c["index"] = cube.index;
    cert.append(c);
  }
  out["certificate"] = cert;
  out["meta"] = report.meta;
  return out;
}

}  // namespace

PYBIND11_MODULE(_bvkit, mod) {
  mod.doc() = "Multivariate bounded-variation machinery on dyadic grids";

  py::class_<Kappa>(mod, "Kappa")
      .def(py::init([](int k, int d, double lambda, double p, double q) {
             return Kappa(k, d, lambda, exponent_from_py(p), exponent_from_py(q));
           }),
           py::arg("k"), py::arg("d"), py::arg("lambda_"), py::arg("p"), py::arg("q"))
      .def_readonly("k", &Kappa::k)
      .def_readonly("d", &Kappa::d)
      .def_readonly("lambda_", &Kappa::lambda)
      .def_property_readonly("p", [](const Kappa& k) { return exponent_to_py(k.p); })
      .def_property_readonly("q", [](const Kappa& k) { return exponent_to_py(k.q); })
      .def("__repr__", &Kappa::str);

  py::class_<DyadicCube>(mod, "DyadicCube")
      .def(py::init<int, std::vector<std::uint32_t>>(), py::arg("level"), py::arg("index"))
      .def_readonly("level", &DyadicCube::level)
      .def_readonly("index", &DyadicCube::index)
      .def_property_readonly("volume", &DyadicCube::volume)
      .def("children", &DyadicCube::children)
      .def("__eq__", [](const DyadicCube& a, const DyadicCube& b) { return a == b; });

  py::class_<GridFunction>(mod, "GridFunction")
      .def(py::init(&grid_from_array), py::arg("d"), py::arg("m"), py::arg("values"))
      .def_property_readonly("d", &GridFunction::dim)
      .def_property_readonly("m", &GridFunction::resolution)
      .def_property_readonly("values", &grid_to_array)
      .def("refine", &GridFunction::refine, py::arg("extra_levels"))
      .def("__len__", &GridFunction::size);

  mod.def("smoothness", &smoothness, py::arg("kappa"));
  mod.def("conjugate",
          [](double r) { return exponent_to_py(exponent_from_py(r).conjugate()); },
          py::arg("r"));
  mod.def("classify", [](const Kappa& kappa) {
    const Regime r = classify(kappa);
    py::dict out;
    out["degenerate"] = r.degenerate;
    out["maximal"] = r.maximal;
    out["duality_valid"] = r.duality_valid;
    out["two_stars_valid"] = r.two_stars_valid;
    return out;
  });

  mod.def("builtin", &make_builtin, py::arg("id"), py::arg("d"), py::arg("m"),
          py::arg("seed") = 0, py::arg("supersample") = 4);
  mod.def("builtin_ids", &builtin_ids);

  mod.def(
      "lq_norm",
      [](const GridFunction& f, double q) { return lq_norm(f, exponent_from_py(q)); },
      py::arg("f"), py::arg("q"));
  mod.def("pair", &pair, py::arg("f"), py::arg("g"));
  mod.def("cell_average", &cell_average, py::arg("f"), py::arg("cube"));

  mod.def(
      "local_approx_error",
      [](const GridFunction& f, const DyadicCube& cube, int k, double q) {
        const LocalFit fit = local_approx_error(f, cube, k, exponent_from_py(q));
        py::dict out;
        out["error"] = fit.error;
        out["coefficients"] =
            std::vector<double>(fit.coefficients.data(),
                                fit.coefficients.data() + fit.coefficients.size());
        out["residual"] = fit.residual;
        return out;
      },
      py::arg("f"), py::arg("cube"), py::arg("k"), py::arg("q"));

  mod.def(
      "k_oscillation",
      [](const GridFunction& f, const DyadicCube& cube, int k, double q) {
        const Oscillation osc = k_oscillation(f, cube, k, exponent_from_py(q));
        return py::make_tuple(osc.value, osc.any_shift);
      },
      py::arg("f"), py::arg("cube"), py::arg("k"), py::arg("q"));

  mod.def(
      "gamma",
      [](const GridFunction& f, const std::vector<DyadicCube>& cubes, const Kappa& kappa) {
        if (!is_packing(cubes)) throw std::invalid_argument("cubes must form an antichain");
        Packing pi{cubes};
        return gamma(f, pi, kappa);
      },
      py::arg("f"), py::arg("cubes"), py::arg("kappa"));

  mod.def(
      "v_seminorm",
      [](const GridFunction& f, const Kappa& kappa, int max_level) {
        return report_to_dict(v_seminorm(f, kappa, max_level));
      },
      py::arg("f"), py::arg("kappa"), py::arg("max_level"));
  mod.def(
      "v_seminorm_restricted",
      [](const GridFunction& f, const Kappa& kappa, double eps, int max_level) {
        return report_to_dict(v_seminorm_restricted(f, kappa, eps, max_level));
      },
      py::arg("f"), py::arg("kappa"), py::arg("eps"), py::arg("max_level"));
  mod.def(
      "little_v_profile",
      [](const GridFunction& f, const Kappa& kappa, const std::vector<int>& levels) {
        const auto prof = little_v_profile(f, kappa, levels);
        py::list rows;
        for (const auto& pt : prof.points) rows.append(py::make_tuple(pt.eps, pt.value));
        py::dict out;
        out["points"] = rows;
        out["slope"] = prof.loglog_slope;
        return out;
      },
      py::arg("f"), py::arg("kappa"), py::arg("levels"));

  mod.def(
      "var_1d",
      [](const GridFunction& f, int k, double lambda, double p) {
        return var_1d(f, k, lambda, exponent_from_py(p));
      },
      py::arg("f"), py::arg("k"), py::arg("lambda_"), py::arg("p"));
  mod.def(
      "var_1d_packing_form",
      [](const GridFunction& f, int k, double lambda, double p) {
        return var_1d_packing_form(f, k, lambda, exponent_from_py(p));
      },
      py::arg("f"), py::arg("k"), py::arg("lambda_"), py::arg("p"));
  mod.def(
      "bmo_seminorm",
      [](const GridFunction& f, double p, int max_level) {
        return report_to_dict(bmo_seminorm(f, exponent_from_py(p), max_level));
      },
      py::arg("f"), py::arg("p"), py::arg("max_level"));
  mod.def(
      "morrey_norm",
      [](const GridFunction& f, double q, double s, int max_level) {
        return report_to_dict(morrey_norm(f, q, s, max_level));
      },
      py::arg("f"), py::arg("q"), py::arg("s"), py::arg("max_level"));
  mod.def("bvk_seminorm", &bvk_seminorm, py::arg("f"), py::arg("k"));

  mod.def(
      "mollify",
      [](const GridFunction& f, int n, int supersample) {
        return mollify(f, MollifierConfig{n, supersample, "tensor-exp"});
      },
      py::arg("f"), py::arg("n"), py::arg("supersample") = 4);
  mod.def(
      "modulus",
      [](const GridFunction& f, int k, double q, double t) {
        return modulus(f, k, exponent_from_py(q), t);
      },
      py::arg("f"), py::arg("k"), py::arg("q"), py::arg("t"));
  mod.def("jackson_approx", &jackson_approx, py::arg("f"), py::arg("n"));

  mod.def(
      "duality_gap",
      [](const GridFunction& g, const Kappa& kappa, bool exact) {
        const GapReport gap = duality_gap(g, kappa, {}, exact);
        return py::make_tuple(gap.lower, gap.upper, gap.relative_gap);
      },
      py::arg("g"), py::arg("kappa"), py::arg("exact") = false);

  mod.def("save_grid",
          [](const GridFunction& f, const std::string& path) { save_grid(f, path); },
          py::arg("f"), py::arg("path"));
  mod.def("load_grid", [](const std::string& path) { return load_grid(path); },
          py::arg("path"));
}
