// Python veneer over the core library: a thin surface for smoke tests and
// notebook exploration, not a second API. Fields travel as an opaque handle
// so analytic prototypes and loaded grids share one type.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracg/fields.hpp"
#include "fracg/operator.hpp"
#include "fracg/qualitative.hpp"
#include "fracg/solver.hpp"
#include "fracg/util.hpp"
#include "fracg/young.hpp"

namespace py = pybind11;
using namespace fracg;

namespace {

struct Field {
  FieldPtr p;
  int dim() const { return p->dim(); }
};

Point to_point(const std::vector<double>& v) {
  if (v.size() == 1) return Point::of(v[0]);
  if (v.size() == 2) return Point::of(v[0], v[1]);
  throw Error(ErrorCode::InvalidParams, "points have 1 or 2 coordinates");
}

Point default_center(int dim) { return dim == 1 ? Point::of(0.0) : Point::of(0.0, 0.0); }

OperatorParams make_params(double s, double delta, double rfar, int qnear, int qfar) {
  OperatorParams prm;
  prm.s = s;
  prm.delta_near = delta;
  prm.r_far = rfar;
  prm.quad_near = qnear;
  prm.quad_far = qfar;
  return prm;
}

py::dict dict_of(const InequalityReport& r) {
  py::dict d;
  d["lemma"] = lemma_id_name(r.lemma_id);
  d["n_samples"] = r.n_samples;
  d["n_violations"] = r.n_violations;
  d["worst_margin"] = r.worst_margin;
  d["constant_used"] = r.constant_used;
  d["constant_derivation"] = r.constant_derivation;
  d["sample_domain"] = r.sample_domain;
  d["worst_sample"] = r.worst_sample;
  d["n_flagged"] = r.n_flagged;
  d["notes"] = r.notes;
  return d;
}

py::list list_of_point(const Point& p) {
  py::list out;
  for (int i = 0; i < p.dim; ++i) out.append(p[i]);
  return out;
}

py::dict dict_of(const MPReport& r) {
  py::dict d;
  d["pass"] = r.pass;
  d["worst_location"] = list_of_point(r.worst_location);
  d["worst_value"] = r.worst_value;
  d["tolerance_used"] = r.tolerance_used;
  d["rigidity_warning"] = r.rigidity_warning;
  d["rigidity_vanishes"] = r.rigidity_vanishes;
  d["boundedness_assumed"] = r.boundedness_assumed;
  d["context"] = r.context;
  return d;
}

py::dict dict_of(const SymmetryReport& r) {
  py::dict d;
  d["pass"] = r.pass;
  d["lambda0_est"] = r.lambda0_est;
  d["lambda_step"] = r.lambda_step;
  d["worst_pair_dev"] = r.worst_pair_dev;
  d["monotone_ok"] = r.monotone_ok;
  d["tolerance_used"] = r.tolerance_used;
  d["lambda_minima"] = r.lambda_minima;
  d["context"] = r.context;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fracg, m) {
  m.doc() = "fractional g-Laplacian laboratory";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(PyExc_ValueError,
                      (std::string(error_code_name(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<YoungFunction>(m, "YoungFunction")
      .def("G", &YoungFunction::G, py::arg("t"))
      .def("g", &YoungFunction::g, py::arg("t"))
      .def("gprime", &YoungFunction::gprime, py::arg("t"))
      .def_property_readonly("p_minus", &YoungFunction::p_minus)
      .def_property_readonly("p_plus", &YoungFunction::p_plus)
      .def_property_readonly("label", &YoungFunction::label)
      .def("__repr__",
           [](const YoungFunction& Y) { return "<YoungFunction " + Y.label() + ">"; });

  m.def(
      "make_young",
      [](const std::string& family, const std::vector<double>& exponents) {
        return make_builtin(family_from_name(family), exponents);
      },
      py::arg("family"), py::arg("exponents"),
      "Built-in Young function by family name (power, double_phase, power_log).");

  m.def(
      "certify",
      [](const YoungFunction& Y, long n_samples, uint64_t seed) {
        py::list out;
        for (const auto& r : certify_all(Y, n_samples, seed)) out.append(dict_of(r));
        return out;
      },
      py::arg("young"), py::arg("n_samples") = 10000, py::arg("seed") = 7,
      "Run the whole inequality certification suite; one dict per report.");

  m.def(
      "estimate_indices",
      [](const YoungFunction& Y, double t_min, double t_max, int n_pts) {
        return estimate_indices(Y, t_min, t_max, n_pts);
      },
      py::arg("young"), py::arg("t_min") = 1e-6, py::arg("t_max") = 1e6,
      py::arg("n_pts") = 4096);

  py::class_<Field>(m, "Field")
      .def_property_readonly("dim", &Field::dim)
      .def(
          "value", [](const Field& f, const std::vector<double>& at) {
            return f.p->value(to_point(at));
          },
          py::arg("at"))
      .def("__repr__", [](const Field& f) {
        return "<Field dim=" + std::to_string(f.p->dim()) + ">";
      });

  m.def(
      "constant", [](int dim, double c) { return Field{constant_field(dim, c)}; },
      py::arg("dim") = 1, py::arg("c") = 1.0);
  m.def(
      "gaussian",
      [](int dim, double amp, const std::vector<double>& center) {
        Point p = center.empty() ? default_center(dim) : to_point(center);
        return Field{gaussian_field(dim, amp, p)};
      },
      py::arg("dim") = 1, py::arg("amp") = 1.0, py::arg("center") = std::vector<double>{});
  m.def(
      "bump",
      [](int dim, const std::vector<double>& center, double width) {
        Point p = center.empty() ? default_center(dim) : to_point(center);
        return Field{bump_field(dim, p, width)};
      },
      py::arg("dim") = 1, py::arg("center") = std::vector<double>{}, py::arg("width") = 0.5);
  m.def(
      "cap", [](int dim) { return Field{parabolic_cap_field(dim)}; }, py::arg("dim") = 1);
  m.def(
      "power_decay",
      [](int dim, double c, double beta) { return Field{power_decay_field(dim, c, beta)}; },
      py::arg("dim") = 1, py::arg("c") = 1.0, py::arg("beta") = 2.0);

  m.def(
      "load_field", [](const std::string& path) {
        return Field{std::make_shared<GridField>(read_field(path))};
      },
      py::arg("path"));
  m.def(
      "save_field",
      [](const Field& f, const std::string& path, const std::string& format) {
        auto grid = std::dynamic_pointer_cast<const GridField>(f.p);
        if (!grid)
          throw Error(ErrorCode::InvalidParams, "only grid-backed fields can be saved");
        write_field(*grid, path, format);
      },
      py::arg("field"), py::arg("path"), py::arg("format") = "f64le");

  m.def(
      "eval_fracg",
      [](const YoungFunction& Y, const Field& u, const std::vector<double>& at, double s,
         double delta, double rfar, int qnear, int qfar) {
        EvalBreakdown b = eval_fracg_full(Y, *u.p, to_point(at), make_params(s, delta, rfar,
                                                                             qnear, qfar));
        py::dict d;
        d["value"] = b.value;
        d["near"] = b.near;
        d["far"] = b.far;
        d["tail_bound"] = b.tail_bound;
        d["tail_ok"] = b.tail_ok;
        d["delta_used"] = b.delta_used;
        d["r_far_used"] = b.r_far_used;
        return d;
      },
      py::arg("young"), py::arg("field"), py::arg("at"), py::arg("s") = 0.5,
      py::arg("delta") = 0.0, py::arg("rfar") = 0.0, py::arg("qnear") = 16,
      py::arg("qfar") = 16,
      "Principal-value evaluation with the near/far/tail breakdown as a dict.");

  m.def(
      "solve_ball",
      [](const YoungFunction& Y, double s, double radius, int grid_n, double rhs, double tol,
         int max_iter) {
        Problem prob = Problem::ball(Y, s, radius, grid_n, Nonlinearity::constant(rhs));
        SolveConfig sc;
        sc.tol = tol;
        sc.max_iter = max_iter;
        Solution sol = solve_dirichlet(prob, sc);
        py::dict info;
        info["converged"] = sol.converged;
        info["iterations"] = sol.iterations;
        info["final_residual"] = sol.final_residual;
        info["tol_used"] = sol.tol_used;
        info["tau_final"] = sol.tau_final;
        return py::make_tuple(Field{std::make_shared<GridField>(std::move(sol.field))}, info);
      },
      py::arg("young"), py::arg("s") = 0.5, py::arg("radius") = 1.0, py::arg("grid_n") = 64,
      py::arg("rhs") = 1.0, py::arg("tol") = 0.0, py::arg("max_iter") = 20000,
      "Dirichlet solve of operator(u) = rhs on a centered ball; returns (field, info).");

  m.def(
      "max_principle",
      [](const YoungFunction& Y, const Field& u, double radius, double s, double tol,
         int probes) {
        return dict_of(check_max_principle(Y, u.p, radius, make_params(s, 0, 0, 16, 16), tol,
                                           probes));
      },
      py::arg("young"), py::arg("field"), py::arg("radius") = 1.0, py::arg("s") = 0.5,
      py::arg("tol") = 1e-5, py::arg("probes") = 512);

  m.def(
      "moving_planes",
      [](const YoungFunction& Y, const Field& u, double radius, int axis, double s,
         double tol) {
        return dict_of(moving_planes_audit(Y, u.p, radius, axis, {},
                                           make_params(s, 0, 0, 16, 16), tol));
      },
      py::arg("young"), py::arg("field"), py::arg("radius") = 1.0, py::arg("axis") = 0,
      py::arg("s") = 0.5, py::arg("tol") = 1e-5);
}
