#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dbq/analysis.hpp"
#include "dbq/errors.hpp"
#include "dbq/linear_solver.hpp"
#include "dbq/symbols.hpp"
#include "runner/config.hpp"
#include "runner/experiments.hpp"
#include "runner/output.hpp"

namespace py = pybind11;
using namespace dbq;

namespace {

ModelParams make_params(double alpha, double beta) {
  ModelParams p{alpha, beta};
  p.validate();
  return p;
}

RadialQuantity parse_quantity(const std::string& s) {
  if (s == "linear") return RadialQuantity::Linear;
  if (s == "profile") return RadialQuantity::Profile;
  if (s == "gap") return RadialQuantity::Gap;
  throw std::invalid_argument("unknown quantity \"" + s + "\"");
}

}  // namespace

PYBIND11_MODULE(_dbq, m) {
  m.doc() = "Spectral solver and decay-rate analysis for a damped Boussinesq-type equation";

  py::register_exception<BlowUpError>(m, "BlowUpError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<runner::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "roots",
      [](double xi2, double alpha, double beta) {
        const RootPair r = roots(xi2, make_params(alpha, beta));
        return py::make_tuple(r.lambda_plus, r.lambda_minus);
      },
      py::arg("xi2"), py::arg("alpha") = -1.0, py::arg("beta") = 1.0);

  m.def(
      "propagator",
      [](double xi2, double t, double alpha, double beta) {
        const PropagatorSymbols s = propagator(xi2, t, make_params(alpha, beta));
        py::dict d;
        d["G"] = s.G;
        d["H"] = s.H;
        d["Gt"] = s.Gt;
        d["Ht"] = s.Ht;
        return d;
      },
      py::arg("xi2"), py::arg("t"), py::arg("alpha") = -1.0, py::arg("beta") = 1.0);

  m.def("omega", &omega, py::arg("xi2"));
  m.def("eta", &eta, py::arg("t"), py::arg("n"));
  m.def("log_grid", &log_grid, py::arg("lo"), py::arg("hi"), py::arg("n"));
  m.def("time_grid", &time_grid, py::arg("T"), py::arg("n"));

  m.def(
      "fit_rate",
      [](std::vector<double> times, std::vector<double> values, double t_lo, double t_hi) {
        DecaySeries s;
        s.times = std::move(times);
        s.values = std::move(values);
        s.validate();
        const RateFit f = fit_rate(s, t_lo, t_hi);
        py::dict d;
        d["slope"] = f.slope;
        d["intercept"] = f.intercept;
        d["stderr"] = f.stderr_slope;
        d["points"] = f.points;
        return d;
      },
      py::arg("times"), py::arg("values"), py::arg("t_lo"), py::arg("t_hi"));

  m.def(
      "radial_norms",
      [](const std::string& data, int n, const std::vector<double>& times, const std::vector<int>& k_list,
         double alpha, double width, double eps, const std::string& quantity) {
        RadialData d;
        if (data == "gaussian") d = gaussian_radial(n, width);
        else if (data == "radial_L2") d = l2_type_radial(n, eps);
        else throw std::invalid_argument("unknown data \"" + data + "\"");
        py::dict out;
        for (const DecaySeries& s :
             decay_series(d, n, times, k_list, make_params(alpha, 1.0), parse_quantity(quantity))) {
          out[py::int_(s.k)] = s.values;
        }
        return out;
      },
      py::arg("data"), py::arg("n"), py::arg("times"), py::arg("k_list"), py::arg("alpha") = -1.0,
      py::arg("width") = 1.0, py::arg("eps") = 0.2, py::arg("quantity") = "linear");

  m.def(
      "certify_bound",
      [](const std::string& kind, const std::vector<double>& xi_grid, const std::vector<double>& t_grid,
         std::vector<double> c_candidates, double alpha, double cap) {
        CertifyOptions opt;
        opt.cap = cap;
        const BoundCertificate c = certify_bound(parse_bound_kind(kind), xi_grid, t_grid,
                                                 std::move(c_candidates), make_params(alpha, 1.0), opt);
        py::dict d;
        d["kind"] = std::string(to_string(c.kind));
        d["C"] = c.sup_ratio;
        d["c"] = c.fitted_c;
        d["passed"] = c.passed;
        return d;
      },
      py::arg("kind"), py::arg("xi_grid"), py::arg("t_grid"), py::arg("c_candidates"),
      py::arg("alpha") = -1.0, py::arg("cap") = 1e3);

  m.def("list_experiments", &runner::list_experiments);

  m.def(
      "run_config",
      [](const std::string& text, int threads) {
        const runner::ExperimentConfig config = runner::parse_config(text);
        runner::RunReport report;
        {
          py::gil_scoped_release release;
          report = runner::run_all(config, threads);
        }
        return runner::report_json(report);
      },
      py::arg("config_json"), py::arg("threads") = 1,
      "Runs the experiments of a JSON config and returns report.json as a string.");
}
