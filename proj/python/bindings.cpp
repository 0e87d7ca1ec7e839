#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "seqtrack/boundary.hpp"
#include "seqtrack/config.hpp"
#include "seqtrack/diffusion.hpp"
#include "seqtrack/errors.hpp"
#include "seqtrack/model.hpp"
#include "seqtrack/montecarlo.hpp"
#include "seqtrack/ode.hpp"
#include "seqtrack/policy.hpp"
#include "seqtrack/simulate.hpp"

namespace py = pybind11;
using namespace seqtrack;

namespace {

Side to_side(int a) { return side_from_int(a); }

py::dict estimate_dict(const CostEstimate& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["stderr"] = e.std_error;
  d["variance"] = e.variance;
  d["n"] = e.n;
  d["ci95"] = py::make_tuple(e.ci_low, e.ci_high);
  d["tail_bound"] = e.tail_bound;
  return d;
}

SimConfig make_sim(double dt, double horizon, double x0, std::uint64_t seed,
                   const std::string& scheme, int noise_substeps) {
  SimConfig s;
  s.dt = dt;
  s.horizon = horizon;
  s.x0 = x0;
  s.seed = seed;
  s.scheme = scheme_from_string(scheme);
  s.noise_substeps = noise_substeps;
  s.validate();
  return s;
}

Policy make_policy(const std::string& kind, double B, double window, int a_init) {
  const Side a = to_side(a_init);
  Policy p;
  if (kind == "threshold") {
    p = Policy::threshold(B, a);
  } else if (kind == "never") {
    p = Policy::never(a);
  } else if (kind == "sign") {
    p = Policy::fixed_lag_sign(window, a);
  } else {
    throw ValidationError("policy", "policy: expected threshold, never or sign");
  }
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Optimal tracking of a hidden two-state drift";
  m.attr("__version__") = std::string(version());

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<IntegrationFailure>(m, "IntegrationFailure", base.ptr());
  py::register_exception<NoRootBracket>(m, "NoRootBracket", base.ptr());

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<double, double, double, double, double>(), py::arg("lambda_") = 0.25,
           py::arg("mu") = 1.0, py::arg("alpha") = 0.25, py::arg("c1") = 0.25,
           py::arg("c2") = 0.0)
      .def_property_readonly("lambda_", &ModelParams::lambda)
      .def_property_readonly("mu", &ModelParams::mu)
      .def_property_readonly("alpha", &ModelParams::alpha)
      .def_property_readonly("c1", &ModelParams::c1)
      .def_property_readonly("c2", &ModelParams::c2)
      .def_property_readonly("beta", &ModelParams::beta)
      .def_property_readonly("gamma", &ModelParams::gamma)
      .def_property_readonly("regime",
                             [](const ModelParams& p) { return std::string(to_string(regime(p))); })
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(lambda_=" + std::to_string(p.lambda()) +
               ", mu=" + std::to_string(p.mu()) + ", alpha=" + std::to_string(p.alpha()) +
               ", c1=" + std::to_string(p.c1()) + ", c2=" + std::to_string(p.c2()) + ")";
      });

  m.def("v_tilde", &v_tilde, py::arg("params"), py::arg("x"));
  m.def("l_residual", &l_residual, py::arg("params"), py::arg("x"), py::arg("f"), py::arg("f1"),
        py::arg("f2"));

  py::class_<PhiSolution>(m, "PhiSolution")
      .def_property_readonly("epsilon", &PhiSolution::epsilon)
      .def_property_readonly("x_min", &PhiSolution::x_min)
      .def_property_readonly("x_max", &PhiSolution::x_max)
      .def_property_readonly("truncated", &PhiSolution::truncated)
      .def_property_readonly("x", [](const PhiSolution& s) {
        return std::vector<double>(s.x().begin(), s.x().end());
      })
      .def_property_readonly("phi", [](const PhiSolution& s) {
        return std::vector<double>(s.phi().begin(), s.phi().end());
      })
      .def_property_readonly("dphi", [](const PhiSolution& s) {
        return std::vector<double>(s.dphi().begin(), s.dphi().end());
      })
      .def("__len__", &PhiSolution::size)
      .def("__call__", [](const PhiSolution& s, double x) {
        const PhiPoint pt = s.at(x);
        return py::make_tuple(pt.value, pt.slope);
      });

  m.def(
      "solve_phi",
      [](const ModelParams& p, double epsilon, double tol, double normalization) {
        PhiOptions o;
        o.epsilon = epsilon;
        o.tol = tol;
        o.normalization = normalization;
        return solve_phi(p, o);
      },
      py::arg("params"), py::arg("epsilon") = 1e-4, py::arg("tol") = 1e-10,
      py::arg("normalization") = 1.0);

  m.def("h1", &h1, py::arg("params"), py::arg("phi"), py::arg("x"));
  m.def("h2", &h2, py::arg("params"), py::arg("phi"), py::arg("x"));

  py::class_<ValueFunction>(m, "ValueFunction")
      .def_property_readonly("regime", [](const ValueFunction& v) {
        return std::string(to_string(v.boundary().regime));
      })
      .def_property_readonly("K", [](const ValueFunction& v) { return v.boundary().K; })
      .def_property_readonly("B", [](const ValueFunction& v) { return v.boundary().B; })
      .def_property_readonly("lower", &ValueFunction::lower)
      .def_property_readonly("upper", &ValueFunction::upper)
      .def(
          "value", [](const ValueFunction& v, double x, int a) { return v.value(x, to_side(a)); },
          py::arg("x"), py::arg("a") = 1)
      .def("optimal", &ValueFunction::optimal, py::arg("x"))
      .def("verify_fit", [](const ValueFunction& v) {
        py::dict d;
        for (const auto& c : verify_fit(v).checks) {
          d[py::str(c.name)] = py::make_tuple(c.value, c.threshold, c.passed);
        }
        return d;
      });

  m.def(
      "solve",
      [](const ModelParams& p, double epsilon, double tol) {
        PhiOptions o;
        o.epsilon = epsilon;
        o.tol = tol;
        PhiSolution phi = solve_phi(p, o);
        FreeBoundary fb = solve_free_boundary(p, phi);
        return ValueFunction(p, std::move(phi), fb);
      },
      py::arg("params"), py::arg("epsilon") = 1e-4, py::arg("tol") = 1e-10,
      "Solves for phi and the free boundary and returns the value function.");

  m.def(
      "simulate_path",
      [](const ModelParams& p, std::uint64_t path_index, double dt, double horizon, double x0,
         std::uint64_t seed, const std::string& scheme) {
        const PathBundle b = simulate_path(p, make_sim(dt, horizon, x0, seed, scheme, 1), path_index);
        py::dict d;
        d["t"] = b.t;
        d["theta"] = std::vector<int>(b.theta.values.begin(), b.theta.values.end());
        d["x"] = b.x_obs;
        d["m"] = b.m;
        return d;
      },
      py::arg("params"), py::arg("path_index") = 0, py::arg("dt") = 1e-3,
      py::arg("horizon") = 50.0, py::arg("x0") = 0.0, py::arg("seed") = 20151209,
      py::arg("scheme") = "euler");

  m.def(
      "estimate_cost",
      [](const ModelParams& p, const std::string& policy, double B, double window, int a_init,
         std::size_t n_paths, double dt, double horizon, double x0, std::uint64_t seed,
         unsigned threads) {
        const SimConfig sim = make_sim(dt, horizon, x0, seed, "euler", 1);
        const Policy pol = make_policy(policy, B, window, a_init);
        PolicyEvaluation ev;
        {
          py::gil_scoped_release release;
          ev = estimate_cost(p, pol, sim, {n_paths, threads});
        }
        py::dict d;
        d["m_form"] = estimate_dict(ev.m_form);
        d["theta_form"] = estimate_dict(ev.theta_form);
        d["mean_switches"] = ev.mean_switches;
        return d;
      },
      py::arg("params"), py::arg("policy"), py::arg("B") = 0.5, py::arg("window") = 1.0,
      py::arg("a_init") = 1, py::arg("n_paths") = 10000, py::arg("dt") = 1e-3,
      py::arg("horizon") = 50.0, py::arg("x0") = 0.0, py::arg("seed") = 20151209,
      py::arg("threads") = 0);

  m.def(
      "threshold_sweep",
      [](const ModelParams& p, const std::vector<double>& grid, std::size_t n_paths, double dt,
         double horizon, double x0, std::uint64_t seed, unsigned threads) {
        const SimConfig sim = make_sim(dt, horizon, x0, seed, "euler", 1);
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = threshold_sweep(p, sim, grid, {n_paths, threads});
        }
        py::list rows;
        for (const auto& row : r.rows) {
          py::dict d = estimate_dict(row.m_form);
          d["B"] = row.B;
          rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["argmin_B"] = r.argmin ? py::object(py::float_(r.rows[*r.argmin].B)) : py::none();
        out["overlap_set"] = r.overlap_set;
        return out;
      },
      py::arg("params"), py::arg("grid"), py::arg("n_paths") = 10000, py::arg("dt") = 1e-3,
      py::arg("horizon") = 50.0, py::arg("x0") = 0.0, py::arg("seed") = 20151209,
      py::arg("threads") = 0);

  m.def("scale_function", &scale_function, py::arg("params"), py::arg("x"));
  m.def("hopital_ratio", py::overload_cast<const ModelParams&, double>(&hopital_ratio),
        py::arg("params"), py::arg("x"));
  m.def(
      "entrance_boundary_check",
      [](const ModelParams& p, double tolerance) {
        const EntranceReport r = entrance_boundary_check(p, default_entrance_caps(), tolerance);
        py::list rows;
        for (const auto& row : r.rows) rows.append(py::make_tuple(row.cap, row.integral, row.increment));
        return py::make_tuple(rows, r.converged);
      },
      py::arg("params"), py::arg("tolerance") = 1e-6);
}
