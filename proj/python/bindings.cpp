#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cgal/al.hpp"
#include "cgal/analysis.hpp"
#include "cgal/config.hpp"
#include "cgal/experiment.hpp"
#include "cgal/lmo.hpp"
#include "cgal/problems.hpp"
#include "cgal/solver.hpp"
#include "cgal/trace.hpp"

namespace py = pybind11;
using namespace cgal;

namespace {

py::array_t<double> to_array(const Vec& v) { return py::array_t<double>(v.size(), v.data()); }

Vec to_vec(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return Vec(a.data(), a.data() + a.size());
}

// Trace as a dict of column arrays.
py::dict trace_columns(const std::vector<TraceRecord>& t) {
  const std::size_t n = t.size();
  py::array_t<std::int64_t> k(n), wall(n);
  std::vector<py::array_t<double>> cols;
  for (int j = 0; j < 9; ++j) cols.emplace_back(n);
  for (std::size_t i = 0; i < n; ++i) {
    const TraceRecord& r = t[i];
    k.mutable_at(i) = r.k;
    wall.mutable_at(i) = r.wall_micros;
    const double vals[9] = {r.objective, r.feas_inf, r.feas_2, r.gap,    r.al_value,
                            r.alpha,     r.lambda,   r.sigma,  r.z_norm1};
    for (int j = 0; j < 9; ++j) cols[j].mutable_at(i) = vals[j];
  }
  py::dict d;
  d["k"] = k;
  const char* names[9] = {"objective", "feas_inf", "feas_2", "gap", "al_value", "alpha", "lambda", "sigma", "z_norm1"};
  for (int j = 0; j < 9; ++j) d[names[j]] = cols[j];
  d["wall_micros"] = wall;
  return d;
}

std::vector<TraceRecord> from_columns(const py::dict& d) {
  auto k = d["k"].cast<std::vector<std::int64_t>>();
  std::vector<TraceRecord> t(k.size());
  auto col = [&](const char* name) { return d[name].cast<std::vector<double>>(); };
  const auto f = col("objective"), fi = col("feas_inf"), al = col("al_value"), gap = col("gap");
  for (std::size_t i = 0; i < k.size(); ++i) {
    t[i].k = k[i];
    t[i].objective = f[i];
    t[i].feas_inf = fi[i];
    t[i].al_value = al[i];
    t[i].gap = gap[i];
  }
  return t;
}

py::dict certificate_dict(const RateCertificate& c) {
  py::dict d;
  d["quantity"] = c.quantity;
  d["slope"] = c.slope;
  d["k_lo"] = c.k_lo;
  d["k_hi"] = c.k_hi;
  d["points"] = c.points;
  d["target"] = c.target;
  d["constant"] = c.constant;
  d["tail_sup"] = c.tail_sup;
  d["residual"] = c.residual;
  d["bounded"] = c.bounded();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Single-loop conditional gradient with augmented Lagrangian penalties.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalAbort>(m, "NumericalAbort", PyExc_ArithmeticError);

  py::class_<ProblemInstance>(m, "Problem")
      .def_property_readonly("dim", &ProblemInstance::dim)
      .def_property_readonly("num_constraints", &ProblemInstance::num_constraints)
      .def_readonly("lf", &ProblemInstance::lf)
      .def_readonly("label", &ProblemInstance::label)
      .def_property_readonly("set_name", [](const ProblemInstance& p) { return p.set->name(); })
      .def("objective", [](const ProblemInstance& p, py::array_t<double> x) { return p.f->value(to_vec(x)); })
      .def("constraints", [](const ProblemInstance& p, py::array_t<double> x) {
        return to_array(p.constraint_values(to_vec(x)));
      })
      .def("lmo", [](const ProblemInstance& p, py::array_t<double> c) { return to_array(p.set->lmo(to_vec(c))); })
      .def("barycenter", [](const ProblemInstance& p) -> py::object {
        auto b = p.set->barycenter();
        return b ? py::object(to_array(*b)) : py::none();
      })
      .def("psi", [](const ProblemInstance& p, py::array_t<double> x, py::array_t<double> z, double lambda) {
        return psi_aggregate(p, to_vec(x), to_vec(z), lambda);
      })
      .def("grad_psi", [](const ProblemInstance& p, py::array_t<double> x, py::array_t<double> z, double lambda) {
        return to_array(grad_psi(p, to_vec(x), to_vec(z), lambda));
      })
      .def("__repr__", [](const ProblemInstance& p) { return "<Problem " + p.label + ">"; });

  m.def("gen_qcqp", &gen_qcqp, py::arg("n"), py::arg("m"), py::arg("seed"));
  m.def("gen_ball_qp", &gen_ball_qp, py::arg("n"), py::arg("seed"), py::arg("constrained") = true);
  m.def(
      "oracle_optimum_2d",
      [](const ProblemInstance& p, int grid, int refine) {
        const Oracle2d o = oracle_optimum_2d(p, grid, refine);
        return py::make_tuple(to_array(o.x), o.value);
      },
      py::arg("problem"), py::arg("grid") = 2001, py::arg("refine") = 40);

  m.def(
      "solve_assignment",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> cost) {
        if (cost.ndim() != 2 || cost.shape(0) != cost.shape(1)) throw py::value_error("cost must be square");
        const auto s = solve_assignment(to_vec(cost), static_cast<std::size_t>(cost.shape(0)));
        return py::make_tuple(s.permutation, s.cost);
      },
      py::arg("cost"));

  py::class_<ExperimentConfig>(m, "Config")
      .def(py::init<>())
      .def("set", [](ExperimentConfig& c, const std::string& k, const std::string& v) { apply_setting(c, k, v); })
      .def("validate", &ExperimentConfig::validate)
      .def("echo", &ExperimentConfig::echo)
      .def("to_text", &ExperimentConfig::to_text)
      .def("label", &ExperimentConfig::label)
      .def_readwrite("n", &ExperimentConfig::n)
      .def_readwrite("m", &ExperimentConfig::m)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("tau", &ExperimentConfig::tau)
      .def_readwrite("budget", &ExperimentConfig::budget)
      .def_readwrite("stride", &ExperimentConfig::stride)
      .def_readwrite("reference", &ExperimentConfig::reference)
      .def("__repr__", [](const ExperimentConfig& c) { return "<Config " + c.echo() + ">"; });

  m.def("preset", &preset, py::arg("name"));
  m.def("preset_names", &preset_names);
  m.def("parse_config", [](const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
  });

  m.def(
      "run",
      [](const ExperimentConfig& cfg) {
        ExperimentRun r;
        {
          py::gil_scoped_release release;
          r = run_experiment(cfg);
        }
        py::dict d = trace_columns(r.result.trace);
        d["g0_inf"] = r.g0_inf;
        d["echo"] = cfg.echo();
        d["x"] = to_array(r.result.final_state.x);
        d["z"] = to_array(r.result.final_state.z);
        return d;
      },
      py::arg("config"), "Run one experiment; returns the trace as column arrays plus the final iterate.");

  m.def(
      "metrics",
      [](const py::dict& trace, double f_ref, double g0_inf) {
        const auto t = from_columns(trace);
        const auto ms = metrics(t, f_ref, g0_inf);
        py::array_t<std::int64_t> k(ms.size());
        py::array_t<double> val(ms.size()), feas(ms.size());
        for (std::size_t i = 0; i < ms.size(); ++i) {
          k.mutable_at(i) = ms[i].k;
          val.mutable_at(i) = ms[i].val;
          feas.mutable_at(i) = ms[i].feas;
        }
        return py::make_tuple(k, val, feas);
      },
      py::arg("trace"), py::arg("f_ref"), py::arg("g0_inf"));

  m.def(
      "fit_rate",
      [](const std::vector<std::int64_t>& k, const std::vector<double>& v, std::int64_t lo, std::int64_t hi,
         double target) {
        if (k.size() != v.size()) throw py::value_error("k and values differ in length");
        std::vector<std::pair<std::int64_t, double>> s;
        for (std::size_t i = 0; i < k.size(); ++i) s.emplace_back(k[i], v[i]);
        return certificate_dict(fit_rate(s, lo, hi, target));
      },
      py::arg("k"), py::arg("values"), py::arg("lo"), py::arg("hi"), py::arg("target"));

  m.def(
      "simulate",
      [](const std::string& kind, std::int64_t horizon, const py::kwargs& kw) {
        SequenceSpec s;
        if (kind == "prop21")
          s.kind = SequenceKind::kProp21;
        else if (kind == "prop22")
          s.kind = SequenceKind::kProp22;
        else
          throw py::value_error("kind must be prop21 or prop22");
        s.horizon = horizon;
        for (auto [key, val] : kw) {
          const auto name = key.cast<std::string>();
          const double x = val.cast<double>();
          if (name == "t1") s.t1 = x;
          else if (name == "t2") s.t2 = x;
          else if (name == "c_tau") s.c_tau = x;
          else if (name == "c_beta") s.c_beta = x;
          else if (name == "eta") s.eta = x;
          else if (name == "mu") s.mu = x;
          else if (name == "s") s.s = x;
          else if (name == "c") s.c = x;
          else if (name == "phi0") s.phi0 = x;
          else throw py::value_error("unknown parameter " + name);
        }
        const SequenceRun r = simulate(s);
        py::dict d = certificate_dict(r.certificate);
        d["phi_final"] = r.phi_final;
        d["spec"] = s.describe();
        return d;
      },
      py::arg("kind"), py::arg("horizon") = 1000000);
}
