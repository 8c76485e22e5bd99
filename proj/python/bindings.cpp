#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "hlpareto/errors.hpp"
#include "hlpareto/oracle.hpp"
#include "hlpareto/problems.hpp"
#include "hlpareto/sweep.hpp"

namespace py = pybind11;
using namespace hlpareto;

namespace {

Matrix stack_rows(const std::vector<Vector>& rows, int cols) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(i) = rows[i].transpose();
  return m;
}

std::vector<Vector> split_rows(const Matrix& m) {
  std::vector<Vector> rows;
  rows.reserve(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.emplace_back(m.row(i).transpose());
  return rows;
}

SubproblemMode parse_mode(const std::string& mode) {
  if (mode == "lm") return SubproblemMode::lm_step;
  if (mode == "pg") return SubproblemMode::projected_gradient;
  throw InvalidArgument("mode must be 'lm' or 'pg'");
}

FilterMode parse_filter(const std::string& mode) {
  if (mode == "strong") return FilterMode::strong;
  if (mode == "weak") return FilterMode::weak;
  throw InvalidArgument("filter mode must be 'strong' or 'weak'");
}

struct SolveArgs {
  std::optional<double> alpha, c, mu;
  std::optional<PreferenceFunction> pref;
  std::optional<std::string> mode;
  double eps;
  int maxit;
};

ConstrainedSolverConfig solver_config(const MooProblem& p, const SolveArgs& a) {
  ConstrainedSolverConfig cfg = default_solver_config(p);
  if (a.mode) cfg.mode = parse_mode(*a.mode);
  cfg.base.eps = a.eps;
  cfg.base.maxit_outer = a.maxit;
  return cfg;
}

py::dict solve_problem(const MooProblem& p, const Vector& tau, const SolveArgs& a) {
  HopfLaxParams params = p.params_at(tau);
  if (a.alpha) params.alpha = *a.alpha;
  if (a.c) params.c = *a.c;
  if (a.mu) params.mu = *a.mu;
  const PreferenceFunction g = a.pref ? *a.pref : default_preference(p);
  const ConstraintSet k = p.constraints ? *p.constraints : ConstraintSet::none(p.dim_u());
  ConstrainedSolveResult r;
  {
    py::gil_scoped_release release;
    r = solve_constrained(p.objective, k, g, params, solver_config(p, a));
  }
  py::dict out;
  out["u_star"] = r.u_star;
  out["pi_star"] = r.pi_star;
  out["nu_star"] = r.nu_star;
  out["p_bar"] = r.p_bar;
  out["E_bar"] = r.E_bar;
  out["ell"] = Vector(p.objective.eval(r.u_star));
  out["converged"] = r.converged;
  out["status"] = to_string(r.status);
  out["iterations"] = r.iterations;
  out["residual"] = r.final_residual();
  out["merit"] = r.final_merit();
  out["residual_history"] = r.residual_history;
  out["merit_history"] = r.merit_history;
  out["feasibility_violation"] = r.feasibility_violation;
  out["complementarity"] = r.complementarity;
  return out;
}

py::dict front_to_dict(const MooProblem& p, const ParetoFront& front) {
  const int n = p.dim_obj(), d = p.dim_u();
  std::vector<Vector> tau, u, ell, pi, E;
  std::vector<bool> converged;
  std::vector<std::string> status;
  std::vector<int> iterations;
  std::vector<double> residual, gap, bound;
  for (const auto& s : front.samples) {
    tau.push_back(s.tau);
    u.push_back(s.u_star);
    ell.push_back(s.ell);
    pi.push_back(s.pi_star);
    E.push_back(s.E_bar);
    converged.push_back(s.converged);
    status.push_back(to_string(s.status));
    iterations.push_back(s.iterations);
    residual.push_back(s.residual);
    gap.push_back(s.gap ? *s.gap : std::numeric_limits<double>::quiet_NaN());
    bound.push_back(s.bregman_bound);
  }
  py::dict out;
  out["problem"] = front.problem_id;
  out["tau"] = stack_rows(tau, n);
  out["u"] = stack_rows(u, d);
  out["ell"] = stack_rows(ell, n);
  out["pi"] = stack_rows(pi, n);
  out["E"] = stack_rows(E, n);
  out["converged"] = converged;
  out["status"] = status;
  out["iterations"] = iterations;
  out["residual"] = residual;
  out["gap"] = gap;
  out["bregman_bound"] = bound;
  return out;
}

SampleSource make_source(const MooProblem& p, std::optional<int> grid, std::optional<int> mc,
                         std::uint64_t seed) {
  if (grid && mc) throw InvalidArgument("pass either grid or mc, not both");
  if (grid) return SampleSource::grid(*grid);
  if (mc) return SampleSource::monte_carlo(*mc, seed);
  if (p.id != "ex1" && p.dim_u() == 2) return SampleSource::grid(150);
  return SampleSource::monte_carlo(20000, seed);
}

}  // namespace

PYBIND11_MODULE(_hlpareto, m) {
  m.doc() = "Pareto front tracing with a Hopf-Lax primal-dual solver";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NotDifferentiable>(m, "NotDifferentiable", base.ptr());
  py::register_exception<UnsupportedOperation>(m, "UnsupportedOperation", base.ptr());
  py::register_exception<NumericalFailure>(m, "NumericalFailure", base.ptr());
  py::register_exception<EmptyReference>(m, "EmptyReference", base.ptr());
  py::register_exception<CertificationFailure>(m, "CertificationFailure", base.ptr());

  py::class_<PreferenceFunction>(m, "Preference")
      .def_static("softmax", &PreferenceFunction::softmax, py::arg("dim_obj"),
                  py::arg("eps") = 0.1)
      .def_static("weighted_sum", &PreferenceFunction::weighted_sum, py::arg("weights"))
      .def_static("chebyshev", &PreferenceFunction::chebyshev, py::arg("weights"))
      .def_property_readonly("dim_obj", &PreferenceFunction::dim_obj)
      .def("value", &PreferenceFunction::value, py::arg("y"))
      .def("gradient", &PreferenceFunction::gradient, py::arg("y"))
      .def("prox_scaled", &PreferenceFunction::prox_scaled, py::arg("w"), py::arg("rho"))
      .def("prox_conjugate",
           [](const PreferenceFunction& g, const Vector& v, double rho) {
             return prox_conjugate(g, v, rho);
           },
           py::arg("v"), py::arg("rho"))
      .def("__repr__", &PreferenceFunction::describe);

  py::class_<MooProblem>(m, "Problem")
      .def_readonly("id", &MooProblem::id)
      .def_property_readonly("dim_u", &MooProblem::dim_u)
      .def_property_readonly("dim_obj", &MooProblem::dim_obj)
      .def_property_readonly("dim_con",
                             [](const MooProblem& p) {
                               return p.constraints ? p.constraints->dim_con() : 0;
                             })
      .def("eval", [](const MooProblem& p, const Vector& u) { return p.objective.eval(u); },
           py::arg("u"))
      .def("jacobian",
           [](const MooProblem& p, const Vector& u) { return p.objective.jacobian(u); },
           py::arg("u"))
      .def("constraints",
           [](const MooProblem& p, const Vector& u) {
             return p.constraints ? p.constraints->eval(u) : Vector(0);
           },
           py::arg("u"))
      .def("contains", &MooProblem::contains, py::arg("u"))
      .def_property_readonly("defaults",
                             [](const MooProblem& p) {
                               py::dict d;
                               d["alpha"] = p.defaults.alpha;
                               d["c"] = p.defaults.c;
                               d["mu"] = p.defaults.mu;
                               d["softmax_eps"] = p.defaults.softmax_eps;
                               d["x"] = p.defaults.x;
                               d["tau_start"] = p.defaults.tau_start;
                               d["tau_end"] = p.defaults.tau_end;
                               d["mode"] = p.defaults.mode == SubproblemMode::lm_step ? "lm"
                                                                                      : "pg";
                               return d;
                             })
      .def("__repr__", [](const MooProblem& p) {
        return "<Problem " + p.id + " d=" + std::to_string(p.dim_u()) +
               " N=" + std::to_string(p.dim_obj()) + ">";
      });

  m.def("problem", &problems::by_id, py::arg("id"), "Benchmark problem by id.");
  m.def("problem_ids", &problems::known_ids);

  m.def(
      "solve",
      [](const MooProblem& p, const Vector& tau, std::optional<double> alpha,
         std::optional<double> c, std::optional<double> mu,
         std::optional<PreferenceFunction> pref, std::optional<std::string> mode, double eps,
         int maxit) {
        return solve_problem(p, tau, {alpha, c, mu, pref, mode, eps, maxit});
      },
      py::arg("problem"), py::arg("tau"), py::kw_only(), py::arg("alpha") = py::none(),
      py::arg("c") = py::none(), py::arg("mu") = py::none(), py::arg("pref") = py::none(),
      py::arg("mode") = py::none(), py::arg("eps") = 1e-5, py::arg("maxit") = 100,
      "Single solve at one tau. Unset parameters use the problem defaults.");

  m.def(
      "sweep",
      [](const MooProblem& p, int n, std::optional<Vector> tau_start,
         std::optional<Vector> tau_end, std::optional<PreferenceFunction> pref,
         std::optional<std::string> mode, bool warm_start, int workers, bool gap,
         std::uint64_t seed) {
        const ProblemDefaults& d = p.defaults;
        SweepOptions opts;
        opts.solver = default_solver_config(p);
        if (mode) opts.solver.mode = parse_mode(*mode);
        opts.warm_start = warm_start;
        opts.workers = workers;
        const PreferenceFunction g = pref ? *pref : default_preference(p);
        std::optional<ScalarizedMinimumOracle> oracle;
        ParetoFront front;
        {
          py::gil_scoped_release release;
          if (gap) {
            oracle.emplace(p, g, sample_problem(p, SampleSource::monte_carlo(20000, seed)));
            opts.gap_oracle = oracle->as_function();
          }
          const TauPath path{tau_start ? *tau_start : d.tau_start,
                             tau_end ? *tau_end : d.tau_end, n};
          front = sweep(p, g, d.x, d.alpha, d.c, d.mu, path, opts);
        }
        return front_to_dict(p, front);
      },
      py::arg("problem"), py::arg("n") = 50, py::kw_only(), py::arg("tau_start") = py::none(),
      py::arg("tau_end") = py::none(), py::arg("pref") = py::none(),
      py::arg("mode") = py::none(), py::arg("warm_start") = true, py::arg("workers") = 1,
      py::arg("gap") = false, py::arg("seed") = 7,
      "Trace the front along the tau path. Returns a dict of arrays.");

  m.def(
      "reference_front",
      [](const MooProblem& p, std::optional<int> grid, std::optional<int> mc,
         std::uint64_t seed) {
        SampleCloud cloud;
        {
          py::gil_scoped_release release;
          cloud = reference_front(p, make_source(p, grid, mc, seed));
        }
        return py::make_tuple(stack_rows(cloud.points_u, p.dim_u()),
                              stack_rows(cloud.points_obj, p.dim_obj()));
      },
      py::arg("problem"), py::kw_only(), py::arg("grid") = py::none(),
      py::arg("mc") = py::none(), py::arg("seed") = 7,
      "Filtered sample front as (u, ell) arrays.");

  m.def(
      "convex_envelope",
      [](const MooProblem& p, int n_weights, std::optional<int> grid, std::optional<int> mc,
         std::uint64_t seed) {
        SampleCloud env;
        {
          py::gil_scoped_release release;
          const SampleCloud ref = reference_front(p, make_source(p, grid, mc, seed));
          env = convex_envelope_front(p, n_weights, ref);
        }
        return py::make_tuple(stack_rows(env.points_u, p.dim_u()),
                              stack_rows(env.points_obj, p.dim_obj()));
      },
      py::arg("problem"), py::arg("n_weights") = 41, py::kw_only(),
      py::arg("grid") = py::none(), py::arg("mc") = py::none(), py::arg("seed") = 7);

  m.def(
      "pareto_indices",
      [](const Matrix& points, const std::string& mode) {
        return pareto_indices(split_rows(points), parse_filter(mode));
      },
      py::arg("points"), py::arg("mode") = "strong");

  m.def(
      "dominates",
      [](const Vector& a, const Vector& b, double eps) {
        switch (dominates(a, b, eps)) {
          case Dominance::strict:
            return "strict";
          case Dominance::weak:
            return "weak";
          default:
            return "none";
        }
      },
      py::arg("a"), py::arg("b"), py::arg("eps") = 0.0);

  m.def(
      "front_distance",
      [](const Matrix& a, const Matrix& b) {
        const FrontDistance d = front_distance(split_rows(a), split_rows(b));
        return py::make_tuple(d.forward, d.backward, d.hausdorff);
      },
      py::arg("a"), py::arg("b"), "(forward, backward, hausdorff)");

  m.def(
      "nonconvexity_witness",
      [](const Matrix& front, const Matrix& envelope, double margin) {
        return nonconvexity_witness(split_rows(front), split_rows(envelope), margin);
      },
      py::arg("front"), py::arg("envelope"), py::arg("margin") = 0.05);
}
