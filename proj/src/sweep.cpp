#include "hlpareto/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "hlpareto/errors.hpp"

namespace hlpareto {

double TauPath::t(int i) const {
  return n_samples == 1 ? 0.0 : static_cast<double>(i) / (n_samples - 1);
}

Vector TauPath::at(int i) const {
  const double s = t(i);
  return (1.0 - s) * start + s * end;
}

void TauPath::validate(int dim_obj) const {
  if (n_samples < 1) throw InvalidArgument("tau path needs at least one sample");
  if (start.size() != dim_obj || end.size() != dim_obj)
    throw InvalidArgument("tau path endpoints must have one entry per objective");
  require_finite(start, "tau start");
  require_finite(end, "tau end");
}

int ParetoFront::converged_count() const {
  return static_cast<int>(std::count_if(samples.begin(), samples.end(),
                                        [](const FrontSample& s) { return s.converged; }));
}

ConstrainedSolverConfig default_solver_config(const MooProblem& problem) {
  ConstrainedSolverConfig cfg;
  cfg.mode = problem.defaults.mode;
  return cfg;
}

PreferenceFunction default_preference(const MooProblem& problem) {
  return PreferenceFunction::softmax(problem.dim_obj(), problem.defaults.softmax_eps);
}

namespace {

FrontSample solve_one(const MooProblem& problem, const PreferenceFunction& g,
                      const HopfLaxParams& params, const SweepOptions& opts,
                      const WarmStart& start) {
  const ConstraintSet k =
      problem.constraints ? *problem.constraints : ConstraintSet::none(problem.dim_u());
  ConstrainedSolveResult r =
      solve_constrained(problem.objective, k, g, params, opts.solver, start);

  FrontSample s;
  s.tau = params.tau;
  s.u_star = r.u_star;
  s.ell = problem.objective.eval(r.u_star);
  s.pi_star = r.pi_star;
  s.E_bar = r.E_bar;
  s.p_bar = r.p_bar;
  s.nu_star = r.nu_star;
  s.converged = r.converged;
  s.status = r.status;
  s.iterations = r.iterations;
  s.residual = r.final_residual();
  s.initial_merit = r.merit_history.empty() ? 0.0 : r.merit_history.front();
  s.merit = r.final_merit();
  for (std::size_t j = 1; j < r.merit_history.size(); ++j)
    s.max_merit_increase =
        std::max(s.max_merit_increase, r.merit_history[j] - r.merit_history[j - 1]);
  s.feasibility_violation = r.feasibility_violation;
  s.complementarity = r.complementarity;
  if (opts.gap_oracle && r.converged) {
    const GapCertificate cert = evaluate_gap(problem.objective, g, r.u_star,
                                             r.E_bar, r.p_bar, params, opts.gap_oracle);
    s.gap = cert.gap;
    s.bregman_bound = cert.bregman_bound;
  } else {
    s.bregman_bound = 0.5 * params.mu * (r.u_star - r.p_bar / params.mu).squaredNorm();
  }
  if (opts.keep_histories) s.merit_history = std::move(r.merit_history);
  return s;
}

}  // namespace

ParetoFront sweep(const MooProblem& problem, const PreferenceFunction& g,
                  const Vector& x, double alpha, double c, double mu,
                  const TauPath& path, const SweepOptions& opts) {
  path.validate(problem.dim_obj());
  opts.solver.validate();
  if (g.dim_obj() != problem.dim_obj())
    throw InvalidArgument("preference dimension does not match the objectives");
  if (opts.workers < 1) throw InvalidArgument("workers must be at least 1");

  auto params_at = [&](int i) {
    HopfLaxParams p;
    p.x = x;
    p.tau = path.at(i);
    p.alpha = alpha;
    p.c = c;
    p.mu = mu;
    p.validate();
    return p;
  };

  ParetoFront front;
  front.problem_id = problem.id;
  front.samples.resize(path.n_samples);

  if (opts.warm_start || opts.workers == 1) {
    WarmStart ws;
    for (int i = 0; i < path.n_samples; ++i) {
      FrontSample s = solve_one(problem, g, params_at(i), opts, ws);
      s.index = i;
      s.t = path.t(i);
      if (opts.warm_start) {
        ws.u = s.u_star;
        ws.pi = s.pi_star;
        if (s.nu_star.size() > 0) ws.nu = s.nu_star;
      }
      front.samples[i] = std::move(s);
    }
    return front;
  }

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < path.n_samples; i = next++) {
      try {
        FrontSample s = solve_one(problem, g, params_at(i), opts, {});
        s.index = i;
        s.t = path.t(i);
        front.samples[i] = std::move(s);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min(opts.workers, path.n_samples);
  for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return front;
}

ParetoFront sweep_defaults(const MooProblem& problem, int n_samples,
                           SweepOptions opts) {
  opts.solver.mode = problem.defaults.mode;
  const ProblemDefaults& d = problem.defaults;
  return sweep(problem, default_preference(problem), d.x, d.alpha, d.c, d.mu,
               TauPath{d.tau_start, d.tau_end, n_samples}, opts);
}

std::vector<Vector> front_objective_points(const ParetoFront& front,
                                           bool converged_only) {
  std::vector<Vector> out;
  for (const auto& s : front.samples)
    if (!converged_only || s.converged) out.push_back(s.ell);
  return out;
}

}  // namespace hlpareto
