#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hlpareto/constrained.hpp"
#include "hlpareto/preference.hpp"
#include "hlpareto/problem.hpp"
#include "hlpareto/solver.hpp"

namespace hlpareto {

/// Straight path tau(t) = (1 - t) start + t end sampled at n points.
struct TauPath {
  Vector start;
  Vector end;
  int n_samples = 50;

  double t(int i) const;
  Vector at(int i) const;
  void validate(int dim_obj) const;
};

struct FrontSample {
  int index = 0;
  double t = 0.0;
  Vector tau;
  Vector u_star;
  Vector ell;  ///< l(u*)
  Vector pi_star;
  Vector E_bar;
  Vector p_bar;
  Vector nu_star;
  bool converged = false;
  SolveStatus status = SolveStatus::max_iterations;
  int iterations = 0;
  double residual = 0.0;
  double initial_merit = 0.0;
  double merit = 0.0;
  /// Largest one-step increase of the merit along the run (0 if monotone).
  double max_merit_increase = 0.0;
  double feasibility_violation = 0.0;
  double complementarity = 0.0;
  std::optional<double> gap;
  double bregman_bound = 0.0;
  std::vector<double> merit_history;  ///< filled when keep_histories is set
};

struct ParetoFront {
  std::string problem_id;
  std::vector<FrontSample> samples;

  int converged_count() const;
};

struct SweepOptions {
  ConstrainedSolverConfig solver;
  bool warm_start = true;  ///< seed each solve with the previous solution
  int workers = 1;         ///< parallel cold-start solves
  bool keep_histories = false;
  /// When set, every converged sample gets a scalarization gap.
  ScalarizedMinimum gap_oracle;
};

/// Solves the Hopf-Lax problem at every tau on the path. Warm-started sweeps
/// run sequentially; cold-started ones may use several workers.
ParetoFront sweep(const MooProblem& problem, const PreferenceFunction& g,
                  const Vector& x, double alpha, double c, double mu,
                  const TauPath& path, const SweepOptions& opts = {});

/// Sweep with the problem's default parameters, tau path and solver mode.
ParetoFront sweep_defaults(const MooProblem& problem, int n_samples,
                           SweepOptions opts = {});

/// Solver configuration with the problem's default subproblem mode.
ConstrainedSolverConfig default_solver_config(const MooProblem& problem);

/// Default scalarizer: softmax at the problem's temperature.
PreferenceFunction default_preference(const MooProblem& problem);

/// l(u*) of the samples, optionally restricted to converged ones.
std::vector<Vector> front_objective_points(const ParetoFront& front,
                                           bool converged_only = true);

}  // namespace hlpareto
