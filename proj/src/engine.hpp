#pragma once

#include <vector>

#include "hlpareto/constrained.hpp"

namespace hlpareto::detail {

struct EngineState {
  Vector u;
  Vector pi;
  Vector nu;
};

struct EngineResult {
  EngineState state;
  int iterations = 0;
  SolveStatus status = SolveStatus::max_iterations;
  std::vector<double> residuals;
  std::vector<double> merits;
};

/// The primal-dual iteration shared by the unconstrained and constrained
/// solvers. With k.dim_con() == 0 every constraint term is an exact zero, so
/// the iterates coincide bitwise with the unconstrained scheme.
EngineResult run_primal_dual(const VectorObjective& f, const ConstraintSet& k,
                             const PreferenceFunction& g,
                             const HopfLaxParams& params,
                             const ConstrainedSolverConfig& cfg,
                             EngineState start);

}  // namespace hlpareto::detail
