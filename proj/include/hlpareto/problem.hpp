#pragma once

#include <optional>
#include <string>

#include "hlpareto/constrained.hpp"
#include "hlpareto/constraints.hpp"
#include "hlpareto/objective.hpp"

namespace hlpareto {

struct Box {
  Vector lo;
  Vector hi;
};

/// Per-problem defaults for the Hopf-Lax parameters, the tau path and the
/// solver mode.
struct ProblemDefaults {
  double alpha = 1.0;
  double c = 0.1;
  double mu = 0.01;
  double softmax_eps = 0.1;
  Vector x;
  Vector tau_start;
  Vector tau_end;
  SubproblemMode mode = SubproblemMode::lm_step;
};

/// A multi-objective problem: objectives, optional constraints, a bounding
/// box used for sampling, and defaults.
struct MooProblem {
  std::string id;
  VectorObjective objective;
  std::optional<ConstraintSet> constraints;
  std::optional<Box> feasible_box;
  ProblemDefaults defaults;
  std::string citation;

  int dim_u() const { return objective.dim_u(); }
  int dim_obj() const { return objective.dim_obj(); }
  bool contains(const Vector& u) const {
    return !constraints || constraints->contains(u);
  }
  /// Defaults as Hopf-Lax parameters at the given tau.
  HopfLaxParams params_at(const Vector& tau) const;
};

}  // namespace hlpareto
