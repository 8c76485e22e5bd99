#pragma once

#include "hlpareto/constraints.hpp"
#include "hlpareto/solver.hpp"

namespace hlpareto {

enum class SubproblemMode {
  lm_step,             ///< LM step with the active-set preconditioner
  projected_gradient,  ///< inner projected-gradient solve of the u-subproblem
};

/// Settings of the inner projected-gradient solve.
struct InnerSolveOptions {
  double beta = 0.5;  ///< backtracking factor
  double c1 = 1e-4;   ///< Armijo parameter
  int maxit_u = 200;
  /// Stop on the projected gradient norm; the solver tightens it to eps/10.
  double tol_u = 1e-4;
};

struct ConstrainedSolverConfig {
  SolverConfig base;
  double sigma = 0.5;
  double active_threshold = 1e-3;
  SubproblemMode mode = SubproblemMode::lm_step;
  /// Apply the projector after each primal step when one is available.
  bool use_projector = true;
  InnerSolveOptions inner;

  void validate() const;
};

struct ConstrainedSolveResult : SolveResult {
  Vector nu_star;
  double complementarity = 0.0;       ///< max_i |nu_i k_i(u*)|
  double feasibility_violation = 0.0; ///< max(0, -min_i k_i(u*))
};

/// [nu - sigma k]_+
Vector dual_update_nu(const Vector& k_vals, const Vector& nu, double sigma);

/// Jac[l]^T pi - Jac[k]^T nu + mu u - c (x - alpha u).
Vector constrained_residual(const VectorObjective& f, const ConstraintSet& k,
                            const Vector& u, const Vector& pi, const Vector& nu,
                            const HopfLaxParams& params);

/// (mu + alpha c) I + Jac[l]^T Jac[l] + Jac[k]^T W Jac[k] with W_ii = 1 when
/// k_i(u) <= active_threshold and 0 otherwise.
Matrix constrained_preconditioner(const VectorObjective& f,
                                  const ConstraintSet& k, const Vector& u,
                                  const HopfLaxParams& params,
                                  double active_threshold);

/// Merit of the constrained KKT system; the third block measures the
/// multiplier fixed point [nu - sigma k]_+ = nu.
double merit_psi_k(const VectorObjective& f, const ConstraintSet& k,
                   const PreferenceFunction& g, const Vector& u,
                   const Vector& pi, const Vector& nu,
                   const HopfLaxParams& params, double rho, double sigma);

/// Least-squares multiplier estimate on the nearly active set: minimizes
/// |F(u) - Jac[k]_A^T nu_A|_{B(u)^{-1}} over nu_A >= 0, where
/// F(u) = Jac[l]^T pi + mu u - c (x - alpha u). Inactive entries are zero.
Vector multiplier_estimate(const VectorObjective& f, const ConstraintSet& k,
                           const Vector& u, const Vector& pi,
                           const HopfLaxParams& params,
                           double active_threshold);

/// |u - Pi_K(u - F(u))|, the natural residual of the variational inequality
/// <F(u), v - u> >= 0 for all v in K. Needs a projector.
double vi_residual(const VectorObjective& f, const ConstraintSet& k,
                   const Vector& u, const Vector& pi,
                   const HopfLaxParams& params);

/// Constrained primal-dual iteration. The start point must be feasible; by
/// default it is Pi_K(x / max(alpha, 1)).
ConstrainedSolveResult solve_constrained(const VectorObjective& f,
                                         const ConstraintSet& k,
                                         const PreferenceFunction& g,
                                         const HopfLaxParams& params,
                                         const ConstrainedSolverConfig& cfg = {},
                                         const WarmStart& start = {});

}  // namespace hlpareto
