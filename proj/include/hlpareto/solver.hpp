#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hlpareto/objective.hpp"
#include "hlpareto/preference.hpp"
#include "hlpareto/types.hpp"

namespace hlpareto {

/// How the scalarization multiplier pi is refreshed each iteration.
enum class DualUpdate {
  automatic,  ///< gradient for softmax / weighted sum, prox for Chebyshev
  gradient,   ///< pi <- grad g(l(u) + E)
  prox,       ///< pi <- prox_{rho g*}(pi + rho (l(u) + E))
};

struct SolverConfig {
  double rho = 0.5;  ///< dual step for the prox path
  double eta = 1.0;  ///< damping of the primal step, in (0, 1]
  double eps = 1e-5;
  int maxit_outer = 100;
  bool safeguard = true;  ///< backtrack on eta until the merit decreases
  double backtrack_factor = 0.5;
  int max_backtracks = 20;
  DualUpdate dual_update = DualUpdate::automatic;

  void validate() const;
};

enum class SolveStatus {
  converged,
  max_iterations,
  stalled,  ///< the safeguard found no step that decreases the merit
};

std::string to_string(SolveStatus status);

struct SolveResult {
  Vector u_star;
  Vector pi_star;
  Vector p_bar;  ///< c (x - alpha u*)
  Vector E_bar;  ///< c (tau + alpha pi*)
  int iterations = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::max_iterations;
  /// Entry 0 is |r| at the initial point, entry j at iterate j.
  std::vector<double> residual_history;
  /// Entry 0 is the merit at the initial point, entry j at iterate j.
  std::vector<double> merit_history;
  std::optional<double> gap_certificate;

  double final_residual() const {
    return residual_history.empty() ? 0.0 : residual_history.back();
  }
  double final_merit() const {
    return merit_history.empty() ? 0.0 : merit_history.back();
  }
};

/// Optional warm start for any of the primal/dual blocks.
struct WarmStart {
  std::optional<Vector> u;
  std::optional<Vector> pi;
  std::optional<Vector> nu;
};

struct DualStep {
  Vector pi_next;
  Vector E;  ///< c (tau + alpha pi) at the incoming pi
};

/// One dual update of the scalarization multiplier.
DualStep dual_update_pi(const VectorObjective& f, const PreferenceFunction& g,
                        const Vector& u, const Vector& pi,
                        const HopfLaxParams& params, double rho,
                        DualUpdate mode = DualUpdate::automatic);

/// Multiplier consistent with u: the fixed point pi = grad g(l(u) + c (tau +
/// alpha pi)), found by iteration from pi_start. The map contracts when
/// c alpha times the Lipschitz constant of grad g is below one. Needs a
/// differentiable g.
Vector consistent_pi(const VectorObjective& f, const PreferenceFunction& g,
                     const Vector& u, const HopfLaxParams& params,
                     const Vector& pi_start);

/// r(u) = Jac[l](u)^T pi + mu u - c (x - alpha u).
Vector stationarity_residual(const VectorObjective& f, const Vector& u,
                             const Vector& pi, const HopfLaxParams& params);

/// B(u) = (mu + alpha c) I + Jac[l](u)^T Jac[l](u).
Matrix preconditioner(const VectorObjective& f, const Vector& u,
                      const HopfLaxParams& params);

struct PrimalStep {
  Vector u_next;
  double residual_norm = 0.0;  ///< |r(u)| at the incoming u
};

/// Levenberg-Marquardt step u - eta B(u)^{-1} r(u).
PrimalStep primal_update_u(const VectorObjective& f, const Vector& u,
                           const Vector& pi_next, const HopfLaxParams& params,
                           double eta);

/// Merit of the optimality system:
/// 1/2 |r|^2_{B^{-1}} + 1/(2 rho^2) |prox_{rho g*}(pi + rho (l(u) + E)) - pi|^2.
double merit_psi(const VectorObjective& f, const PreferenceFunction& g,
                 const Vector& u, const Vector& pi,
                 const HopfLaxParams& params, double rho);

/// Primal-dual iteration for the unconstrained optimality system. Starts from
/// u = x / max(alpha, 1), pi = 0 unless a warm start is given.
SolveResult solve(const VectorObjective& f, const PreferenceFunction& g,
                  const HopfLaxParams& params, const SolverConfig& cfg = {},
                  const WarmStart& start = {});

/// Estimate of m(E) = inf_u g(l(u) + E); see oracle.hpp for implementations.
using ScalarizedMinimum = std::function<double(const Vector& E)>;

struct GapCertificate {
  double gap = 0.0;           ///< g(l(u*) + E) - m_hat(E)
  double bregman_bound = 0.0; ///< D_R(u*, p_bar / mu)
};

/// Computes the scalarization gap of a converged solve and checks
/// -tol <= gap <= D_R(u*, p_bar/mu) + tol. Throws CertificationFailure when
/// the check fails. Returns the gap.
double certify_gap(const VectorObjective& f, const PreferenceFunction& g,
                   const SolveResult& result, const HopfLaxParams& params,
                   const ScalarizedMinimum& m_oracle, double tol = 1e-6);

/// Same quantities as certify_gap without throwing.
GapCertificate evaluate_gap(const VectorObjective& f,
                            const PreferenceFunction& g, const Vector& u_star,
                            const Vector& E_bar, const Vector& p_bar,
                            const HopfLaxParams& params,
                            const ScalarizedMinimum& m_oracle);

}  // namespace hlpareto
