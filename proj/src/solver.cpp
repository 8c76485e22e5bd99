#include "hlpareto/solver.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "engine.hpp"
#include "hlpareto/errors.hpp"

namespace hlpareto {

void SolverConfig::validate() const {
  if (!(rho > 0.0)) throw InvalidArgument("rho must be > 0");
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("eta must be in (0, 1]");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be > 0");
  if (maxit_outer <= 0) throw InvalidArgument("maxit_outer must be positive");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw InvalidArgument("backtrack_factor must be in (0, 1)");
  if (max_backtracks <= 0) throw InvalidArgument("max_backtracks must be > 0");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::max_iterations:
      return "max_iterations";
    case SolveStatus::stalled:
      return "stalled";
  }
  return "unknown";
}

DualStep dual_update_pi(const VectorObjective& f, const PreferenceFunction& g,
                        const Vector& u, const Vector& pi,
                        const HopfLaxParams& params, double rho,
                        DualUpdate mode) {
  if (!(rho > 0.0)) throw InvalidArgument("dual_update_pi: rho must be > 0");
  DualStep step;
  step.E = params.dual_E(pi);
  const Vector shifted = f.eval(u) + step.E;
  if (mode == DualUpdate::automatic) {
    mode = g.kind() == PreferenceKind::chebyshev ? DualUpdate::prox
                                                 : DualUpdate::gradient;
  }
  if (mode == DualUpdate::gradient && g.differentiable_at(shifted)) {
    step.pi_next = g.gradient(shifted);
  } else {
    step.pi_next = prox_conjugate(g, pi + rho * shifted, rho);
  }
  return step;
}

Vector consistent_pi(const VectorObjective& f, const PreferenceFunction& g,
                     const Vector& u, const HopfLaxParams& params,
                     const Vector& pi_start) {
  if (g.kind() == PreferenceKind::weighted_sum) return g.weights();
  if (g.kind() == PreferenceKind::chebyshev)
    throw NotDifferentiable("consistent_pi needs a differentiable preference");
  const Vector base = f.eval(u) + params.c * params.tau;
  const double ca = params.c * params.alpha;
  Vector pi = pi_start.size() == base.size() ? pi_start
                                             : Vector(g.gradient(base));
  // Plain iteration, then averaged iteration if it has not settled.
  for (int it = 0; it < 4000; ++it) {
    const Vector next = g.gradient(base + ca * pi);
    const double change = (next - pi).lpNorm<Eigen::Infinity>();
    pi = it < 200 ? next : Vector(0.5 * (pi + next));
    if (change <= 1e-15) return pi;
  }
  const double change = (g.gradient(base + ca * pi) - pi).lpNorm<Eigen::Infinity>();
  if (change > 1e-12)
    throw NumericalFailure("consistent_pi: fixed-point iteration did not settle");
  return pi;
}

Vector stationarity_residual(const VectorObjective& f, const Vector& u,
                             const Vector& pi, const HopfLaxParams& params) {
  return f.jacobian(u).transpose() * pi + params.mu * u -
         params.c * (params.x - params.alpha * u);
}

Matrix preconditioner(const VectorObjective& f, const Vector& u,
                      const HopfLaxParams& params) {
  const Matrix jac = f.jacobian(u);
  Matrix B = jac.transpose() * jac;
  B.diagonal().array() += params.curvature_floor();
  return B;
}

PrimalStep primal_update_u(const VectorObjective& f, const Vector& u,
                           const Vector& pi_next, const HopfLaxParams& params,
                           double eta) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw InvalidArgument("primal_update_u: eta must be in (0, 1]");
  const Vector r = stationarity_residual(f, u, pi_next, params);
  const Eigen::LLT<Matrix> llt(preconditioner(f, u, params));
  if (llt.info() != Eigen::Success)
    throw NumericalFailure("primal_update_u: preconditioner is not SPD");
  return {u - eta * llt.solve(r), r.norm()};
}

double merit_psi(const VectorObjective& f, const PreferenceFunction& g,
                 const Vector& u, const Vector& pi,
                 const HopfLaxParams& params, double rho) {
  return merit_psi_k(f, ConstraintSet::none(f.dim_u()), g, u, pi, Vector(0),
                     params, rho, 1.0);
}

SolveResult solve(const VectorObjective& f, const PreferenceFunction& g,
                  const HopfLaxParams& params, const SolverConfig& cfg,
                  const WarmStart& start) {
  ConstrainedSolverConfig full;
  full.base = cfg;
  ConstrainedSolveResult res = solve_constrained(
      f, ConstraintSet::none(f.dim_u()), g, params, full, start);
  return SolveResult(std::move(res));
}

GapCertificate evaluate_gap(const VectorObjective& f,
                            const PreferenceFunction& g, const Vector& u_star,
                            const Vector& E_bar, const Vector& p_bar,
                            const HopfLaxParams& params,
                            const ScalarizedMinimum& m_oracle) {
  GapCertificate cert;
  const QuadraticRegularizer reg = params.regularizer();
  cert.gap = g.value(f.eval(u_star) + E_bar) - m_oracle(E_bar);
  cert.bregman_bound =
      bregman_divergence(reg, u_star, reg.conjugate_gradient(p_bar));
  return cert;
}

double certify_gap(const VectorObjective& f, const PreferenceFunction& g,
                   const SolveResult& result, const HopfLaxParams& params,
                   const ScalarizedMinimum& m_oracle, double tol) {
  if (!result.converged)
    throw InvalidArgument("certify_gap: result did not converge");
  const GapCertificate cert = evaluate_gap(f, g, result.u_star, result.E_bar,
                                           result.p_bar, params, m_oracle);
  const double lower = -tol;
  const double upper = cert.bregman_bound + tol;
  if (cert.gap < lower || cert.gap > upper) {
    std::ostringstream os;
    os.precision(17);
    os << "scalarization gap " << cert.gap << " outside [" << lower << ", "
       << upper << "]";
    throw CertificationFailure(os.str(), cert.gap, lower, upper);
  }
  return cert.gap;
}

}  // namespace hlpareto
