#include "hlpareto/constrained.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "engine.hpp"
#include "hlpareto/errors.hpp"
#include "nnls.hpp"

namespace hlpareto {

void ConstrainedSolverConfig::validate() const {
  base.validate();
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be > 0");
  if (active_threshold < 0.0)
    throw InvalidArgument("active_threshold must be >= 0");
  if (!(inner.beta > 0.0 && inner.beta < 1.0))
    throw InvalidArgument("inner beta must be in (0, 1)");
  if (!(inner.c1 > 0.0 && inner.c1 < 1.0))
    throw InvalidArgument("inner c1 must be in (0, 1)");
  if (inner.maxit_u <= 0) throw InvalidArgument("maxit_u must be positive");
  if (!(inner.tol_u > 0.0)) throw InvalidArgument("tol_u must be > 0");
}

Vector dual_update_nu(const Vector& k_vals, const Vector& nu, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("dual_update_nu: sigma must be > 0");
  if (k_vals.size() != nu.size())
    throw InvalidArgument("dual_update_nu: dimension mismatch");
  return (nu - sigma * k_vals).cwiseMax(0.0);
}

Vector constrained_residual(const VectorObjective& f, const ConstraintSet& k,
                            const Vector& u, const Vector& pi, const Vector& nu,
                            const HopfLaxParams& params) {
  return f.jacobian(u).transpose() * pi - k.jacobian(u).transpose() * nu +
         params.mu * u - params.c * (params.x - params.alpha * u);
}

Matrix constrained_preconditioner(const VectorObjective& f,
                                  const ConstraintSet& k, const Vector& u,
                                  const HopfLaxParams& params,
                                  double active_threshold) {
  if (active_threshold < 0.0)
    throw InvalidArgument("active_threshold must be >= 0");
  Matrix B = preconditioner(f, u, params);
  if (k.dim_con() == 0) return B;
  const Vector kv = k.eval(u);
  const Matrix jk = k.jacobian(u);
  Vector w(kv.size());
  for (Eigen::Index i = 0; i < kv.size(); ++i)
    w(i) = kv(i) <= active_threshold ? 1.0 : 0.0;
  B += jk.transpose() * w.asDiagonal() * jk;
  return B;
}

double merit_psi_k(const VectorObjective& f, const ConstraintSet& k,
                   const PreferenceFunction& g, const Vector& u,
                   const Vector& pi, const Vector& nu,
                   const HopfLaxParams& params, double rho, double sigma) {
  if (!(rho > 0.0) || !(sigma > 0.0))
    throw InvalidArgument("merit: rho and sigma must be > 0");
  const Vector r = constrained_residual(f, k, u, pi, nu, params);
  const Eigen::LLT<Matrix> llt(preconditioner(f, u, params));
  if (llt.info() != Eigen::Success)
    throw NumericalFailure("merit: preconditioner is not SPD");
  const double stationarity = 0.5 * llt.matrixL().solve(r).squaredNorm();

  const Vector E = params.dual_E(pi);
  const Vector moved = prox_conjugate(g, pi + rho * (f.eval(u) + E), rho);
  const double scalarization =
      (moved - pi).squaredNorm() / (2.0 * rho * rho);

  double multiplier = 0.0;
  if (k.dim_con() > 0) {
    const Vector shifted = dual_update_nu(k.eval(u), nu, sigma);
    multiplier = (shifted - nu).squaredNorm() / (2.0 * sigma * sigma);
  }
  return stationarity + scalarization + multiplier;
}

Vector multiplier_estimate(const VectorObjective& f, const ConstraintSet& k,
                           const Vector& u, const Vector& pi,
                           const HopfLaxParams& params,
                           double active_threshold) {
  const int m = k.dim_con();
  Vector nu = Vector::Zero(m);
  if (m == 0) return nu;
  const Vector kv = k.eval(u);
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < m; ++i)
    if (kv(i) <= active_threshold) active.push_back(i);
  if (active.empty()) return nu;

  const Vector F = stationarity_residual(f, u, pi, params);
  const Matrix jk = k.jacobian(u);
  const Eigen::LLT<Matrix> llt(preconditioner(f, u, params));
  if (llt.info() != Eigen::Success)
    throw NumericalFailure("multiplier estimate: preconditioner is not SPD");
  Matrix A(u.size(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t j = 0; j < active.size(); ++j)
    A.col(j) = jk.row(active[j]).transpose();
  const Matrix LA = llt.matrixL().solve(A);
  const Vector Lb = llt.matrixL().solve(F);
  const Vector sub = detail::nonnegative_least_squares(LA, Lb);
  for (std::size_t j = 0; j < active.size(); ++j) nu(active[j]) = sub(j);
  return nu;
}

double vi_residual(const VectorObjective& f, const ConstraintSet& k,
                   const Vector& u, const Vector& pi,
                   const HopfLaxParams& params) {
  const Vector F = stationarity_residual(f, u, pi, params);
  return (u - k.project(u - F)).norm();
}

namespace detail {

namespace {

/// Projected gradient on a smooth phi over K. Away from the constraints the
/// step is preconditioned by the constrained preconditioner B at the start
/// point; otherwise (or when that fails) a spectral projected-gradient step
/// is taken. Armijo backtracking along the segment. Stops once the projected
/// gradient |P(u - grad) - u| is below tol, after at most maxit_u steps.
Vector inner_projected_gradient(const VectorObjective& f, const ConstraintSet& k,
                                const HopfLaxParams& params,
                                const std::function<double(const Vector&)>& phi,
                                const std::function<Vector(const Vector&)>& grad,
                                const Vector& u_start,
                                const ConstrainedSolverConfig& cfg, double tol) {
  const Matrix B = constrained_preconditioner(f, k, u_start, params,
                                              cfg.active_threshold);
  const Eigen::LLT<Matrix> llt(B);
  if (llt.info() != Eigen::Success)
    throw NumericalFailure("inner solve: preconditioner is not SPD");

  const InnerSolveOptions& opt = cfg.inner;
  const int m = k.dim_con();
  Vector u = u_start;
  double phi_u = phi(u);
  Vector gr = grad(u);
  double spectral = 1.0 / B.diagonal().maxCoeff();
  for (int it = 0; it < opt.maxit_u; ++it) {
    if ((k.project(u - gr) - u).norm() <= tol) break;
    std::vector<Vector> dirs;
    if (m == 0 || k.eval(u).minCoeff() > cfg.active_threshold)
      dirs.push_back(-llt.solve(gr));
    dirs.push_back(-spectral * gr);

    std::optional<Vector> next;
    for (const Vector& dir : dirs) {
      const Vector d = k.project(u + dir) - u;
      const double slope = gr.dot(d);
      if (!(slope < 0.0)) continue;
      double t = 1.0;
      for (int bt = 0; bt < 60; ++bt, t *= opt.beta) {
        Vector trial = u + t * d;
        const double phi_trial = phi(trial);
        if (phi_trial <= phi_u + opt.c1 * t * slope) {
          next = std::move(trial);
          phi_u = phi_trial;
          break;
        }
      }
      if (next) break;
    }
    if (!next) break;
    const Vector step = *next - u;
    const Vector g_next = grad(*next);
    const double sy = step.dot(g_next - gr);
    spectral = sy > 0.0 ? std::clamp(step.squaredNorm() / sy, 1e-10, 1e10)
                        : std::min(1e10, 2.0 * spectral);
    u = std::move(*next);
    gr = g_next;
    if (step.norm() <= 1e-15 * (1.0 + u.norm())) break;
  }
  return u;
}

struct Trial {
  EngineState state;
  double merit = 0.0;
};

}  // namespace

EngineResult run_primal_dual(const VectorObjective& f, const ConstraintSet& k,
                             const PreferenceFunction& g,
                             const HopfLaxParams& params,
                             const ConstrainedSolverConfig& cfg,
                             EngineState z) {
  const SolverConfig& base = cfg.base;
  const int m = k.dim_con();
  const bool projected = m > 0 && cfg.use_projector && k.has_projector();
  const bool inner_mode = cfg.mode == SubproblemMode::projected_gradient;
  if (inner_mode && !k.has_projector())
    throw UnsupportedOperation("projected_gradient mode needs a projector onto K");
  // With a differentiable g the multiplier is kept consistent with u and the
  // inner problem sees E through it.
  const bool coupled = g.kind() != PreferenceKind::chebyshev &&
                       base.dual_update != DualUpdate::prox;
  const double floor = params.curvature_floor();

  auto merit = [&](const EngineState& s) {
    return merit_psi_k(f, k, g, s.u, s.pi, s.nu, params, base.rho, cfg.sigma);
  };
  auto estimate_nu = [&](const Vector& u, const Vector& pi) {
    return multiplier_estimate(f, k, u, pi, params, cfg.active_threshold);
  };

  // Minimizer over K of the u-subproblem, started at u0. Coupled:
  // g(l(u) + E(pi(u))) - c alpha/2 |pi(u)|^2 + floor/2 |u|^2 - c<x, u>, whose
  // gradient is Jac[l]^T pi(u) + floor u - c x. Otherwise E is frozen at E0.
  auto inner_solution = [&](const Vector& u0, const Vector& pi0,
                            const Vector& E0) {
    std::function<double(const Vector&)> phi;
    std::function<Vector(const Vector&)> grad;
    auto pi_warm = std::make_shared<Vector>(pi0);
    if (coupled) {
      phi = [&, pi_warm](const Vector& u) {
        *pi_warm = consistent_pi(f, g, u, params, *pi_warm);
        const double ca = params.c * params.alpha;
        return g.value(f.eval(u) + params.dual_E(*pi_warm)) -
               0.5 * ca * pi_warm->squaredNorm() +
               0.5 * floor * u.squaredNorm() - params.c * params.x.dot(u);
      };
      grad = [&, pi_warm](const Vector& u) -> Vector {
        *pi_warm = consistent_pi(f, g, u, params, *pi_warm);
        return f.jacobian(u).transpose() * *pi_warm + floor * u -
               params.c * params.x;
      };
    } else {
      phi = [&, E0](const Vector& u) {
        return g.value(f.eval(u) + E0) + 0.5 * floor * u.squaredNorm() -
               params.c * params.x.dot(u);
      };
      grad = [&, E0](const Vector& u) -> Vector {
        return f.jacobian(u).transpose() * g.gradient(f.eval(u) + E0) +
               floor * u - params.c * params.x;
      };
    }
    return inner_projected_gradient(f, k, params, phi, grad, u0, cfg,
                                    std::min(cfg.inner.tol_u, 0.1 * base.eps));
  };

  EngineResult out;
  double psi = merit(z);
  const double psi0 = psi;
  out.merits.push_back(psi);
  out.residuals.push_back(
      constrained_residual(f, k, z.u, z.pi, z.nu, params).norm());
  const double merit_target = base.eps * base.eps * std::max(1.0, psi0);

  for (int j = 0; j < base.maxit_outer; ++j) {
    DualStep dual =
        dual_update_pi(f, g, z.u, z.pi, params, base.rho, base.dual_update);
    if (inner_mode && coupled)
      dual.pi_next = consistent_pi(f, g, z.u, params, dual.pi_next);
    Vector nu_hat = z.nu;
    if (m > 0) {
      nu_hat = projected ? estimate_nu(z.u, dual.pi_next)
                         : dual_update_nu(k.eval(z.u), z.nu, cfg.sigma);
    }

    // Trials move along the segment towards an inner solution, which stays
    // in K by convexity; the multipliers follow u.
    auto segment_trial = [&](const Vector& target, double step) {
      Trial t;
      t.state.u = z.u + step * (target - z.u);
      t.state.pi = coupled ? consistent_pi(f, g, t.state.u, params, dual.pi_next)
                           : dual.pi_next;
      t.state.nu = m > 0 ? estimate_nu(t.state.u, t.state.pi) : nu_hat;
      if (!t.state.u.allFinite() || !t.state.pi.allFinite())
        throw NumericalFailure("non-finite iterate");
      t.merit = merit(t.state);
      return t;
    };

    std::optional<Vector> u_inner;
    if (inner_mode)
      u_inner = inner_solution(z.u, dual.pi_next, params.dual_E(dual.pi_next));
    std::optional<Eigen::LLT<Matrix>> lm_factor;
    if (!inner_mode) {
      lm_factor.emplace(constrained_preconditioner(f, k, z.u, params,
                                                   cfg.active_threshold));
      if (lm_factor->info() != Eigen::Success)
        throw NumericalFailure("preconditioner is not SPD");
    }

    auto make_trial = [&](double step, double dual_weight) {
      if (inner_mode) return segment_trial(*u_inner, step);
      Trial t;
      if (dual_weight == 1.0) {
        t.state.pi = dual.pi_next;
        t.state.nu = nu_hat;
      } else {
        t.state.pi = z.pi + dual_weight * (dual.pi_next - z.pi);
        t.state.nu = z.nu + dual_weight * (nu_hat - z.nu);
      }
      const Vector r =
          constrained_residual(f, k, z.u, t.state.pi, t.state.nu, params);
      t.state.u = z.u - step * lm_factor->solve(r);
      if (projected) {
        t.state.u = k.project(t.state.u);
        t.state.nu = estimate_nu(t.state.u, t.state.pi);
      }
      if (!t.state.u.allFinite() || !t.state.pi.allFinite())
        throw NumericalFailure("non-finite iterate");
      t.merit = merit(t.state);
      return t;
    };

    std::optional<Trial> accepted;
    double step = base.eta;
    for (int bt = 0; bt <= base.max_backtracks; ++bt) {
      Trial t = make_trial(step, 1.0);
      if (!base.safeguard || t.merit <= psi) {
        accepted = std::move(t);
        break;
      }
      step *= base.backtrack_factor;
    }
    // The dual step is not damped by eta; when damping the primal step alone
    // cannot restore descent, damp the whole primal-dual step.
    if (!accepted && !(inner_mode && coupled)) {
      double weight = 1.0;
      for (int bt = 0; bt < base.max_backtracks; ++bt) {
        weight *= base.backtrack_factor;
        Trial t = make_trial(base.eta * weight, weight);
        if (t.merit <= psi) {
          accepted = std::move(t);
          break;
        }
      }
    }
    // Where l has negative curvature the LM direction can increase the merit
    // for every damping; fall back to an inner solve of the u-subproblem.
    if (!accepted && !inner_mode && k.has_projector()) {
      const Vector target =
          inner_solution(z.u, dual.pi_next, params.dual_E(dual.pi_next));
      double s = base.eta;
      for (int bt = 0; bt <= base.max_backtracks; ++bt, s *= base.backtrack_factor) {
        Trial t = segment_trial(target, s);
        if (t.merit <= psi) {
          accepted = std::move(t);
          break;
        }
      }
    }
    if (!accepted) {
      // No step decreases the merit. If the current point already passes the
      // test against the proposed update, it is a solution up to rounding.
      const Trial t = make_trial(base.eta, 1.0);
      const double res = out.residuals.back();
      const bool settled =
          (t.state.pi - z.pi).norm() <= base.eps &&
          (m == 0 || (t.state.nu - z.nu).norm() <= base.eps);
      out.status = res <= base.eps && psi <= merit_target && settled
                       ? SolveStatus::converged
                       : SolveStatus::stalled;
      break;
    }

    const double d_pi = (accepted->state.pi - z.pi).norm();
    const double d_nu = m > 0 ? (accepted->state.nu - z.nu).norm() : 0.0;
    z = std::move(accepted->state);
    psi = accepted->merit;
    const double res =
        constrained_residual(f, k, z.u, z.pi, z.nu, params).norm();
    out.residuals.push_back(res);
    out.merits.push_back(psi);
    out.iterations = j + 1;
    if (res <= base.eps && d_pi <= base.eps && d_nu <= base.eps &&
        psi <= merit_target) {
      out.status = SolveStatus::converged;
      break;
    }
  }
  out.state = std::move(z);
  return out;
}

}  // namespace detail

ConstrainedSolveResult solve_constrained(const VectorObjective& f,
                                         const ConstraintSet& k,
                                         const PreferenceFunction& g,
                                         const HopfLaxParams& params,
                                         const ConstrainedSolverConfig& cfg,
                                         const WarmStart& start) {
  cfg.validate();
  params.validate();
  const int d = f.dim_u();
  const int n = f.dim_obj();
  const int m = k.dim_con();
  if (params.x.size() != d || params.tau.size() != n || g.dim_obj() != n ||
      k.dim_u() != d)
    throw InvalidArgument("solve: inconsistent dimensions");

  detail::EngineState z;
  z.u = start.u ? *start.u : Vector(params.x / std::max(params.alpha, 1.0));
  if (z.u.size() != d) throw InvalidArgument("solve: warm start u has wrong size");
  if (m > 0 && !k.contains(z.u)) {
    if (!k.has_projector())
      throw InvalidArgument("solve: infeasible start and no projector");
    z.u = k.project(z.u);
  }
  z.pi = start.pi ? *start.pi : Vector(Vector::Zero(n));
  z.nu = start.nu ? *start.nu : Vector(Vector::Zero(m));
  if (z.pi.size() != n || z.nu.size() != m)
    throw InvalidArgument("solve: warm start has wrong size");

  detail::EngineResult run = detail::run_primal_dual(f, k, g, params, cfg, z);

  ConstrainedSolveResult res;
  res.u_star = std::move(run.state.u);
  res.pi_star = std::move(run.state.pi);
  res.nu_star = std::move(run.state.nu);
  res.p_bar = params.dual_p(res.u_star);
  res.E_bar = params.dual_E(res.pi_star);
  res.iterations = run.iterations;
  res.status = run.status;
  res.converged = run.status == SolveStatus::converged;
  res.residual_history = std::move(run.residuals);
  res.merit_history = std::move(run.merits);
  if (m > 0) {
    const Vector kv = k.eval(res.u_star);
    res.complementarity = res.nu_star.cwiseProduct(kv).cwiseAbs().maxCoeff();
    res.feasibility_violation = std::max(0.0, -kv.minCoeff());
  }
  return res;
}

}  // namespace hlpareto
