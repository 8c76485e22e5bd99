#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "hlpareto/errors.hpp"
#include "hlpareto/oracle.hpp"
#include "hlpareto/problems.hpp"
#include "hlpareto/solver.hpp"
#include "hlpareto/sweep.hpp"

using namespace hlpareto;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

VectorObjective identity1() {
  return VectorObjective(
      1, 1, [](const Vector& u) { return u; },
      [](const Vector&) { return Matrix(Matrix::Identity(1, 1)); });
}

HopfLaxParams scalar_params(double x) {
  return HopfLaxParams{vec({x}), vec({0}), 1.0, 1.0, 1.0};
}

Matrix inverse2(const Matrix& m) {
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Matrix inv(2, 2);
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv / det;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("dual update") {
  const auto f = identity1();
  const auto p = scalar_params(1.0);
  const Vector lam = vec({1.0});
  CHECK(dual_update_pi(f, PreferenceFunction::weighted_sum(lam), vec({3}), vec({0.2}), p, 0.5)
            .pi_next == lam);
  CHECK(dual_update_pi(f, PreferenceFunction::softmax(1, 0.1), vec({3}), vec({0.2}), p, 0.5)
            .pi_next(0) == doctest::Approx(1.0));

  const auto ex2 = problems::example2_case1();
  // At u = (0.5, 0.5) both objectives equal 0.5, so l(u) + E is symmetric for
  // a symmetric tau and pi.
  HopfLaxParams q = ex2.params_at(vec({0, 0}));
  const Vector pi = dual_update_pi(ex2.objective, PreferenceFunction::softmax(2, 0.1),
                                   vec({0.5, 0.5}), vec({0.5, 0.5}), q, 0.5)
                        .pi_next;
  CHECK(pi(0) == doctest::Approx(0.5));
  CHECK(pi(1) == doctest::Approx(0.5));

  const DualStep step = dual_update_pi(ex2.objective, PreferenceFunction::softmax(2, 0.1),
                                       vec({0.5, 0.5}), vec({0.25, 0.75}), q, 0.5);
  CHECK((step.E - q.c * (q.tau + q.alpha * vec({0.25, 0.75}))).norm() < 1e-15);
}

TEST_CASE("stationarity residual") {
  const auto f = identity1();
  auto p = scalar_params(1.0);
  CHECK(stationarity_residual(f, vec({0}), vec({1}), p)(0) == 0.0);
  CHECK(stationarity_residual(f, vec({1}), vec({1}), p)(0) == 2.0);

  const auto ex2 = problems::example2_case1();
  HopfLaxParams q{vec({0, 0}), vec({0, 0}), 1.0, 0.1, 0.01};
  const Vector u = vec({0.5, 0.5});
  const Vector pi = vec({0.5, 0.5});
  // Straight-line assembly: at the diagonal midpoint off = 0 and t = 0, so
  // the Jacobian is [[1, 0], [-1, 0]].
  const Vector expected = vec({0.5 * 1 + 0.5 * -1 + 0.01 * 0.5 + 0.1 * 0.5,
                               0.0 + 0.01 * 0.5 + 0.1 * 0.5});
  CHECK((stationarity_residual(ex2.objective, u, pi, q) - expected).norm() < 1e-15);
}

TEST_CASE("primal step") {
  const auto f = identity1();
  const auto p = scalar_params(1.0);
  CHECK(preconditioner(f, vec({1}), p)(0, 0) == 3.0);
  const PrimalStep s = primal_update_u(f, vec({1}), vec({1}), p, 1.0);
  CHECK(s.residual_norm == 2.0);
  CHECK(s.u_next(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(primal_update_u(f, vec({0}), vec({1}), p, 1.0).u_next(0) == 0.0);
  CHECK_THROWS_AS(primal_update_u(f, vec({0}), vec({1}), p, 1.5), InvalidArgument);

  const auto ex1 = problems::example1();
  const HopfLaxParams q = ex1.params_at(vec({0, 0}));
  const Vector u = vec({0.5, 0.25});
  const Vector pi = vec({0.3, 0.7});
  const Matrix J = ex1.objective.jacobian(u);
  Matrix B = J.transpose() * J;
  B(0, 0) += q.mu + q.alpha * q.c;
  B(1, 1) += q.mu + q.alpha * q.c;
  const Vector r = stationarity_residual(ex1.objective, u, pi, q);
  const Vector expected = u - inverse2(B) * r;
  CHECK((primal_update_u(ex1.objective, u, pi, q, 1.0).u_next - expected).norm() < 1e-12);
}

TEST_CASE("merit function") {
  const auto f = identity1();
  const auto g = PreferenceFunction::weighted_sum(vec({1}));
  CHECK(merit_psi(f, g, vec({0}), vec({1}), scalar_params(1.0), 0.5) ==
        doctest::Approx(0.0).epsilon(1e-15));
  // pi outside the conjugate domain {1} is moved by the prox block.
  CHECK(merit_psi(f, g, vec({0}), vec({0.4}), scalar_params(1.0), 0.5) > 0.0);

  const auto ex2 = problems::example2_case1();
  const auto sm = PreferenceFunction::softmax(2, 0.1);
  const HopfLaxParams q = ex2.params_at(vec({0.3, -0.3}));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const Vector u = vec({unif(rng), unif(rng)});
    const double a = unif(rng);
    const Vector pi = vec({a, 1 - a});
    const double rho = 0.5;
    const Matrix J = ex2.objective.jacobian(u);
    Matrix B = J.transpose() * J;
    B.diagonal().array() += q.mu + q.alpha * q.c;
    const Vector r = J.transpose() * pi + q.mu * u - q.c * (q.x - q.alpha * u);
    const Vector E = q.c * (q.tau + q.alpha * pi);
    const Vector moved = prox_conjugate(sm, pi + rho * (ex2.objective.eval(u) + E), rho);
    const double expected = 0.5 * r.dot(inverse2(B) * r) +
                            (moved - pi).squaredNorm() / (2 * rho * rho);
    CHECK(merit_psi(ex2.objective, sm, u, pi, q, rho) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("scalar closed form") {
  const auto f = identity1();
  const auto g = PreferenceFunction::weighted_sum(vec({1}));
  const SolveResult res = solve(f, g, scalar_params(1.0));
  CHECK(res.converged);
  CHECK(std::abs(res.u_star(0)) < 1e-5);
  CHECK(res.pi_star(0) == 1.0);
  CHECK(res.p_bar(0) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(res.E_bar(0) == 1.0);
  // Entry 0 is taken with the initial pi = 0; from then on the
  // preconditioned step contracts the residual by exactly 1/3.
  REQUIRE(res.residual_history.size() >= 3);
  for (std::size_t i = 2; i < res.residual_history.size(); ++i)
    CHECK(res.residual_history[i] / res.residual_history[i - 1] ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(res.iterations == 12);

  const SolveResult shifted = solve(f, g, scalar_params(0.0));
  CHECK(shifted.converged);
  CHECK(shifted.u_star(0) == doctest::Approx(-0.5).epsilon(1e-5));
  CHECK(shifted.p_bar(0) == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(shifted.E_bar(0) == 1.0);
}

TEST_CASE("tight tolerance reaches the closed form") {
  const auto f = identity1();
  SolverConfig cfg;
  cfg.eps = 1e-12;
  const SolveResult res =
      solve(f, PreferenceFunction::weighted_sum(vec({1})), scalar_params(1.0), cfg);
  CHECK(res.converged);
  CHECK(std::abs(res.u_star(0)) <= 1e-8);
  CHECK(std::abs(res.p_bar(0) - 1.0) <= 1e-8);
}

TEST_CASE("non-convergence is reported, not thrown") {
  const auto f = identity1();
  SolverConfig cfg;
  cfg.maxit_outer = 2;
  const SolveResult res =
      solve(f, PreferenceFunction::weighted_sum(vec({1})), scalar_params(1.0), cfg);
  CHECK_FALSE(res.converged);
  CHECK(res.status == SolveStatus::max_iterations);
}

TEST_CASE("NaN objectives raise a numerical failure") {
  const VectorObjective bad(
      1, 1,
      [](const Vector&) { return Vector(Vector::Constant(1, std::nan(""))); },
      [](const Vector&) { return Matrix(Matrix::Identity(1, 1)); });
  CHECK_THROWS_AS(
      solve(bad, PreferenceFunction::softmax(1, 0.1), scalar_params(1.0)), Error);
}

TEST_CASE("example 2 case 1 solve at a fixed tau") {
  const auto ex2 = problems::example2_case1();
  const auto g = default_preference(ex2);
  const HopfLaxParams q = ex2.params_at(vec({2, -2}));
  const auto res =
      solve_constrained(ex2.objective, *ex2.constraints, g, q, default_solver_config(ex2));
  REQUIRE(res.converged);
  CHECK(res.final_merit() <= 1e-10 * std::max(1.0, res.merit_history.front()));

  const SampleCloud ref = reference_front(ex2, SampleSource::grid(150));
  const Vector y = ex2.objective.eval(res.u_star);
  for (const auto& r : ref.points_obj)
    CHECK(dominates(r, y, 0.02) != Dominance::strict);
}

TEST_CASE("gap certificate") {
  const auto f = identity1();
  const auto g = PreferenceFunction::weighted_sum(vec({1}));
  const auto p = scalar_params(1.0);
  const SolveResult res = solve(f, g, p);
  // With m equal to the attained value the gap vanishes; the bound is
  // D_R(u*, p/mu) = mu/2 |u* - p/mu|^2 with u* = 0 and p = 1.
  auto attained = [&](const Vector& E) { return g.value(f.eval(res.u_star) + E); };
  const GapCertificate cert =
      evaluate_gap(f, g, res.u_star, res.E_bar, res.p_bar, p, attained);
  CHECK(cert.gap == 0.0);
  CHECK(cert.bregman_bound == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(certify_gap(f, g, res, p, attained) == 0.0);
  auto too_low = [&](const Vector& E) { return attained(E) - 10.0; };
  CHECK_THROWS_AS(certify_gap(f, g, res, p, too_low), CertificationFailure);
  auto too_high = [&](const Vector& E) { return attained(E) + 1.0; };
  try {
    certify_gap(f, g, res, p, too_high);
    FAIL("expected a certification failure");
  } catch (const CertificationFailure& e) {
    CHECK(e.gap() == doctest::Approx(-1.0));
    CHECK(e.lower() == -1e-6);
  }
}

TEST_CASE("example 2 case 2 gap holds along a sweep") {
  const auto ex2b = problems::example2_case2();
  const auto g = default_preference(ex2b);
  ScalarizedMinimumOracle m_oracle(ex2b, g,
                                   sample_problem(ex2b, SampleSource::monte_carlo(20000, 7)));
  SweepOptions opts;
  opts.gap_oracle = m_oracle.as_function();
  const ParetoFront front = sweep_defaults(ex2b, 20, opts);
  for (const auto& s : front.samples) {
    if (!s.converged) continue;
    REQUIRE(s.gap.has_value());
    CHECK(*s.gap >= -1e-6);
    CHECK(*s.gap <= s.bregman_bound + 1e-6);
  }
}

}  // TEST_SUITE
