#include <cmath>
#include <limits>

#include "doctest.h"
#include "hlpareto/errors.hpp"
#include "hlpareto/oracle.hpp"
#include "hlpareto/problems.hpp"
#include "hlpareto/sweep.hpp"

using namespace hlpareto;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

MooProblem linear_problem() {
  MooProblem p{"linear",
               VectorObjective(
                   1, 1, [](const Vector& u) { return u; },
                   [](const Vector&) { return Matrix(Matrix::Identity(1, 1)); }),
               std::nullopt, std::nullopt, ProblemDefaults{}, "test"};
  p.defaults.x = vec({1});
  p.defaults.alpha = 1.0;
  p.defaults.c = 1.0;
  p.defaults.mu = 1.0;
  p.defaults.tau_start = vec({0});
  p.defaults.tau_end = vec({1});
  return p;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("tau path") {
  const TauPath path{vec({-1, 1}), vec({1, -1}), 5};
  CHECK(path.t(0) == 0.0);
  CHECK(path.t(4) == 1.0);
  CHECK(path.at(2) == vec({0, 0}));
  CHECK_NOTHROW(path.validate(2));
  CHECK_THROWS_AS(path.validate(3), InvalidArgument);
  CHECK_THROWS_AS((TauPath{vec({0}), vec({0}), 0}).validate(1), InvalidArgument);
}

TEST_CASE("single-sample path equals a direct solve") {
  const auto ex2 = problems::example2_case1();
  const auto g = default_preference(ex2);
  const Vector tau = vec({3, -3});
  SweepOptions opts;
  opts.solver = default_solver_config(ex2);
  const ParetoFront front = sweep(ex2, g, ex2.defaults.x, ex2.defaults.alpha, ex2.defaults.c,
                                  ex2.defaults.mu, TauPath{tau, tau, 1}, opts);
  REQUIRE(front.samples.size() == 1);
  const auto direct = solve_constrained(ex2.objective, *ex2.constraints, g,
                                        ex2.params_at(tau), opts.solver);
  CHECK(front.samples[0].u_star == direct.u_star);
  CHECK(front.samples[0].converged == direct.converged);
}

TEST_CASE("linear weighted-sum sweep is tau independent") {
  const MooProblem p = linear_problem();
  const auto g = PreferenceFunction::weighted_sum(vec({1}));
  SweepOptions opts;
  opts.solver.base.eps = 1e-10;
  const ParetoFront front = sweep(p, g, p.defaults.x, 1.0, 1.0, 1.0,
                                  TauPath{p.defaults.tau_start, p.defaults.tau_end, 7}, opts);
  REQUIRE(front.samples.size() == 7);
  for (const auto& s : front.samples) {
    CHECK(s.converged);
    CHECK(std::abs(s.u_star(0)) <= 1e-8);
  }
}

TEST_CASE("example 2 case 1 sweep is mutually non-dominated") {
  const auto ex2 = problems::example2_case1();
  const ParetoFront front = sweep_defaults(ex2, 50);
  CHECK(front.converged_count() >= 45);
  const auto pts = front_objective_points(front);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (i != j) CHECK(dominates(pts[i], pts[j], 1e-6) != Dominance::strict);
}

TEST_CASE("front objective points") {
  ParetoFront empty;
  CHECK(front_objective_points(empty).empty());

  ParetoFront front;
  for (int i = 0; i < 3; ++i) {
    FrontSample s;
    s.index = i;
    s.ell = vec({static_cast<double>(i), 0});
    s.converged = i != 1;
    front.samples.push_back(s);
  }
  const auto pts = front_objective_points(front, true);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0](0) == 0.0);
  CHECK(pts[1](0) == 2.0);
  CHECK(front_objective_points(front, false).size() == 3);
  CHECK(front.converged_count() == 2);
}

TEST_CASE("example 1 sweep stays near the reference front") {
  const auto ex1 = problems::example1();
  const ParetoFront front = sweep_defaults(ex1, 40);
  const SampleCloud ref = reference_front(ex1, SampleSource::monte_carlo(20000, 7));
  const auto pts = front_objective_points(front);
  REQUIRE(!pts.empty());
  for (const auto& y : pts) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& r : ref.points_obj) nearest = std::min(nearest, (r - y).norm());
    CHECK(nearest <= 0.05);
  }
}

TEST_CASE("parallel cold sweeps match sequential cold sweeps") {
  const auto ex2 = problems::example2_case2();
  SweepOptions seq;
  seq.warm_start = false;
  SweepOptions par = seq;
  par.workers = 4;
  const ParetoFront a = sweep_defaults(ex2, 24, seq);
  const ParetoFront b = sweep_defaults(ex2, 24, par);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(b.samples[i].index == static_cast<int>(i));
    CHECK(a.samples[i].u_star == b.samples[i].u_star);
  }
}

TEST_CASE("merit histories are kept on request and never increase") {
  const auto ex1 = problems::example1();
  SweepOptions opts;
  opts.keep_histories = true;
  const ParetoFront front = sweep_defaults(ex1, 10, opts);
  for (const auto& s : front.samples) {
    CHECK(!s.merit_history.empty());
    CHECK(s.max_merit_increase <= 1e-12);
  }
}

}  // TEST_SUITE
