// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hlpareto/constrained.hpp"
#include "hlpareto/errors.hpp"
#include "hlpareto/oracle.hpp"
#include "hlpareto/problems.hpp"
#include "hlpareto/sweep.hpp"

using namespace hlpareto;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

// Every solve made during the run, for the merit-descent audit.
struct MeritRecord {
  std::string problem;
  double max_increase;
  bool converged;
  double initial;
  double final;
};
std::vector<MeritRecord> g_merits;

SweepOptions recording_options() {
  SweepOptions opts;
  opts.keep_histories = true;
  return opts;
}

void record(const ParetoFront& front) {
  for (const auto& s : front.samples)
    g_merits.push_back({front.problem_id, s.max_merit_increase, s.converged,
                        s.initial_merit, s.merit});
}

double nearest_parabola_gap(const Vector& u) { return std::abs(u(1) - u(0) * u(0)); }

Outcome example1_reproduction() {
  const auto ex1 = problems::example1();
  const auto t0 = Clock::now();
  const ParetoFront front = sweep_defaults(ex1, 100, recording_options());
  const double secs = seconds_since(t0);
  record(front);
  const SampleCloud ref = reference_front(ex1, SampleSource::monte_carlo(20000, 7));

  double worst_k = std::numeric_limits<double>::infinity();
  double worst_boundary = 0.0;
  for (const auto& s : front.samples) {
    if (!s.converged) continue;
    worst_k = std::min(worst_k, ex1.constraints->eval(s.u_star).minCoeff());
    worst_boundary = std::max(worst_boundary, nearest_parabola_gap(s.u_star));
  }
  const auto pts = front_objective_points(front);
  const double forward = pts.empty() ? INFINITY : front_distance(pts, ref.points_obj).forward;
  const int conv = front.converged_count();
  Outcome o;
  o.pass = conv >= 90 && worst_k >= -1e-6 && forward <= 0.05 && worst_boundary <= 0.02 &&
           secs <= 5.0;
  o.detail = "converged " + std::to_string(conv) + "/100, min k " + fmt(worst_k) +
             ", forward " + fmt(forward) + ", max |u2-u1^2| " + fmt(worst_boundary) +
             ", " + fmt(secs) + " s";
  return o;
}

Outcome nonconvex_recovery() {
  Outcome o{true, ""};
  for (const char* id : {"ex2a", "ex2b"}) {
    const auto p = problems::by_id(id);
    const auto t0 = Clock::now();
    const ParetoFront front = sweep_defaults(p, 100, recording_options());
    const double secs = seconds_since(t0);
    record(front);
    const SampleCloud ref = reference_front(p, SampleSource::grid(150));
    const auto pts = front_objective_points(front);
    const double forward = pts.empty() ? INFINITY : front_distance(pts, ref.points_obj).forward;
    o.pass = o.pass && forward <= 0.03 && secs <= 5.0;
    o.detail += std::string(id) + ": forward " + fmt(forward) + ", " + fmt(secs) + " s";
    if (std::string(id) == "ex2b") {
      const SampleCloud env = convex_envelope_front(p, 41, ref);
      const int witness = nonconvexity_witness(pts, env.points_obj, 0.05);
      o.pass = o.pass && witness >= 5;
      o.detail += ", witness " + std::to_string(witness);
    } else {
      o.detail += "; ";
    }
  }
  return o;
}

const std::vector<std::string> kBenchmarks = {"ex1",       "ex2a",      "ex2b",
                                              "ex3a-d3",   "ex3a-d10",  "ex3a-d30",
                                              "ex3a-d100", "ex3b"};

Outcome gap_certificate() {
  int checked = 0, bad = 0;
  double worst_low = INFINITY, worst_high = -INFINITY, raw_low = INFINITY;
  std::string first_bad;
  for (const auto& id : kBenchmarks) {
    const auto p = problems::by_id(id);
    const auto g = default_preference(p);
    const SampleCloud cloud = sample_problem(p, SampleSource::monte_carlo(20000, 7));
    ScalarizedMinimumOracle m_oracle(p, g, cloud);
    SweepOptions opts = recording_options();
    opts.gap_oracle = m_oracle.as_function();
    const ParetoFront front = sweep_defaults(p, 100, opts);
    record(front);
    for (const auto& s : front.samples) {
      if (!s.converged || !s.gap) continue;
      ++checked;
      const double excess = *s.gap - s.bregman_bound;
      worst_low = std::min(worst_low, *s.gap);
      worst_high = std::max(worst_high, excess);
      const double raw = g.value(s.ell + s.E_bar) - m_oracle.sampled_minimum(s.E_bar);
      raw_low = std::min(raw_low, raw);
      if (*s.gap < -1e-6 || excess > 1e-6) {
        ++bad;
        if (first_bad.empty()) first_bad = id + "#" + std::to_string(s.index);
      }
    }
  }
  Outcome o;
  o.pass = checked > 0 && bad == 0;
  o.detail = std::to_string(checked - bad) + "/" + std::to_string(checked) +
             " converged solves certified, min gap " + fmt(worst_low) +
             ", max gap - bound " + fmt(worst_high) + " (cloud-only minimum gives min gap " +
             fmt(raw_low) + ")";
  if (!first_bad.empty()) o.detail += ", first violation " + first_bad;
  return o;
}

Outcome merit_descent() {
  int bad_increase = 0, bad_final = 0, converged = 0;
  double worst = 0.0;
  for (const auto& r : g_merits) {
    worst = std::max(worst, r.max_increase);
    if (r.max_increase > 1e-12) ++bad_increase;
    if (!r.converged) continue;
    ++converged;
    const double eps = SolverConfig{}.eps;
    if (r.final > eps * eps * std::max(1.0, r.initial)) ++bad_final;
  }
  Outcome o;
  o.pass = !g_merits.empty() && bad_increase == 0 && bad_final == 0;
  o.detail = std::to_string(g_merits.size()) + " solves, max increase " + fmt(worst) + ", " +
             std::to_string(bad_final) + "/" + std::to_string(converged) +
             " converged solves above the final merit bound";
  return o;
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(1, 500);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> coarse(0, 5);
  const int dims[] = {2, 3, 5};
  int agree = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = size(rng);
    const int dim = dims[t % 3];
    const bool ties = t % 4 == 0;
    SampleCloud cloud;
    for (int i = 0; i < n; ++i) {
      Vector y(dim);
      for (int j = 0; j < dim; ++j) y(j) = ties ? coarse(rng) / 5.0 : unif(rng);
      cloud.points_u.push_back(Vector::Constant(1, i));
      cloud.points_obj.push_back(y);
    }
    const SampleCloud fast = greedy_pareto_filter(cloud);
    const auto slow = all_pairs_pareto_indices(cloud.points_obj);
    std::set<int> a, b;
    for (const auto& u : fast.points_u) a.insert(static_cast<int>(u(0)));
    for (std::size_t i : slow) b.insert(static_cast<int>(i));
    agree += a == b && fast.size() == slow.size();
  }
  return {agree == 200, std::to_string(agree) + "/200 clouds agree"};
}

Outcome closed_form_kkt() {
  const VectorObjective f(
      1, 1, [](const Vector& u) { return u; },
      [](const Vector&) { return Matrix(Matrix::Identity(1, 1)); });
  const auto g = PreferenceFunction::weighted_sum(Vector::Ones(1));
  const HopfLaxParams p{Vector::Ones(1), Vector::Zero(1), 1.0, 1.0, 1.0};
  SolverConfig cfg;
  cfg.eps = 1e-12;
  cfg.maxit_outer = 10;
  const SolveResult within = solve(f, g, p, cfg);
  const double du = std::abs(within.u_star(0));
  const double dp = std::abs(within.p_bar(0) - 1.0);
  const double de = std::abs(within.E_bar(0) - 1.0);
  cfg.maxit_outer = 100;
  int needed = -1;
  {
    SolverConfig probe = cfg;
    for (int it = 1; it <= 100; ++it) {
      probe.maxit_outer = it;
      const SolveResult r = solve(f, g, p, probe);
      if (std::abs(r.u_star(0)) <= 1e-8 && std::abs(r.p_bar(0) - 1.0) <= 1e-8) {
        needed = it;
        break;
      }
    }
  }
  Outcome o;
  o.pass = du <= 1e-8 && dp <= 1e-8 && de <= 1e-8;
  o.detail = "after " + std::to_string(within.iterations) + " iterations |u*| " + fmt(du) +
             ", |p-1| " + fmt(dp) + ", |E-1| " + fmt(de) + "; the 1/3 contraction needs " +
             std::to_string(needed) + " iterations";
  return o;
}

Outcome high_dimensional_scaling() {
  std::map<int, double> times;
  std::string detail;
  bool complete = true;
  for (int d : {3, 10, 30, 100}) {
    const auto p = problems::example3_case1(d);
    const auto t0 = Clock::now();
    const ParetoFront front = sweep_defaults(p, 100, recording_options());
    times[d] = seconds_since(t0);
    record(front);
    complete = complete && front.samples.size() == 100;
    detail += "d=" + std::to_string(d) + " " + fmt(times[d]) + " s (" +
              std::to_string(front.converged_count()) + " conv); ";
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int d : {10, 30, 100}) {
    const double x = std::log(d), y = std::log(times[d]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
  Outcome o;
  o.pass = complete && times[100] <= 600.0 && slope <= 3.5;
  o.detail = detail + "slope " + fmt(slope);
  return o;
}

Outcome five_objective_run() {
  const auto p = problems::example3_case2();
  const auto t0 = Clock::now();
  const ParetoFront front = sweep_defaults(p, 100, recording_options());
  const double secs = seconds_since(t0);
  record(front);
  const int conv = front.converged_count();
  // Collapse points within 1e-9 of an earlier one, then check exactly.
  std::vector<Vector> kept;
  for (const auto& y : front_objective_points(front)) {
    bool dup = false;
    for (const auto& k : kept) dup = dup || (k - y).lpNorm<Eigen::Infinity>() <= 1e-9;
    if (!dup) kept.push_back(y);
  }
  const std::size_t nd = pareto_indices(kept, FilterMode::strong).size();
  Outcome o;
  o.pass = conv >= 80 && nd == kept.size() && secs <= 120.0;
  o.detail = "converged " + std::to_string(conv) + "/100, non-dominated " +
             std::to_string(nd) + "/" + std::to_string(kept.size()) + ", " + fmt(secs) + " s";
  return o;
}

// prox of rho g* for the softmax, computed without the Moreau identity: the
// optimality condition eps (log pi_i + 1) + (pi_i - v_i)/rho = theta is solved
// for each pi_i, and theta is bisected until sum pi = 1.
Vector softmax_conjugate_prox_oracle(const Vector& v, double rho, double eps) {
  auto pi_of = [&](double theta, double vi) {
    // h(p) = eps (log p + 1) + (p - vi)/rho - theta is increasing in p > 0.
    double lo = 0.0, hi = 1.0;
    auto h = [&](double q) { return eps * (std::log(q) + 1) + (q - vi) / rho - theta; };
    while (h(hi) < 0) hi *= 2;
    double q = 0.5 * hi;
    for (int it = 0; it < 200; ++it) {
      const double val = h(q);
      if (val > 0) hi = q; else lo = q;
      double next = q - val / (eps / q + 1 / rho);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - q) <= 1e-17 * std::max(1.0, q)) return next;
      q = next;
    }
    return q;
  };
  auto total = [&](double theta) {
    double s = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += pi_of(theta, v(i));
    return s;
  };
  double lo = -1.0, hi = 1.0;
  while (total(lo) > 1) lo *= 2;
  while (total(hi) < 1) hi *= 2;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) > 1 ? hi : lo) = mid;
  }
  Vector pi(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) pi(i) = pi_of(0.5 * (lo + hi), v(i));
  return pi;
}

Outcome numerical_hygiene() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst_jac = 0.0;
  for (const auto& id : kBenchmarks) {
    const auto p = problems::by_id(id);
    for (int t = 0; t < 20; ++t) {
      Vector u(p.dim_u());
      for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = unif(rng);
      if (id == "ex1") u = Vector(p.feasible_box->lo.array() +
                                  u.array() * (p.feasible_box->hi - p.feasible_box->lo).array());
      worst_jac = std::max(worst_jac, jacobian_check(p.objective, u));
      if (p.constraints) {
        const ConstraintSet& k = *p.constraints;
        const Matrix fd = central_difference_jacobian(
            [&k](const Vector& x) { return k.eval(x); }, u);
        worst_jac = std::max(worst_jac, (fd - k.jacobian(u)).lpNorm<Eigen::Infinity>());
      }
    }
  }

  std::uniform_real_distribution<double> sym(-2.0, 2.0);
  double worst_grad = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = t % 2 ? 2 : 5;
    const auto g = PreferenceFunction::softmax(n, 0.1);
    Vector y(n);
    for (int i = 0; i < n; ++i) y(i) = sym(rng);
    Vector fd(n);
    for (int i = 0; i < n; ++i) {
      Vector a = y, b = y;
      a(i) += 1e-6;
      b(i) -= 1e-6;
      fd(i) = (g.value(a) - g.value(b)) / 2e-6;
    }
    worst_grad = std::max(worst_grad, (fd - g.gradient(y)).lpNorm<Eigen::Infinity>());
  }

  std::uniform_real_distribution<double> wide(-5.0, 5.0);
  std::uniform_real_distribution<double> logrho(std::log(0.01), std::log(10.0));
  double worst_moreau = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = t % 2 ? 2 : 5;
    const double eps = 0.1;
    const auto g = PreferenceFunction::softmax(n, eps);
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = wide(rng);
    const double rho = std::exp(logrho(rng));
    const Vector conj = softmax_conjugate_prox_oracle(v, rho, eps);
    const Vector res = conj + rho * g.prox_scaled(v / rho, rho) - v;
    worst_moreau = std::max(worst_moreau, res.norm());
  }
  Outcome o;
  o.pass = worst_jac <= 1e-5 && worst_grad <= 1e-6 && worst_moreau <= 1e-10;
  o.detail = "max jacobian error " + fmt(worst_jac) + ", softmax gradient error " +
             fmt(worst_grad) + ", Moreau residual " + fmt(worst_moreau);
  return o;
}

Outcome constrained_reduction() {
  const VectorObjective f(
      1, 1, [](const Vector& u) { return u; },
      [](const Vector&) { return Matrix(Matrix::Identity(1, 1)); });
  const auto g = PreferenceFunction::weighted_sum(Vector::Ones(1));
  const HopfLaxParams p{Vector::Ones(1), Vector::Zero(1), 1.0, 1.0, 1.0};
  const double u_opt = 0.0;
  const auto box = ConstraintSet::box(Vector::Constant(1, u_opt - 1e3),
                                      Vector::Constant(1, u_opt + 1e3));
  const auto con = solve_constrained(f, box, g, p);
  const auto unc = solve(f, g, p);
  const double du = std::abs(con.u_star(0) - unc.u_star(0));
  const double nu = con.nu_star.norm();
  return {du <= 1e-8 && nu <= 1e-8 && con.converged && unc.converged,
          "|du*| " + fmt(du) + ", |nu*| " + fmt(nu)};
}

std::set<int> parse_ids(const std::string& text) {
  std::set<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string expect_red, only;
  app.add_option("--expect-red", expect_red,
                 "criteria known to fail; they still print FAIL but do not fail the run");
  app.add_option("--only", only, "run only these criteria, comma separated");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> red = parse_ids(expect_red);
  const std::set<int> selected = parse_ids(only);

  // Criterion 4 audits the solves of the others, so it runs after them.
  const std::vector<Criterion> criteria = {
      {1, "Example 1 reproduction", example1_reproduction},
      {2, "nonconvex front recovery", nonconvex_recovery},
      {3, "scalarization gap certificate", gap_certificate},
      {5, "filter equals all-pairs oracle", oracle_equivalence},
      {6, "closed-form KKT within 10 iterations", closed_form_kkt},
      {7, "high-dimensional scaling", high_dimensional_scaling},
      {8, "five-objective run", five_objective_run},
      {9, "numerical hygiene", numerical_hygiene},
      {10, "constrained/unconstrained reduction", constrained_reduction},
      {4, "merit descent", merit_descent},
  };

  std::map<int, std::pair<std::string, Outcome>> results;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    results[c.id] = {c.name, o};
  }

  bool unexpected = false;
  for (const auto& [id, entry] : results) {
    const auto& [name, o] = entry;
    std::string tag = o.pass ? "PASS" : "FAIL";
    if (!o.pass && red.count(id)) tag += " (expected)";
    if (o.pass && red.count(id)) tag += " (expected red, now passing)";
    std::printf("[%s] criterion %d: %s: %s\n", tag.c_str(), id, name.c_str(),
                o.detail.c_str());
    if (!o.pass && !red.count(id)) unexpected = true;
  }
  return unexpected ? 1 : 0;
}
