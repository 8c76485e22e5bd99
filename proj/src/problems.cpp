#include "hlpareto/problems.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "hlpareto/errors.hpp"
#include "hlpareto/projection.hpp"

namespace hlpareto::problems {

namespace {

using std::numbers::pi;

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// Anti-diagonal direction (1, ..., -1) with linearly spaced entries. Moving tau
// along it shifts emphasis between objectives; moving along the all-ones
// direction would not, because the softmax is shift invariant.
Vector tradeoff_direction(int n) {
  Vector v(n);
  if (n == 1) return Vector::Ones(1);
  for (int i = 0; i < n; ++i) v(i) = 1.0 - 2.0 * i / (n - 1);
  return v;
}

MooProblem box_problem(std::string id, VectorObjective objective, int d,
                       std::string citation) {
  const Vector lo = Vector::Zero(d);
  const Vector hi = Vector::Ones(d);
  MooProblem p{std::move(id), std::move(objective), ConstraintSet::box(lo, hi),
               Box{lo, hi}, ProblemDefaults{}, std::move(citation)};
  p.defaults.x = Vector::Zero(d);
  const Vector dir = tradeoff_direction(p.objective.dim_obj());
  p.defaults.tau_start = -10.0 * dir;
  p.defaults.tau_end = 10.0 * dir;
  p.defaults.mode = SubproblemMode::lm_step;
  return p;
}

// Objectives of the form h(s(u)) + w r^2(u); the gradient follows from
// ds/du_i = 1/d and dr^2/du_i = 2 (u_i - s)/d.
struct MeanSpreadTerm {
  std::function<double(double)> h;
  std::function<double(double)> dh;
  double spread_weight;
};

VectorObjective mean_spread_objective(int d, std::vector<MeanSpreadTerm> terms) {
  const int n = static_cast<int>(terms.size());
  auto eval = [terms](const Vector& u) {
    const double s = mean_of(u);
    const double r2 = spread_of(u);
    Vector y(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
      y(i) = terms[i].h(s) + terms[i].spread_weight * r2;
    return y;
  };
  auto jac = [terms, d](const Vector& u) {
    const double s = mean_of(u);
    const Vector ds = Vector::Constant(d, 1.0 / d);
    const Vector dr2 = 2.0 * (u.array() - s).matrix() / d;
    Matrix j(terms.size(), d);
    for (std::size_t i = 0; i < terms.size(); ++i)
      j.row(i) = (terms[i].dh(s) * ds + terms[i].spread_weight * dr2).transpose();
    return j;
  };
  return VectorObjective(d, n, eval, jac);
}

std::vector<MeanSpreadTerm> example3_terms(bool five) {
  constexpr double a = 1.0, b = 0.7, gamma1 = 0.1, beta1 = 0.5, beta2 = 0.5;
  std::vector<MeanSpreadTerm> terms = {
      {[](double s) { return s + gamma1 * std::sin(2 * pi * s); },
       [](double s) { return 1.0 + 2 * pi * gamma1 * std::cos(2 * pi * s); },
       beta1},
      {[](double s) {
         const double t = s - 0.5;
         return 1.0 - s + a * t * t * t * t - b * t * t;
       },
       [](double s) {
         const double t = s - 0.5;
         return -1.0 + 4 * a * t * t * t - 2 * b * t;
       },
       beta2}};
  if (five) {
    constexpr double c3 = 0.3, c4 = 0.4, c5 = 0.2, gamma5 = 0.05;
    terms.push_back({[](double s) { return (s - 0.2) * (s - 0.2); },
                     [](double s) { return 2 * (s - 0.2); }, c3});
    terms.push_back({[](double s) { return (s - 0.8) * (s - 0.8); },
                     [](double s) { return 2 * (s - 0.8); }, c4});
    terms.push_back(
        {[](double s) { return 0.5 * s * s + gamma5 * std::sin(4 * pi * s); },
         [](double s) { return s + 4 * pi * gamma5 * std::cos(4 * pi * s); },
         c5});
  }
  return terms;
}

void scale_for_dimension(MooProblem& p, int d) {
  p.defaults.c = 0.1 / d;
  p.defaults.mu = 0.01 / d;
  // c tau spans [-1, 1] as in the two-dimensional examples.
  p.defaults.tau_start *= d;
  p.defaults.tau_end *= d;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, std::function<MooProblem()>>& registry() {
  static std::map<std::string, std::function<MooProblem()>> r;
  return r;
}

}  // namespace

double mean_of(const Vector& u) { return u.mean(); }

double spread_of(const Vector& u) {
  const double s = u.mean();
  return (u.array() - s).square().mean();
}

MooProblem example1() {
  auto eval = [](const Vector& u) { return vec2(-u(0), u(0) + u(1) * u(1)); };
  auto jac = [](const Vector& u) {
    Matrix j(2, 2);
    j << -1.0, 0.0, 1.0, 2.0 * u(1);
    return j;
  };
  auto k_eval = [](const Vector& u) {
    return vec2(-u(0) * u(0) + u(1), -u(0) - 2.0 * u(1) + 3.0);
  };
  auto k_jac = [](const Vector& u) {
    Matrix j(2, 2);
    j << -2.0 * u(0), 1.0, -1.0, -2.0;
    return j;
  };
  auto proj = [](const Vector& u) { return dykstra_project(u, 10, 1e-6); };

  MooProblem p{"ex1",
               VectorObjective(2, 2, eval, jac),
               ConstraintSet(2, 2, k_eval, k_jac, proj, 1e-6),
               Box{vec2(-1.5, 0.0), vec2(1.0, 2.25)},
               ProblemDefaults{},
               "Example 1: constrained semi-algebraic problem"};
  p.defaults.x = Vector::Zero(2);
  p.defaults.tau_start = vec2(-10.0, 10.0);
  p.defaults.tau_end = vec2(10.0, -10.0);
  p.defaults.mode = SubproblemMode::projected_gradient;
  return p;
}

MooProblem example2_case1() {
  constexpr double a = 0.3, b = 1.0, lambda = 0.5;
  auto eval = [](const Vector& u) {
    const double off = u(1) - u(0);
    const double t = u(0) - 0.5;
    return vec2(u(0) + lambda * off * off,
                1.0 - u(0) + a * t * t * t * t - b * t * t + lambda * off * off);
  };
  auto jac = [](const Vector& u) {
    const double off = u(1) - u(0);
    const double t = u(0) - 0.5;
    Matrix j(2, 2);
    j << 1.0 - 2 * lambda * off, 2 * lambda * off,
        -1.0 + 4 * a * t * t * t - 2 * b * t - 2 * lambda * off,
        2 * lambda * off;
    return j;
  };
  return box_problem("ex2a", VectorObjective(2, 2, eval, jac), 2,
                     "Example 2, case 1: nonconvex front");
}

MooProblem example2_case2() {
  constexpr double gamma1 = 0.05, beta1 = 1.0, beta2 = 1.0, eta = 2.0;
  auto eval = [](const Vector& u) {
    const double off = u(1) - u(0);
    const double p = u(0) - 0.25;
    const double q = u(0) - 0.75;
    return vec2(u(0) + gamma1 * std::sin(4 * pi * u(0)) + beta1 * off * off,
                p * p * p * p * q * q + eta * (1.0 - u(0)) + beta2 * off * off);
  };
  auto jac = [](const Vector& u) {
    const double off = u(1) - u(0);
    const double p = u(0) - 0.25;
    const double q = u(0) - 0.75;
    Matrix j(2, 2);
    j << 1.0 + 4 * pi * gamma1 * std::cos(4 * pi * u(0)) - 2 * beta1 * off,
        2 * beta1 * off,
        4 * p * p * p * q * q + 2 * p * p * p * p * q - eta - 2 * beta2 * off,
        2 * beta2 * off;
    return j;
  };
  return box_problem("ex2b", VectorObjective(2, 2, eval, jac), 2,
                     "Example 2, case 2: highly nonconvex front");
}

MooProblem example3_case1(int d) {
  if (d < 2) throw InvalidArgument("example3_case1: d must be >= 2");
  MooProblem p = box_problem("ex3a-d" + std::to_string(d),
                             mean_spread_objective(d, example3_terms(false)), d,
                             "Example 3, case 1: high-dimensional decisions");
  scale_for_dimension(p, d);
  return p;
}

MooProblem example3_case2() {
  constexpr int d = 20;
  MooProblem p = box_problem("ex3b", mean_spread_objective(d, example3_terms(true)),
                             d, "Example 3, case 2: five objectives, d = 20");
  scale_for_dimension(p, d);
  return p;
}

MooProblem by_id(const std::string& id) {
  if (id == "ex1") return example1();
  if (id == "ex2a") return example2_case1();
  if (id == "ex2b") return example2_case2();
  if (id == "ex3b") return example3_case2();
  const std::string prefix = "ex3a-d";
  if (id.rfind(prefix, 0) == 0 && id.size() > prefix.size()) {
    const std::string digits = id.substr(prefix.size());
    if (digits.find_first_not_of("0123456789") == std::string::npos &&
        digits.size() < 7)
      return example3_case1(std::stoi(digits));
  }
  std::lock_guard lock(registry_mutex());
  const auto it = registry().find(id);
  if (it != registry().end()) return it->second();
  throw InvalidArgument("unknown problem id '" + id + "'");
}

std::vector<std::string> known_ids() {
  std::vector<std::string> ids = {"ex1", "ex2a", "ex2b", "ex3a-d<N>", "ex3b"};
  std::lock_guard lock(registry_mutex());
  for (const auto& [id, make] : registry()) ids.push_back(id);
  return ids;
}

void register_problem(const std::string& id, std::function<MooProblem()> make) {
  if (id.empty() || !make) throw InvalidArgument("register_problem: bad entry");
  std::lock_guard lock(registry_mutex());
  registry()[id] = std::move(make);
}

}  // namespace hlpareto::problems
