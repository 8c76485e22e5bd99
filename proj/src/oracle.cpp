#include "hlpareto/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "hlpareto/errors.hpp"

namespace hlpareto {

Dominance dominates(const Vector& a, const Vector& b, double eps) {
  if (a.size() != b.size()) throw InvalidArgument("dominates: size mismatch");
  bool all_strict = true, all_le = true, some_lt = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const bool lt = a(i) < b(i) - eps;
    all_strict = all_strict && lt;
    all_le = all_le && a(i) <= b(i) + eps;
    some_lt = some_lt || lt;
  }
  if (a.size() > 0 && all_strict) return Dominance::strict;
  if (all_le && some_lt) return Dominance::weak;
  return Dominance::none;
}

std::vector<std::size_t> all_pairs_pareto_indices(
    const std::vector<Vector>& points, FilterMode mode) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      if (i == j) continue;
      const Dominance d = dominates(points[j], points[i]);
      dominated = mode == FilterMode::strong ? d != Dominance::none
                                             : d == Dominance::strict;
    }
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

namespace {

std::vector<std::size_t> planar_pareto_indices(const std::vector<Vector>& pts,
                                               FilterMode mode) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a](0) != pts[b](0)) return pts[a](0) < pts[b](0);
    return pts[a](1) < pts[b](1);
  });

  std::vector<std::size_t> keep;
  const double inf = std::numeric_limits<double>::infinity();
  if (mode == FilterMode::strong) {
    // Lexicographic order: a point survives if its second coordinate beats
    // everything before it, or it duplicates the last survivor.
    double best = inf;
    const Vector* last = nullptr;
    for (std::size_t idx : order) {
      const Vector& p = pts[idx];
      if (p(1) < best) {
        keep.push_back(idx);
        best = p(1);
        last = &p;
      } else if (last && p == *last) {
        keep.push_back(idx);
      }
    }
  } else {
    // Strictly dominated iff some point with a strictly smaller first
    // coordinate also has a strictly smaller second one.
    double best_before = inf;
    std::size_t g = 0;
    while (g < order.size()) {
      std::size_t h = g;
      double group_min = inf;
      while (h < order.size() && pts[order[h]](0) == pts[order[g]](0)) {
        group_min = std::min(group_min, pts[order[h]](1));
        ++h;
      }
      for (std::size_t k = g; k < h; ++k)
        if (!(best_before < pts[order[k]](1))) keep.push_back(order[k]);
      best_before = std::min(best_before, group_min);
      g = h;
    }
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

}  // namespace

std::vector<std::size_t> pareto_indices(const std::vector<Vector>& points,
                                        FilterMode mode) {
  if (points.empty()) return {};
  const auto n = points.front().size();
  for (const auto& p : points) {
    if (p.size() != n) throw InvalidArgument("pareto_indices: ragged points");
    require_finite(p, "pareto_indices");
  }
  if (n == 2) return planar_pareto_indices(points, mode);
  return all_pairs_pareto_indices(points, mode);
}

SampleCloud greedy_pareto_filter(const SampleCloud& cloud, FilterMode mode) {
  SampleCloud out;
  out.source = cloud.source;
  for (std::size_t i : pareto_indices(cloud.points_obj, mode)) {
    out.points_u.push_back(cloud.points_u[i]);
    out.points_obj.push_back(cloud.points_obj[i]);
  }
  return out;
}

SampleCloud sample_problem(const MooProblem& problem,
                           const SampleSource& source) {
  if (!problem.feasible_box)
    throw InvalidArgument("problem '" + problem.id + "' has no sampling box");
  const Vector& lo = problem.feasible_box->lo;
  const Vector& hi = problem.feasible_box->hi;
  const int d = problem.dim_u();

  SampleCloud cloud;
  cloud.source = source;
  auto add = [&](const Vector& u) {
    if (!problem.contains(u)) return;
    cloud.points_u.push_back(u);
    cloud.points_obj.push_back(problem.objective.eval(u));
  };

  if (source.kind == SampleSource::Kind::grid) {
    if (source.resolution < 2)
      throw InvalidArgument("grid resolution must be at least 2");
    const double total = std::pow(static_cast<double>(source.resolution), d);
    if (total > 2e7)
      throw InvalidArgument("grid of " + std::to_string(source.resolution) +
                            "^" + std::to_string(d) +
                            " points is too large; use Monte Carlo");
    std::vector<int> idx(d, 0);
    const long long n = static_cast<long long>(total);
    Vector u(d);
    for (long long k = 0; k < n; ++k) {
      for (int i = 0; i < d; ++i)
        u(i) = lo(i) + (hi(i) - lo(i)) * idx[i] / (source.resolution - 1);
      add(u);
      for (int i = 0; i < d; ++i) {
        if (++idx[i] < source.resolution) break;
        idx[i] = 0;
      }
    }
  } else {
    if (source.count < 1)
      throw InvalidArgument("Monte Carlo count must be positive");
    std::mt19937_64 rng(source.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const long long max_draws = 1000LL * source.count;
    Vector u(d);
    for (long long k = 0;
         k < max_draws && cloud.size() < static_cast<std::size_t>(source.count);
         ++k) {
      for (int i = 0; i < d; ++i) u(i) = lo(i) + (hi(i) - lo(i)) * unit(rng);
      add(u);
    }
  }
  return cloud;
}

SampleCloud reference_front(const MooProblem& problem,
                            const SampleSource& source) {
  SampleCloud cloud = sample_problem(problem, source);
  if (cloud.empty())
    throw EmptyReference("no feasible sample for problem '" + problem.id + "'");
  return greedy_pareto_filter(cloud, FilterMode::strong);
}

namespace {

std::function<Vector(const Vector&)> feasible_map(const MooProblem& problem) {
  if (problem.constraints && problem.constraints->has_projector()) {
    const ConstraintSet k = *problem.constraints;
    return [k](const Vector& u) { return k.project(u); };
  }
  if (problem.feasible_box) {
    const Box b = *problem.feasible_box;
    return [b](const Vector& u) { return Vector(u.cwiseMax(b.lo).cwiseMin(b.hi)); };
  }
  return [](const Vector& u) { return u; };
}

}  // namespace

Vector local_minimize(const MooProblem& problem,
                      const std::function<double(const Vector&)>& fun,
                      const std::function<Vector(const Vector&)>& grad,
                      const Vector& start, const LocalSearchOptions& opts) {
  const auto P = feasible_map(problem);
  Vector u = P(start);
  double f = fun(u);
  Vector g = grad(u);
  double step = 1.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const Vector d = P(u - step * g) - u;
    const double slope = g.dot(d);
    if (d.norm() <= opts.tol || slope >= 0.0) break;
    double t = 1.0;
    Vector trial = u + d;
    double ft = fun(trial);
    while (ft > f + 1e-4 * t * slope && t > 1e-12) {
      t *= 0.5;
      trial = u + t * d;
      ft = fun(trial);
    }
    if (!(ft <= f)) break;
    const Vector s = trial - u;
    const Vector g_new = grad(trial);
    const double sy = s.dot(g_new - g);
    step = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-10, 1e10)
                    : std::min(1e10, 2.0 * step);
    u = trial;
    f = ft;
    g = g_new;
    if (s.norm() <= opts.tol) break;
  }
  return u;
}

std::vector<Vector> simplex_weights(int dim, int divisions) {
  if (dim < 1 || divisions < 0)
    throw InvalidArgument("simplex_weights: bad dimension or divisions");
  std::vector<Vector> out;
  if (dim == 1) return {Vector::Ones(1)};
  if (divisions == 0) return {Vector::Constant(dim, 1.0 / dim)};
  std::vector<int> k(dim, 0);
  // Enumerate compositions of `divisions` into `dim` non-negative parts.
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == dim - 1) {
      k[i] = left;
      Vector w(dim);
      for (int j = 0; j < dim; ++j) w(j) = static_cast<double>(k[j]) / divisions;
      out.push_back(w);
      return;
    }
    for (int v = left; v >= 0; --v) {
      k[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, divisions);
  return out;
}

namespace {

std::vector<std::size_t> best_indices(const std::vector<double>& score,
                                      std::size_t count) {
  std::vector<std::size_t> idx(score.size());
  std::iota(idx.begin(), idx.end(), 0);
  count = std::min(count, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + count, idx.end(),
                    [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
  idx.resize(count);
  return idx;
}

}  // namespace

SampleCloud convex_envelope_front(const MooProblem& problem, int n_weights,
                                  const SampleCloud& seeds, int starts) {
  if (n_weights < 1) throw InvalidArgument("n_weights must be positive");
  if (seeds.empty()) throw EmptyReference("convex_envelope_front: no seeds");
  const int n = problem.dim_obj();
  SampleCloud raw;
  raw.source = seeds.source;
  for (const Vector& lam : simplex_weights(n, n_weights - 1)) {
    std::vector<double> score(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i)
      score[i] = lam.dot(seeds.points_obj[i]);
    auto fun = [&](const Vector& u) { return lam.dot(problem.objective.eval(u)); };
    auto grad = [&](const Vector& u) {
      return Vector(problem.objective.jacobian(u).transpose() * lam);
    };
    // Only the best local minimizer per weight lies on the envelope.
    Vector best_u;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i : best_indices(score, static_cast<std::size_t>(starts))) {
      const Vector u = local_minimize(problem, fun, grad, seeds.points_u[i]);
      const double val = fun(u);
      if (val < best) {
        best = val;
        best_u = u;
      }
    }
    raw.points_u.push_back(best_u);
    raw.points_obj.push_back(problem.objective.eval(best_u));
  }
  return greedy_pareto_filter(raw, FilterMode::strong);
}

namespace {

double directed_distance(const std::vector<Vector>& A,
                         const std::vector<Vector>& B) {
  double worst = 0.0;
  for (const auto& a : A) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : B) best = std::min(best, (a - b).norm());
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

FrontDistance front_distance(const std::vector<Vector>& A,
                             const std::vector<Vector>& B) {
  if (A.empty() || B.empty()) throw EmptyReference("front_distance: empty front");
  FrontDistance d;
  d.forward = directed_distance(A, B);
  d.backward = directed_distance(B, A);
  d.hausdorff = std::max(d.forward, d.backward);
  return d;
}

int nonconvexity_witness(const std::vector<Vector>& front,
                         const std::vector<Vector>& envelope, double margin,
                         double tol) {
  int count = 0;
  const auto nd = pareto_indices(front, FilterMode::strong);
  for (std::size_t i : nd) {
    const Vector& p = front[i];
    bool ok = true;
    for (const auto& e : envelope) {
      if ((p - e).norm() < margin || dominates(e, p, tol) != Dominance::none) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
  }
  return count;
}

ScalarizedMinimumOracle::ScalarizedMinimumOracle(const MooProblem& problem,
                                                 PreferenceFunction g,
                                                 SampleCloud cloud,
                                                 int polish_starts,
                                                 LocalSearchOptions polish)
    : problem_(problem),
      g_(std::move(g)),
      cloud_(std::move(cloud)),
      polish_starts_(polish_starts),
      polish_(polish) {
  if (cloud_.empty()) throw EmptyReference("scalarized minimum: empty cloud");
  if (g_.dim_obj() != problem_.dim_obj())
    throw InvalidArgument("scalarized minimum: preference dimension mismatch");
}

double ScalarizedMinimumOracle::sampled_minimum(const Vector& E) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& y : cloud_.points_obj) best = std::min(best, g_.value(y + E));
  return best;
}

double ScalarizedMinimumOracle::operator()(const Vector& E) const {
  std::vector<double> score(cloud_.size());
  for (std::size_t i = 0; i < cloud_.size(); ++i)
    score[i] = g_.value(cloud_.points_obj[i] + E);
  const auto top = best_indices(score, std::max<std::size_t>(1, polish_starts_));
  double best = score[top.front()];
  if (g_.kind() == PreferenceKind::chebyshev || polish_starts_ <= 0) return best;

  auto fun = [&](const Vector& u) { return g_.value(problem_.objective.eval(u) + E); };
  auto grad = [&](const Vector& u) {
    const Vector y = problem_.objective.eval(u) + E;
    return Vector(problem_.objective.jacobian(u).transpose() * g_.gradient(y));
  };
  for (std::size_t i : top) {
    const Vector u = local_minimize(problem_, fun, grad, cloud_.points_u[i], polish_);
    if (problem_.contains(u)) best = std::min(best, fun(u));
  }
  return best;
}

ScalarizedMinimum ScalarizedMinimumOracle::as_function() const {
  auto self = std::make_shared<const ScalarizedMinimumOracle>(*this);
  return [self](const Vector& E) { return (*self)(E); };
}

}  // namespace hlpareto
