#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "hlpareto/preference.hpp"
#include "hlpareto/problem.hpp"
#include "hlpareto/solver.hpp"

namespace hlpareto {

enum class Dominance { none, weak, strict };

/// Coordinatewise dominance of `a` over `b` (minimization). With eps > 0 the
/// comparison is relaxed: strict iff a_i < b_i - eps for all i; weak iff
/// a_i <= b_i + eps for all i with at least one a_i < b_i - eps.
Dominance dominates(const Vector& a, const Vector& b, double eps = 0.0);

enum class FilterMode {
  strong,  ///< drop points weakly or strictly dominated by another point
  weak,    ///< drop only strictly dominated points
};

/// Indices of the non-dominated points, in input order. Uses a sort-based
/// sweep for N = 2 and pairwise comparison otherwise.
std::vector<std::size_t> pareto_indices(const std::vector<Vector>& points,
                                        FilterMode mode = FilterMode::strong);

/// Plain all-pairs reference for pareto_indices.
std::vector<std::size_t> all_pairs_pareto_indices(
    const std::vector<Vector>& points, FilterMode mode = FilterMode::strong);

struct SampleSource {
  enum class Kind { grid, monte_carlo };
  Kind kind = Kind::monte_carlo;
  int resolution = 150;      ///< grid points per axis
  int count = 20000;         ///< feasible Monte Carlo samples
  std::uint64_t seed = 7;

  static SampleSource grid(int resolution) {
    return {Kind::grid, resolution, 0, 0};
  }
  static SampleSource monte_carlo(int count, std::uint64_t seed) {
    return {Kind::monte_carlo, 0, count, seed};
  }
};

struct SampleCloud {
  std::vector<Vector> points_u;
  std::vector<Vector> points_obj;
  SampleSource source;

  std::size_t size() const { return points_u.size(); }
  bool empty() const { return points_u.empty(); }
};

SampleCloud greedy_pareto_filter(const SampleCloud& cloud,
                                 FilterMode mode = FilterMode::strong);

/// Evaluates the objectives on feasible samples of the problem's bounding box
/// (uniform grid, or Monte Carlo with rejection until `count` feasible
/// samples are found). No filtering.
SampleCloud sample_problem(const MooProblem& problem, const SampleSource& source);

/// sample_problem followed by the strong greedy filter. Throws EmptyReference
/// when no feasible sample was found.
SampleCloud reference_front(const MooProblem& problem,
                            const SampleSource& source);

struct LocalSearchOptions {
  int max_iterations = 500;
  double tol = 1e-10;
};

/// Spectral projected gradient on a smooth function over the problem's
/// feasible set (projector, else bounding-box clamp, else unconstrained).
Vector local_minimize(const MooProblem& problem,
                      const std::function<double(const Vector&)>& fun,
                      const std::function<Vector(const Vector&)>& grad,
                      const Vector& start, const LocalSearchOptions& opts = {});

/// Weights on the simplex lattice with `divisions` steps per axis.
std::vector<Vector> simplex_weights(int dim, int divisions);

/// Supported part of the front: minimizes lam^T l(u) for lam on a simplex
/// lattice (n_weights points per edge), multi-started from the best samples
/// of `seeds`. The best minimizer per weight is kept, then filtered.
SampleCloud convex_envelope_front(const MooProblem& problem, int n_weights,
                                  const SampleCloud& seeds, int starts = 16);

struct FrontDistance {
  double forward = 0.0;   ///< max_{a in A} min_{b in B} |a - b|
  double backward = 0.0;  ///< max_{b in B} min_{a in A} |a - b|
  double hausdorff = 0.0;
};

FrontDistance front_distance(const std::vector<Vector>& A,
                             const std::vector<Vector>& B);

/// Number of front points that are non-dominated within the front, lie at
/// least `margin` away from every envelope point, and are not dominated by
/// any envelope point (up to `tol`).
int nonconvexity_witness(const std::vector<Vector>& front,
                         const std::vector<Vector>& envelope, double margin,
                         double tol = 1e-9);

/// Estimate of m(E) = inf_{u in K} g(l(u) + E): the minimum over a sample
/// cloud, refined by local descent from the best few samples. Chebyshev
/// scalarizers are not refined.
class ScalarizedMinimumOracle {
 public:
  ScalarizedMinimumOracle(const MooProblem& problem, PreferenceFunction g,
                          SampleCloud cloud, int polish_starts = 4,
                          LocalSearchOptions polish = {});

  double operator()(const Vector& E) const;
  /// Minimum over the cloud only, without refinement.
  double sampled_minimum(const Vector& E) const;

  /// Copies the oracle into a callable.
  ScalarizedMinimum as_function() const;

 private:
  MooProblem problem_;
  PreferenceFunction g_;
  SampleCloud cloud_;
  int polish_starts_;
  LocalSearchOptions polish_;
};

}  // namespace hlpareto
