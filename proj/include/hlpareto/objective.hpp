#pragma once

#include <functional>

#include "hlpareto/types.hpp"

namespace hlpareto {

inline constexpr double kDefaultFiniteDifferenceStep = 1e-6;

/// Central finite-difference Jacobian of `eval` at `u`.
///
/// The step actually taken in each direction is the representable difference
/// (u_i + h) - u_i, so affine maps are differentiated exactly.
Matrix central_difference_jacobian(
    const std::function<Vector(const Vector&)>& eval, const Vector& u,
    double h = kDefaultFiniteDifferenceStep);

/// A smooth map l: R^d -> R^N with Jacobian access. When no analytic Jacobian
/// is supplied, central differences with step `fd_step` are used.
class VectorObjective {
 public:
  using EvalFn = std::function<Vector(const Vector&)>;
  using JacobianFn = std::function<Matrix(const Vector&)>;

  VectorObjective(int dim_u, int dim_obj, EvalFn eval, JacobianFn jacobian = {},
                  double fd_step = kDefaultFiniteDifferenceStep);

  int dim_u() const { return dim_u_; }
  int dim_obj() const { return dim_obj_; }
  bool has_analytic_jacobian() const { return static_cast<bool>(jacobian_); }

  Vector eval(const Vector& u) const;
  /// N x d matrix.
  Matrix jacobian(const Vector& u) const;

 private:
  int dim_u_;
  int dim_obj_;
  EvalFn eval_;
  JacobianFn jacobian_;
  double fd_step_;
};

/// Max over entries of |J_analytic - J_fd| / max(1, |J_analytic|).
double jacobian_check(const VectorObjective& f, const Vector& u,
                      double h = kDefaultFiniteDifferenceStep);

}  // namespace hlpareto
