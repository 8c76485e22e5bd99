#pragma once

#include <functional>
#include <optional>

#include "hlpareto/types.hpp"

namespace hlpareto {

/// Inequality constraints k(u) >= 0 with k: R^d -> R^m, optionally equipped
/// with a Euclidean projector onto K = {u : k(u) >= 0}.
class ConstraintSet {
 public:
  using EvalFn = std::function<Vector(const Vector&)>;
  using JacobianFn = std::function<Matrix(const Vector&)>;
  using Projector = std::function<Vector(const Vector&)>;

  ConstraintSet(int dim_u, int dim_con, EvalFn eval, JacobianFn jacobian,
                Projector projector = {}, double membership_tol = 1e-6);

  /// No constraints at all (m = 0). The constrained solver then reproduces
  /// the unconstrained iteration exactly.
  static ConstraintSet none(int dim_u);
  /// lo <= u <= hi, written as m = 2d constraints (u - lo, hi - u), with the
  /// componentwise clamp as projector.
  static ConstraintSet box(Vector lo, Vector hi, double membership_tol = 1e-6);

  int dim_u() const { return dim_u_; }
  int dim_con() const { return dim_con_; }
  double membership_tol() const { return membership_tol_; }
  bool has_projector() const { return static_cast<bool>(projector_); }

  Vector eval(const Vector& u) const;
  /// m x d matrix.
  Matrix jacobian(const Vector& u) const;
  Vector project(const Vector& u) const;

  /// max(0, -min_i k_i(u)); zero when m = 0.
  double violation(const Vector& u) const;
  bool contains(const Vector& u) const {
    return violation(u) <= membership_tol_;
  }

 private:
  int dim_u_;
  int dim_con_;
  EvalFn eval_;
  JacobianFn jacobian_;
  Projector projector_;
  double membership_tol_;
};

}  // namespace hlpareto
