#include "hlpareto/constraints.hpp"

#include <algorithm>
#include <utility>

#include "hlpareto/errors.hpp"

namespace hlpareto {

ConstraintSet::ConstraintSet(int dim_u, int dim_con, EvalFn eval,
                             JacobianFn jacobian, Projector projector,
                             double membership_tol)
    : dim_u_(dim_u),
      dim_con_(dim_con),
      eval_(std::move(eval)),
      jacobian_(std::move(jacobian)),
      projector_(std::move(projector)),
      membership_tol_(membership_tol) {
  if (dim_u_ <= 0) throw InvalidArgument("constraints: dim_u must be > 0");
  if (dim_con_ < 0) throw InvalidArgument("constraints: dim_con must be >= 0");
  if (dim_con_ > 0 && (!eval_ || !jacobian_))
    throw InvalidArgument("constraints: eval and jacobian are required");
  if (membership_tol_ < 0.0)
    throw InvalidArgument("constraints: membership_tol must be >= 0");
}

ConstraintSet ConstraintSet::none(int dim_u) {
  return ConstraintSet(
      dim_u, 0, [](const Vector&) { return Vector(0); },
      [dim_u](const Vector&) { return Matrix(0, dim_u); },
      [](const Vector& u) { return u; }, 0.0);
}

ConstraintSet ConstraintSet::box(Vector lo, Vector hi, double membership_tol) {
  if (lo.size() != hi.size() || lo.size() == 0)
    throw InvalidArgument("box: bounds must be nonempty and equal length");
  if ((lo.array() > hi.array()).any())
    throw InvalidArgument("box: lo must not exceed hi");
  const int d = static_cast<int>(lo.size());
  auto eval = [lo, hi](const Vector& u) {
    Vector k(2 * u.size());
    k.head(u.size()) = u - lo;
    k.tail(u.size()) = hi - u;
    return k;
  };
  auto jac = [d](const Vector&) {
    Matrix j = Matrix::Zero(2 * d, d);
    j.topRows(d).setIdentity();
    j.bottomRows(d) = -Matrix::Identity(d, d);
    return j;
  };
  auto proj = [lo, hi](const Vector& u) -> Vector {
    return u.cwiseMax(lo).cwiseMin(hi);
  };
  return ConstraintSet(d, 2 * d, eval, jac, proj, membership_tol);
}

Vector ConstraintSet::eval(const Vector& u) const {
  if (u.size() != dim_u_) throw InvalidArgument("constraints: wrong dimension");
  if (dim_con_ == 0) return Vector(0);
  Vector k = eval_(u);
  if (k.size() != dim_con_)
    throw InvalidArgument("constraints: eval returned wrong dimension");
  return k;
}

Matrix ConstraintSet::jacobian(const Vector& u) const {
  if (u.size() != dim_u_) throw InvalidArgument("constraints: wrong dimension");
  if (dim_con_ == 0) return Matrix(0, dim_u_);
  Matrix j = jacobian_(u);
  if (j.rows() != dim_con_ || j.cols() != dim_u_)
    throw InvalidArgument("constraints: jacobian has wrong shape");
  return j;
}

Vector ConstraintSet::project(const Vector& u) const {
  if (!projector_)
    throw UnsupportedOperation("constraints: no projector available");
  return projector_(u);
}

double ConstraintSet::violation(const Vector& u) const {
  if (dim_con_ == 0) return 0.0;
  return std::max(0.0, -eval(u).minCoeff());
}

}  // namespace hlpareto
