#include "hlpareto/objective.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "hlpareto/errors.hpp"

namespace hlpareto {

Matrix central_difference_jacobian(
    const std::function<Vector(const Vector&)>& eval, const Vector& u,
    double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite difference step must be > 0");
  const Vector f0 = eval(u);
  Matrix jac(f0.size(), u.size());
  Vector up = u;
  Vector dn = u;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    up(i) = u(i) + h;
    dn(i) = u(i) - h;
    const double step = (up(i) - u(i)) + (u(i) - dn(i));
    jac.col(i) = (eval(up) - eval(dn)) / step;
    up(i) = u(i);
    dn(i) = u(i);
  }
  return jac;
}

VectorObjective::VectorObjective(int dim_u, int dim_obj, EvalFn eval,
                                 JacobianFn jacobian, double fd_step)
    : dim_u_(dim_u),
      dim_obj_(dim_obj),
      eval_(std::move(eval)),
      jacobian_(std::move(jacobian)),
      fd_step_(fd_step) {
  if (dim_u_ <= 0 || dim_obj_ <= 0)
    throw InvalidArgument("objective dimensions must be positive");
  if (!eval_) throw InvalidArgument("objective needs an evaluation function");
  if (!(fd_step_ > 0.0))
    throw InvalidArgument("finite difference step must be > 0");
}

Vector VectorObjective::eval(const Vector& u) const {
  if (u.size() != dim_u_)
    throw InvalidArgument("objective: wrong decision dimension");
  Vector y = eval_(u);
  if (y.size() != dim_obj_)
    throw InvalidArgument("objective: eval returned wrong dimension");
  return y;
}

Matrix VectorObjective::jacobian(const Vector& u) const {
  if (u.size() != dim_u_)
    throw InvalidArgument("objective: wrong decision dimension");
  if (jacobian_) {
    Matrix jac = jacobian_(u);
    if (jac.rows() != dim_obj_ || jac.cols() != dim_u_)
      throw InvalidArgument("objective: jacobian has wrong shape");
    return jac;
  }
  return central_difference_jacobian(eval_, u, fd_step_);
}

double jacobian_check(const VectorObjective& f, const Vector& u, double h) {
  const Matrix analytic = f.jacobian(u);
  const Matrix numeric = central_difference_jacobian(
      [&f](const Vector& v) { return f.eval(v); }, u, h);
  double worst = 0.0;
  for (Eigen::Index r = 0; r < analytic.rows(); ++r) {
    for (Eigen::Index c = 0; c < analytic.cols(); ++c) {
      const double scale = std::max(1.0, std::abs(analytic(r, c)));
      worst = std::max(worst, std::abs(analytic(r, c) - numeric(r, c)) / scale);
    }
  }
  return worst;
}

}  // namespace hlpareto
