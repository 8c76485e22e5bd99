#pragma once

#include <Eigen/Core>

#include <string>

namespace hlpareto {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Throws InvalidArgument if any entry of `v` is NaN or infinite.
void require_finite(const Vector& v, const std::string& what);

/// R(u) = mu/2 |u|^2.
struct QuadraticRegularizer {
  double mu = 0.01;

  explicit QuadraticRegularizer(double mu_);

  double value(const Vector& u) const { return 0.5 * mu * u.squaredNorm(); }
  Vector gradient(const Vector& u) const { return mu * u; }
  /// Gradient of the conjugate R*(p) = |p|^2/(2 mu).
  Vector conjugate_gradient(const Vector& p) const { return p / mu; }
};

/// D_R(u, v) = R(u) - R(v) - <grad R(v), u - v> = mu/2 |u - v|^2.
double bregman_divergence(const QuadraticRegularizer& reg, const Vector& u,
                          const Vector& v);

/// Data of the quadratic Hopf-Lax problem: state (x, tau), horizon alpha,
/// terminal-cost weight c and regularization mu.
struct HopfLaxParams {
  Vector x;
  Vector tau;
  double alpha = 1.0;
  double c = 0.1;
  double mu = 0.01;

  void validate() const;

  /// p = c (x - alpha u)
  Vector dual_p(const Vector& u) const { return c * (x - alpha * u); }
  /// E = c (tau + alpha pi)
  Vector dual_E(const Vector& pi) const { return c * (tau + alpha * pi); }
  /// mu + alpha c, the uniform curvature floor of every preconditioner.
  double curvature_floor() const { return mu + alpha * c; }
  QuadraticRegularizer regularizer() const { return QuadraticRegularizer(mu); }
};

}  // namespace hlpareto
