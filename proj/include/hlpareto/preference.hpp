#pragma once

#include <string>

#include "hlpareto/types.hpp"

namespace hlpareto {

enum class PreferenceKind { softmax, weighted_sum, chebyshev };

/// Monotone convex scalarizer g: R^N -> R together with the pieces of convex
/// calculus the primal-dual iteration needs: gradient, prox of g/rho, and
/// (through the Moreau identity) prox of rho g*.
///
/// - softmax(eps):       g(y) = eps log sum_i exp(y_i / eps)
/// - weighted_sum(lam):  g(y) = <lam, y>
/// - chebyshev(lam):     g(y) = max_i lam_i y_i
class PreferenceFunction {
 public:
  static PreferenceFunction softmax(int dim_obj, double eps = 0.1);
  static PreferenceFunction weighted_sum(Vector weights);
  static PreferenceFunction chebyshev(Vector weights);

  PreferenceKind kind() const { return kind_; }
  int dim_obj() const { return dim_obj_; }
  double temperature() const { return eps_; }
  const Vector& weights() const { return weights_; }

  double value(const Vector& y) const;
  /// Throws NotDifferentiable for Chebyshev at a tie.
  Vector gradient(const Vector& y) const;
  bool differentiable_at(const Vector& y) const;

  /// prox_{g/rho}(w) = argmin_y g(y)/rho + |y - w|^2 / 2.
  Vector prox_scaled(const Vector& w, double rho) const;

  /// dom(g*) is bounded for all three kinds: the probability simplex for
  /// softmax, {lam} for the weighted sum, and a weighted simplex for
  /// Chebyshev.
  bool dual_domain_bounded() const { return true; }
  /// Infinity-norm style distance of `pi` from dom(g*).
  double dual_domain_violation(const Vector& pi) const;

  std::string describe() const;

 private:
  PreferenceFunction(PreferenceKind kind, int dim_obj, double eps,
                     Vector weights);

  PreferenceKind kind_;
  int dim_obj_;
  double eps_ = 0.0;
  Vector weights_;
};

/// prox_{rho g*}(v) = v - rho prox_{g/rho}(v / rho).
Vector prox_conjugate(const PreferenceFunction& g, const Vector& v, double rho);

/// Euclidean projection onto {pi >= 0 : sum_i pi_i / lam_i = 1}. With unit
/// weights this is the probability simplex.
Vector project_weighted_simplex(const Vector& v, const Vector& weights);

}  // namespace hlpareto
